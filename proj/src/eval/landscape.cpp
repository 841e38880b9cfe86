#include "hat/eval/landscape.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>

#include "hat/errors.hpp"
#include "hat/train/optimizer.hpp"
#include "json.hpp"

namespace hat::eval {

namespace {

enum class FilterAxis { rows, cols, whole };

FilterAxis filter_axis(const std::string& name, const ad::Tensor& t) {
  if (t.rank() < 2) return FilterAxis::whole;
  if (name.ends_with(".w_input") || name.ends_with(".w_hidden")) return FilterAxis::cols;
  return FilterAxis::rows;
}

// Rescales the entries of d at the given flat positions to the norm of the
// same entries of w.
template <class Index>
void match_norm(const ad::Tensor& w, ad::Tensor& d, std::size_t count, Index index) {
  double wn = 0.0, dn = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t k = index(i);
    wn += w[k] * w[k];
    dn += d[k] * d[k];
  }
  wn = std::sqrt(wn);
  dn = std::sqrt(dn);
  const double f = dn > 0.0 ? wn / dn : 0.0;
  for (std::size_t i = 0; i < count; ++i) d[index(i)] *= f;
}

}  // namespace

Direction random_direction(const model::HierarchicalModel& model, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Direction dir;
  model.for_each_parameter([&](const std::string& name, const ad::Tensor& w) {
    ad::Tensor d = ad::Tensor::zeros_like(w);
    for (auto& v : d.values()) v = gauss(rng);
    const std::size_t rows = w.rows();
    const std::size_t cols = w.cols();
    switch (filter_axis(name, w)) {
      case FilterAxis::whole:
        match_norm(w, d, w.size(), [](std::size_t i) { return i; });
        break;
      case FilterAxis::rows:
        for (std::size_t r = 0; r < rows; ++r) match_norm(w, d, cols, [&](std::size_t i) { return r * cols + i; });
        break;
      case FilterAxis::cols:
        for (std::size_t c = 0; c < cols; ++c) match_norm(w, d, rows, [&](std::size_t i) { return i * cols + c; });
        break;
    }
    dir.set(name, std::move(d));
  });
  return dir;
}

std::pair<Direction, Direction> random_directions(const model::HierarchicalModel& model, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Direction dx = random_direction(model, rng);
  Direction dy = random_direction(model, rng);
  return {std::move(dx), std::move(dy)};
}

double LandscapeGrid::mean_abs_deviation() const {
  const double c = center();
  double sum = 0.0;
  for (double v : values) sum += std::abs(v - c);
  return sum / static_cast<double>(values.size());
}

std::vector<double> grid_axis(double range, std::size_t steps) {
  if (steps == 0 || steps % 2 == 0) throw ConfigError("landscape steps must be odd so the origin is sampled");
  if (!(range > 0.0)) throw ConfigError("landscape range must be positive");
  std::vector<double> axis(steps, 0.0);
  if (steps == 1) return axis;
  const std::size_t half = steps / 2;
  for (std::size_t i = 0; i < steps; ++i) {
    const double k = static_cast<double>(i) - static_cast<double>(half);
    axis[i] = range * k / static_cast<double>(half);
  }
  return axis;
}

LandscapeGrid landscape_scan(const model::HierarchicalModel& model, std::span<const data::Event> sample,
                             double range, std::size_t steps, std::uint64_t seed, const EvalOptions& options) {
  if (sample.empty()) throw DataError("landscape sample is empty");
  const auto fixed = sample.first(std::min(sample.size(), kLandscapeSampleSize));
  LandscapeGrid grid;
  grid.alphas = grid_axis(range, steps);
  grid.betas = grid.alphas;
  grid.range = range;
  grid.steps = steps;
  grid.seed = seed;
  grid.sample_size = fixed.size();
  grid.values.assign(steps * steps, 0.0);

  const auto [dx, dy] = random_directions(model, seed);
  model::HierarchicalModel shifted = model;
  std::vector<std::pair<std::string, const ad::Tensor*>> base;
  model.for_each_parameter([&](const std::string& name, const ad::Tensor& t) { base.emplace_back(name, &t); });
  const train::ParameterSet target = train::parameters(shifted);
  for (std::size_t i = 0; i < steps; ++i) {
    for (std::size_t j = 0; j < steps; ++j) {
      const double a = grid.alphas[i];
      const double b = grid.betas[j];
      if (a == 0.0 && b == 0.0) {
        grid.values[i * steps + j] = mean_event_loss(model, fixed, options);
        continue;
      }
      for (std::size_t p = 0; p < base.size(); ++p) {
        const ad::Tensor& w = *base[p].second;
        const ad::Tensor& u = dx.at(base[p].first);
        const ad::Tensor& v = dy.at(base[p].first);
        ad::Tensor& out = *target[p].second;
        for (std::size_t k = 0; k < w.size(); ++k) out[k] = w[k] + a * u[k] + b * v[k];
      }
      grid.values[i * steps + j] = mean_event_loss(shifted, fixed, options);
    }
  }
  return grid;
}

void write_landscape_csv(const std::filesystem::path& path, const LandscapeGrid& grid) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << std::setprecision(17) << "alpha\\beta";
  for (double b : grid.betas) out << ',' << b;
  out << '\n';
  for (std::size_t i = 0; i < grid.alphas.size(); ++i) {
    out << grid.alphas[i];
    for (std::size_t j = 0; j < grid.betas.size(); ++j) out << ',' << grid.at(i, j);
    out << '\n';
  }
}

void write_landscape_meta(const std::filesystem::path& path, const LandscapeGrid& grid,
                          const std::string& checkpoint_id) {
  nlohmann::json j;
  j["seed"] = grid.seed;
  j["range"] = grid.range;
  j["steps"] = grid.steps;
  j["sample_size"] = grid.sample_size;
  j["loss"] = "mean event loss";
  j["checkpoint"] = checkpoint_id;
  j["center_loss"] = grid.center();
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace hat::eval
