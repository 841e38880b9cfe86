#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hat/autodiff/gradient_map.hpp"
#include "hat/eval/predict.hpp"

namespace hat::eval {

// One direction tensor per parameter, keyed like the parameters.
using Direction = ad::GradientMap;

inline constexpr std::size_t kLandscapeSampleSize = 256;

// Gaussian direction rescaled filter by filter to the norms of the
// corresponding filters of the model: embedding rows (one word vector each),
// recurrent weight columns (one gate unit each), head weight rows (one class
// each). Bias vectors are rescaled as a whole.
Direction random_direction(const model::HierarchicalModel& model, std::mt19937_64& rng);

// Two directions drawn one after the other from one generator seeded with `seed`.
std::pair<Direction, Direction> random_directions(const model::HierarchicalModel& model, std::uint64_t seed);

struct LandscapeGrid {
  std::vector<double> alphas;
  std::vector<double> betas;
  std::vector<double> values;  // values[i * betas.size() + j] at (alphas[i], betas[j])
  double range = 1.0;
  std::size_t steps = 0;
  std::uint64_t seed = 0;
  std::size_t sample_size = 0;

  double at(std::size_t i, std::size_t j) const { return values[i * betas.size() + j]; }
  double center() const { return at(steps / 2, steps / 2); }
  // Mean of |f(a, b) - f(0, 0)| over all cells.
  double mean_abs_deviation() const;
};

// linspace(-range, range, steps). Throws ConfigError unless steps is odd and range > 0.
std::vector<double> grid_axis(double range, std::size_t steps);

// Mean event loss of the model shifted by a*d_x + b*d_y at every grid cell,
// on the first 256 events of the sample (or all of them if fewer). The
// center cell uses the unshifted parameters. The model is not modified.
LandscapeGrid landscape_scan(const model::HierarchicalModel& model, std::span<const data::Event> sample,
                             double range, std::size_t steps, std::uint64_t seed,
                             const EvalOptions& options = {});

// Header row ("alpha\\beta", then the beta values); one row per alpha.
void write_landscape_csv(const std::filesystem::path& path, const LandscapeGrid& grid);
// JSON sidecar with seed, range, steps, sample size and checkpoint id.
void write_landscape_meta(const std::filesystem::path& path, const LandscapeGrid& grid,
                          const std::string& checkpoint_id);

}  // namespace hat::eval
