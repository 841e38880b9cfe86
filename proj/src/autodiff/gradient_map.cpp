#include "hat/autodiff/gradient_map.hpp"

#include <cmath>

#include "hat/errors.hpp"
#include "hat/simd/kernels.hpp"

namespace hat::ad {

const Tensor& GradientMap::at(const std::string& name) const {
  auto it = grads_.find(name);
  if (it == grads_.end()) throw std::out_of_range("no gradient for leaf '" + name + "'");
  return it->second;
}

Tensor& GradientMap::at(const std::string& name) {
  auto it = grads_.find(name);
  if (it == grads_.end()) throw std::out_of_range("no gradient for leaf '" + name + "'");
  return it->second;
}

Tensor GradientMap::extract(const std::string& name) {
  auto node = grads_.extract(name);
  if (node.empty()) throw std::out_of_range("no gradient for leaf '" + name + "'");
  return std::move(node.mapped());
}

std::vector<std::string> GradientMap::names() const {
  std::vector<std::string> out;
  out.reserve(grads_.size());
  for (const auto& [name, _] : grads_) out.push_back(name);
  return out;
}

bool GradientMap::same_leaves(const GradientMap& other) const {
  if (grads_.size() != other.grads_.size()) return false;
  auto a = grads_.begin();
  auto b = other.grads_.begin();
  for (; a != grads_.end(); ++a, ++b) {
    if (a->first != b->first || a->second.shape() != b->second.shape()) return false;
  }
  return true;
}

void GradientMap::add_scaled(const GradientMap& other, double scale) {
  if (!same_leaves(other)) {
    throw ShapeError("gradient maps cover different leaves or shapes");
  }
  const auto& k = simd::kernels();
  auto b = other.grads_.begin();
  for (auto& [name, t] : grads_) {
    const Tensor& o = (b++)->second;
    if (scale == 1.0) {
      k.add(t.data(), o.data(), t.data(), t.size());
    } else {
      k.axpy(scale, o.data(), t.data(), t.size());
    }
  }
}

void GradientMap::scale(double s) {
  const auto& k = simd::kernels();
  for (auto& [_, t] : grads_) k.scale(s, t.data(), t.data(), t.size());
}

double GradientMap::global_norm() const {
  double sq = 0.0;
  for (const auto& [_, t] : grads_) sq += simd::kernels().sum_squares(t.data(), t.size());
  return std::sqrt(sq);
}

bool GradientMap::all_finite() const {
  for (const auto& [_, t] : grads_) {
    if (!t.all_finite()) return false;
  }
  return true;
}

bool bitwise_equal(const GradientMap& a, const GradientMap& b) {
  if (a.size() != b.size()) return false;
  auto ib = b.begin();
  for (auto ia = a.begin(); ia != a.end(); ++ia, ++ib) {
    if (ia->first != ib->first || !bitwise_equal(ia->second, ib->second)) return false;
  }
  return true;
}

Tensor normalize_scale(const Tensor& g, double eps) {
  if (!(eps >= 0.0)) {
    throw ConfigError("perturbation coefficient must be non-negative, got " + std::to_string(eps));
  }
  Tensor out = Tensor::zeros_like(g);
  const double norm = g.l2_norm();
  if (norm < kDegenerateNorm || eps == 0.0) return out;
  simd::kernels().scale(eps / norm, g.data(), out.data(), g.size());
  return out;
}

}  // namespace hat::ad
