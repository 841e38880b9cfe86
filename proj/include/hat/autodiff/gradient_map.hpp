#pragma once

#include <map>
#include <string>
#include <vector>

#include "hat/autodiff/tensor.hpp"

namespace hat::ad {

// Gradients keyed by leaf name. Each entry has the shape of its leaf.
class GradientMap {
 public:
  using Storage = std::map<std::string, Tensor>;

  GradientMap() = default;

  void set(const std::string& name, Tensor grad) { grads_[name] = std::move(grad); }
  bool contains(const std::string& name) const { return grads_.count(name) != 0; }
  const Tensor& at(const std::string& name) const;
  Tensor& at(const std::string& name);

  // Removes and returns an entry.
  Tensor extract(const std::string& name);

  std::size_t size() const noexcept { return grads_.size(); }
  std::vector<std::string> names() const;
  bool same_leaves(const GradientMap& other) const;

  // this += scale * other. Throws ShapeError unless the leaf sets and shapes match.
  void add_scaled(const GradientMap& other, double scale = 1.0);
  void scale(double s);
  double global_norm() const;
  bool all_finite() const;

  Storage::const_iterator begin() const { return grads_.begin(); }
  Storage::const_iterator end() const { return grads_.end(); }

  friend bool operator==(const GradientMap& a, const GradientMap& b) {
    return a.grads_ == b.grads_;
  }

 private:
  Storage grads_;
};

bool bitwise_equal(const GradientMap& a, const GradientMap& b);

// eps * g / ||g||_2 with the L2 norm over all entries; the zero tensor when
// ||g||_2 < 1e-12. Throws ConfigError for eps < 0.
Tensor normalize_scale(const Tensor& g, double eps);

inline constexpr double kDegenerateNorm = 1e-12;

}  // namespace hat::ad
