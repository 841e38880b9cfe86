#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hat/autodiff/gradient_map.hpp"
#include "hat/model/hierarchical_model.hpp"

namespace hat::train {

using ad::GradientMap;
using ad::Tensor;

// Named, mutable views of the tensors an optimizer updates.
using ParameterSet = std::vector<std::pair<std::string, Tensor*>>;

ParameterSet parameters(model::HierarchicalModel& model);

enum class OptimizerKind { sgd, adam };

const char* to_string(OptimizerKind kind);
// Accepts "sgd" and "adam". Throws ConfigError otherwise.
OptimizerKind parse_optimizer(const std::string& text);

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::adam;
  double learning_rate = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

class Optimizer {
 public:
  explicit Optimizer(OptimizerConfig config);

  // Applies one update. The gradient leaf set must equal the parameter
  // names, with matching shapes; throws ShapeError otherwise.
  void step(const ParameterSet& params, const GradientMap& grad);

  const OptimizerConfig& config() const noexcept { return config_; }
  std::size_t steps_taken() const noexcept { return steps_; }

 private:
  OptimizerConfig config_;
  std::size_t steps_ = 0;
  std::map<std::string, Tensor> first_;
  std::map<std::string, Tensor> second_;
};

}  // namespace hat::train
