#include "hat/train/optimizer.hpp"

#include <cmath>

#include "hat/errors.hpp"

namespace hat::train {

ParameterSet parameters(model::HierarchicalModel& model) {
  ParameterSet out;
  model.for_each_parameter([&](const std::string& name, Tensor& t) { out.emplace_back(name, &t); });
  return out;
}

const char* to_string(OptimizerKind kind) { return kind == OptimizerKind::sgd ? "sgd" : "adam"; }

OptimizerKind parse_optimizer(const std::string& text) {
  if (text == "sgd") return OptimizerKind::sgd;
  if (text == "adam") return OptimizerKind::adam;
  throw ConfigError("unknown optimizer '" + text + "' (expected sgd or adam)");
}

Optimizer::Optimizer(OptimizerConfig config) : config_(config) {
  if (!(config_.learning_rate >= 0.0)) throw ConfigError("learning rate must be non-negative");
}

void Optimizer::step(const ParameterSet& params, const GradientMap& grad) {
  if (grad.size() != params.size()) {
    throw ShapeError("gradient covers " + std::to_string(grad.size()) + " leaves, optimizer has " +
                     std::to_string(params.size()) + " parameters");
  }
  for (const auto& [name, t] : params) {
    if (!grad.contains(name)) throw ShapeError("no gradient for parameter '" + name + "'");
    if (grad.at(name).shape() != t->shape()) {
      throw ShapeError("gradient for '" + name + "' has shape " + ad::to_string(grad.at(name).shape()) +
                       ", parameter has " + ad::to_string(t->shape()));
    }
  }
  ++steps_;
  const double lr = config_.learning_rate;
  if (config_.kind == OptimizerKind::sgd) {
    for (const auto& [name, t] : params) {
      const Tensor& g = grad.at(name);
      double* w = t->data();
      for (std::size_t i = 0; i < t->size(); ++i) w[i] -= lr * g[i];
    }
    return;
  }
  const double b1 = config_.beta1;
  const double b2 = config_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(steps_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(steps_));
  for (const auto& [name, t] : params) {
    const Tensor& g = grad.at(name);
    auto [m_it, m_new] = first_.try_emplace(name, Tensor::zeros_like(*t));
    auto [v_it, v_new] = second_.try_emplace(name, Tensor::zeros_like(*t));
    double* m = m_it->second.data();
    double* v = v_it->second.data();
    double* w = t->data();
    for (std::size_t i = 0; i < t->size(); ++i) {
      m[i] = b1 * m[i] + (1.0 - b1) * g[i];
      v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
      w[i] -= lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + config_.epsilon);
    }
  }
}

}  // namespace hat::train
