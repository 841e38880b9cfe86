#include "hat/train/perturbation.hpp"

#include <cmath>

#include "hat/autodiff/gradient_map.hpp"
#include "hat/errors.hpp"
#include "hat/model/forward.hpp"
#include "hat/simd/kernels.hpp"

namespace hat::train {

Tensor per_event_normalize(const Tensor& grad, const std::vector<std::size_t>& row_events, std::size_t num_events,
                           double eps) {
  if (eps < 0.0) throw ConfigError("perturbation coefficient must be non-negative");
  const std::size_t rows = grad.rows();
  const std::size_t cols = grad.cols();
  if (row_events.size() != rows) {
    throw ShapeError("row ownership covers " + std::to_string(row_events.size()) + " rows, gradient has " +
                     std::to_string(rows));
  }
  const auto& k = simd::kernels();
  std::vector<double> sq(num_events, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    if (row_events[r] >= num_events) throw ShapeError("row owner outside the batch");
    sq[row_events[r]] += k.sum_squares(grad.data() + r * cols, cols);
  }
  std::vector<double> factor(num_events, 0.0);
  for (std::size_t e = 0; e < num_events; ++e) {
    const double norm = std::sqrt(sq[e]);
    if (norm >= ad::kDegenerateNorm && eps > 0.0) factor[e] = eps / norm;
  }
  Tensor out = Tensor::zeros_like(grad);
  for (std::size_t r = 0; r < rows; ++r) {
    const double f = factor[row_events[r]];
    if (f == 0.0) continue;
    const double* src = grad.data() + r * cols;
    double* dst = out.data() + r * cols;
    for (std::size_t c = 0; c < cols; ++c) dst[c] = f * src[c];
  }
  return out;
}

Tensor post_perturbation(const Tensor& word_grad, const data::Batch& batch, double eps_p) {
  return per_event_normalize(word_grad, model::word_block_events(batch), batch.num_events, eps_p);
}

Tensor event_perturbation(const Tensor& post_grad, const data::Batch& batch, double eps_e) {
  return per_event_normalize(post_grad, model::post_block_events(batch), batch.num_events, eps_e);
}

}  // namespace hat::train
