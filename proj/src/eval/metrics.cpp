#include "hat/eval/metrics.hpp"

#include "hat/errors.hpp"

namespace hat::eval {

namespace {
double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}
}  // namespace

Confusion confusion(const std::vector<data::Label>& truth, const std::vector<data::Label>& predicted) {
  if (truth.size() != predicted.size()) {
    throw ShapeError(std::to_string(truth.size()) + " labels but " + std::to_string(predicted.size()) + " predictions");
  }
  Confusion c;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool actual = truth[i] == data::Label::rumor;
    const bool guess = predicted[i] == data::Label::rumor;
    if (actual && guess) ++c.tp;
    else if (!actual && guess) ++c.fp;
    else if (!actual && !guess) ++c.tn;
    else ++c.fn;
  }
  return c;
}

double harmonic_mean(double a, double b) { return a + b == 0.0 ? 0.0 : 2.0 * a * b / (a + b); }

Metrics compute_metrics(const Confusion& c) {
  if (c.total() == 0) throw DataError("metrics over an empty dataset");
  Metrics m;
  m.counts = c;
  m.accuracy = ratio(c.tp + c.tn, c.total());
  m.precision = ratio(c.tp, c.tp + c.fp);
  m.recall = ratio(c.tp, c.tp + c.fn);
  m.f1 = harmonic_mean(m.precision, m.recall);
  const double neg_precision = ratio(c.tn, c.tn + c.fn);
  const double neg_recall = ratio(c.tn, c.tn + c.fp);
  m.macro_precision = 0.5 * (m.precision + neg_precision);
  m.macro_recall = 0.5 * (m.recall + neg_recall);
  m.macro_f1 = 0.5 * (m.f1 + harmonic_mean(neg_precision, neg_recall));
  return m;
}

}  // namespace hat::eval
