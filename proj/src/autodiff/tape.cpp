#include "hat/autodiff/tape.hpp"

#include <algorithm>
#include <cmath>

#include "hat/errors.hpp"
#include "hat/simd/kernels.hpp"

namespace hat::ad {

const char* op_name(OpKind kind) {
  switch (kind) {
    case OpKind::leaf: return "leaf";
    case OpKind::constant: return "constant";
    case OpKind::matmul: return "matmul";
    case OpKind::add: return "add";
    case OpKind::sub: return "sub";
    case OpKind::mul: return "mul";
    case OpKind::add_bias: return "add_bias";
    case OpKind::scale: return "scale";
    case OpKind::concat_cols: return "concat_cols";
    case OpKind::slice_cols: return "slice_cols";
    case OpKind::slice_rows: return "slice_rows";
    case OpKind::gather_rows: return "gather_rows";
    case OpKind::select_cols: return "select_cols";
    case OpKind::transpose: return "transpose";
    case OpKind::sigmoid: return "sigmoid";
    case OpKind::tanh: return "tanh";
    case OpKind::softmax_rows: return "softmax_rows";
    case OpKind::log: return "log";
    case OpKind::clamp: return "clamp";
    case OpKind::sum_all: return "sum_all";
    case OpKind::mean_all: return "mean_all";
    case OpKind::mean_axis: return "mean_axis";
  }
  return "?";
}

const Tensor& Var::value() const {
  if (!tape_) throw std::logic_error("value() on an unbound Var");
  return tape_->value(index_);
}

const Tensor& Tape::value(std::uint32_t index) const { return nodes_.at(index).value(); }

Var Tape::push(Node node) {
  nodes_.push_back(std::move(node));
  return Var(this, static_cast<std::uint32_t>(nodes_.size() - 1));
}

Var Tape::register_leaf(const std::string& name, Node node) {
  for (const auto& r : registry_) {
    if (r.name == name) throw std::invalid_argument("leaf '" + name + "' registered twice");
  }
  node.kind = OpKind::leaf;
  node.requires_grad = true;
  node.registry = static_cast<int>(registry_.size());
  Var v = push(std::move(node));
  registry_.push_back({name, v.index()});
  return v;
}

Var Tape::leaf(const std::string& name, const Tensor& value) {
  Node n;
  n.external = &value;
  return register_leaf(name, std::move(n));
}

Var Tape::leaf_copy(const std::string& name, Tensor value) {
  Node n;
  n.owned = std::move(value);
  return register_leaf(name, std::move(n));
}

Var Tape::constant(Tensor value) {
  Node n;
  n.kind = OpKind::constant;
  n.owned = std::move(value);
  return push(std::move(n));
}

void Tape::watch(Var v, const std::string& name) {
  if (v.tape() != this) throw std::invalid_argument("watch: Var belongs to another tape");
  Node& n = nodes_.at(v.index());
  if (n.registry >= 0) throw std::invalid_argument("watch: value already registered");
  for (const auto& r : registry_) {
    if (r.name == name) throw std::invalid_argument("leaf '" + name + "' registered twice");
  }
  n.registry = static_cast<int>(registry_.size());
  n.requires_grad = true;
  registry_.push_back({name, v.index()});
}

bool Tape::is_registered(Var v) const {
  return v.tape() == this && nodes_.at(v.index()).registry >= 0;
}

namespace {

const simd::KernelTable& K() { return simd::kernels(); }

Tensor& slot(std::vector<Tensor>& grads, std::uint32_t index, const Shape& shape) {
  Tensor& g = grads[index];
  if (g.empty()) g = Tensor(shape);
  return g;
}

// Destination for a product written in one go: an uninitialized buffer if
// nothing has been accumulated yet. Returns whether to accumulate.
bool product_slot(std::vector<Tensor>& grads, std::uint32_t index, const Shape& shape) {
  Tensor& g = grads[index];
  if (!g.empty()) return true;
  g = Tensor::uninitialized(shape);
  return false;
}

}  // namespace

void Tape::backprop(std::uint32_t index, Tensor& g, std::vector<Tensor>& grads) const {
  const Node& n = nodes_[index];
  // A gradient that is not reported may be handed over to the first
  // same-shaped consumer instead of being copied.
  const bool consumable = n.registry < 0;
  auto pass_through = [&](std::uint32_t target, bool last_use) {
    Tensor& d = grads[target];
    if (d.empty()) {
      d = (consumable && last_use) ? std::move(g) : g;
    } else {
      K().add(d.data(), g.data(), d.data(), d.size());
    }
  };
  const bool ga = n.lhs != kNone && nodes_[n.lhs].requires_grad;
  const bool gb = n.rhs != kNone && nodes_[n.rhs].requires_grad;
  if (!ga && !gb) return;
  const Tensor& y = n.value();
  const Tensor* a = n.lhs != kNone ? &nodes_[n.lhs].value() : nullptr;
  const Tensor* b = n.rhs != kNone ? &nodes_[n.rhs].value() : nullptr;

  switch (n.kind) {
    case OpKind::leaf:
    case OpKind::constant:
      return;
    case OpKind::matmul: {
      const std::size_t rows = a->rows(), inner = a->cols(), cols = b->cols();
      if (ga) {
        const bool acc = product_slot(grads, n.lhs, a->shape());
        K().gemm_nt(g.data(), b->data(), grads[n.lhs].data(), rows, cols, inner, acc);
      }
      if (gb) {
        const bool acc = product_slot(grads, n.rhs, b->shape());
        K().gemm_tn(a->data(), g.data(), grads[n.rhs].data(), rows, inner, cols, acc);
      }
      return;
    }
    case OpKind::add: {
      if (gb) pass_through(n.rhs, !ga);
      if (ga) pass_through(n.lhs, true);
      return;
    }
    case OpKind::sub: {
      if (ga) { Tensor& d = slot(grads, n.lhs, a->shape()); K().add(d.data(), g.data(), d.data(), d.size()); }
      if (gb) { Tensor& d = slot(grads, n.rhs, b->shape()); K().sub(d.data(), g.data(), d.data(), d.size()); }
      return;
    }
    case OpKind::mul: {
      if (a->shape() == b->shape()) {
        if (ga) K().mul_acc(g.data(), b->data(), slot(grads, n.lhs, a->shape()).data(), g.size());
        if (gb) K().mul_acc(g.data(), a->data(), slot(grads, n.rhs, b->shape()).data(), g.size());
        return;
      }
      const std::size_t rows = a->rows(), cols = a->cols();
      if (ga) {
        Tensor& d = slot(grads, n.lhs, a->shape());
        for (std::size_t r = 0; r < rows; ++r) K().axpy((*b)[r], g.data() + r * cols, d.data() + r * cols, cols);
      }
      if (gb) {
        Tensor& d = slot(grads, n.rhs, b->shape());
        for (std::size_t r = 0; r < rows; ++r) d[r] += K().dot(g.data() + r * cols, a->data() + r * cols, cols);
      }
      return;
    }
    case OpKind::add_bias: {
      if (gb) {
        Tensor& d = slot(grads, n.rhs, b->shape());
        const std::size_t cols = g.cols();
        for (std::size_t r = 0; r < g.rows(); ++r) K().add(d.data(), g.data() + r * cols, d.data(), cols);
      }
      if (ga) pass_through(n.lhs, true);
      return;
    }
    case OpKind::scale: {
      K().axpy(n.s0, g.data(), slot(grads, n.lhs, a->shape()).data(), g.size());
      return;
    }
    case OpKind::concat_cols: {
      const std::size_t rows = g.rows(), ca = a->cols(), cb = b->cols(), c = g.cols();
      if (ga) {
        Tensor& d = slot(grads, n.lhs, a->shape());
        for (std::size_t r = 0; r < rows; ++r) K().add(d.data() + r * ca, g.data() + r * c, d.data() + r * ca, ca);
      }
      if (gb) {
        Tensor& d = slot(grads, n.rhs, b->shape());
        for (std::size_t r = 0; r < rows; ++r) K().add(d.data() + r * cb, g.data() + r * c + ca, d.data() + r * cb, cb);
      }
      return;
    }
    case OpKind::slice_cols: {
      Tensor& d = slot(grads, n.lhs, a->shape());
      const std::size_t cols = a->cols(), w = n.extent;
      for (std::size_t r = 0; r < g.rows(); ++r) {
        double* dst = d.data() + r * cols + n.offset;
        K().add(dst, g.data() + r * w, dst, w);
      }
      return;
    }
    case OpKind::slice_rows: {
      Tensor& d = slot(grads, n.lhs, a->shape());
      double* dst = d.data() + n.offset * a->cols();
      K().add(dst, g.data(), dst, g.size());
      return;
    }
    case OpKind::gather_rows: {
      Tensor& d = slot(grads, n.lhs, a->shape());
      const std::size_t cols = a->cols();
      const auto& idx = *n.indices;
      for (std::size_t r = 0; r < idx.size(); ++r) {
        if (idx[r] < 0) continue;
        double* dst = d.data() + static_cast<std::size_t>(idx[r]) * cols;
        K().add(dst, g.data() + r * cols, dst, cols);
      }
      return;
    }
    case OpKind::select_cols: {
      Tensor& d = slot(grads, n.lhs, a->shape());
      const std::size_t cols = a->cols();
      const auto& idx = *n.indices;
      for (std::size_t r = 0; r < idx.size(); ++r) d[r * cols + static_cast<std::size_t>(idx[r])] += g[r];
      return;
    }
    case OpKind::transpose: {
      Tensor& d = slot(grads, n.lhs, a->shape());
      const std::size_t rows = a->rows(), cols = a->cols();
      for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) d[r * cols + c] += g[c * rows + r];
      return;
    }
    case OpKind::sigmoid: {
      Tensor& d = slot(grads, n.lhs, a->shape());
      for (std::size_t i = 0; i < g.size(); ++i) d[i] += g[i] * y[i] * (1.0 - y[i]);
      return;
    }
    case OpKind::tanh: {
      Tensor& d = slot(grads, n.lhs, a->shape());
      for (std::size_t i = 0; i < g.size(); ++i) d[i] += g[i] * (1.0 - y[i] * y[i]);
      return;
    }
    case OpKind::softmax_rows: {
      Tensor& d = slot(grads, n.lhs, a->shape());
      const std::size_t cols = y.cols();
      for (std::size_t r = 0; r < y.rows(); ++r) {
        const double* yr = y.data() + r * cols;
        const double* gr = g.data() + r * cols;
        const double s = K().dot(gr, yr, cols);
        for (std::size_t c = 0; c < cols; ++c) d[r * cols + c] += yr[c] * (gr[c] - s);
      }
      return;
    }
    case OpKind::log: {
      Tensor& d = slot(grads, n.lhs, a->shape());
      for (std::size_t i = 0; i < g.size(); ++i) d[i] += g[i] / (*a)[i];
      return;
    }
    case OpKind::clamp: {
      Tensor& d = slot(grads, n.lhs, a->shape());
      for (std::size_t i = 0; i < g.size(); ++i) {
        const double x = (*a)[i];
        if (x >= n.s0 && x <= n.s1) d[i] += g[i];
      }
      return;
    }
    case OpKind::sum_all:
    case OpKind::mean_all: {
      Tensor& d = slot(grads, n.lhs, a->shape());
      const double v = n.kind == OpKind::sum_all ? g[0] : g[0] / static_cast<double>(a->size());
      for (std::size_t i = 0; i < d.size(); ++i) d[i] += v;
      return;
    }
    case OpKind::mean_axis: {
      Tensor& d = slot(grads, n.lhs, a->shape());
      const std::size_t rows = a->rows(), cols = a->cols();
      if (n.offset == 0) {
        const double inv = 1.0 / static_cast<double>(rows);
        for (std::size_t r = 0; r < rows; ++r) K().axpy(inv, g.data(), d.data() + r * cols, cols);
      } else {
        const double inv = 1.0 / static_cast<double>(cols);
        for (std::size_t r = 0; r < rows; ++r)
          for (std::size_t c = 0; c < cols; ++c) d[r * cols + c] += g[r] * inv;
      }
      return;
    }
  }
}

void Tape::sweep(Var loss, std::vector<Tensor>& grads) const {
  if (loss.tape() != this) throw std::invalid_argument("backward: loss belongs to another tape");
  const Tensor& lv = loss.value();
  if (lv.size() != 1) {
    throw ShapeError("backward needs a scalar loss, got shape " + to_string(lv.shape()));
  }
  grads.assign(nodes_.size(), Tensor{});
  if (!nodes_[loss.index()].requires_grad) return;
  grads[loss.index()] = Tensor(lv.shape(), 1.0);
  for (std::int64_t i = loss.index(); i >= 0; --i) {
    const auto idx = static_cast<std::uint32_t>(i);
    if (grads[idx].empty()) continue;
    backprop(idx, grads[idx], grads);
    if (nodes_[idx].registry < 0) grads[idx] = Tensor{};
  }
}

GradientMap Tape::backward(Var loss) {
  std::vector<Tensor> grads;
  sweep(loss, grads);
  GradientMap out;
  for (const auto& r : registry_) {
    Tensor& g = grads[r.node];
    out.set(r.name, g.empty() ? Tensor::zeros_like(nodes_[r.node].value()) : std::move(g));
  }
  return out;
}

Tensor Tape::grad_wrt(Var loss, Var target) {
  if (!is_registered(target)) {
    throw std::invalid_argument("grad_wrt: target is not a registered leaf or watched value");
  }
  std::vector<Tensor> grads;
  sweep(loss, grads);
  Tensor& g = grads[target.index()];
  return g.empty() ? Tensor::zeros_like(target.value()) : std::move(g);
}

// ---------------------------------------------------------------------------
// Forward primitives

namespace {

Tape& same_tape(Var a, Var b, const char* op) {
  if (!a.valid() || a.tape() != b.tape()) {
    throw std::invalid_argument(std::string(op) + ": operands live on different tapes");
  }
  return *a.tape();
}

[[noreturn]] void shape_error(const char* op, const Shape& a, const Shape& b) {
  throw ShapeError(std::string(op) + ": incompatible shapes " + to_string(a) + " and " +
                   to_string(b));
}

[[noreturn]] void shape_error(const char* op, const Shape& a, const std::string& why) {
  throw ShapeError(std::string(op) + ": shape " + to_string(a) + " " + why);
}

void require_matrix(const char* op, const Tensor& t) {
  if (t.rank() != 2) shape_error(op, t.shape(), "is not a matrix");
}

Tape::Node make(OpKind kind, Var a, Tensor value) {
  Tape::Node n;
  n.kind = kind;
  n.lhs = a.index();
  n.requires_grad = a.tape()->node(a.index()).requires_grad;
  n.owned = std::move(value);
  return n;
}

Tape::Node make(OpKind kind, Var a, Var b, Tensor value) {
  Tape::Node n = make(kind, a, std::move(value));
  n.rhs = b.index();
  n.requires_grad = n.requires_grad || b.tape()->node(b.index()).requires_grad;
  return n;
}

template <class F>
Var unary(OpKind kind, Var a, F f) {
  const Tensor& x = a.value();
  Tensor y = Tensor::uninitialized(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = f(x[i]);
  return a.tape()->push(make(kind, a, std::move(y)));
}

}  // namespace

Var matmul(Var a, Var b) {
  Tape& t = same_tape(a, b, "matmul");
  const Tensor& x = a.value();
  const Tensor& w = b.value();
  require_matrix("matmul", x);
  require_matrix("matmul", w);
  if (x.cols() != w.rows()) shape_error("matmul", x.shape(), w.shape());
  Tensor y = Tensor::uninitialized({x.rows(), w.cols()});
  K().gemm_nn(x.data(), w.data(), y.data(), x.rows(), x.cols(), w.cols(), false);
  return t.push(make(OpKind::matmul, a, b, std::move(y)));
}

Var add(Var a, Var b) {
  Tape& t = same_tape(a, b, "add");
  const Tensor& x = a.value();
  const Tensor& z = b.value();
  if (x.shape() != z.shape()) shape_error("add", x.shape(), z.shape());
  Tensor y = Tensor::uninitialized(x.shape());
  K().add(x.data(), z.data(), y.data(), y.size());
  return t.push(make(OpKind::add, a, b, std::move(y)));
}

Var sub(Var a, Var b) {
  Tape& t = same_tape(a, b, "sub");
  const Tensor& x = a.value();
  const Tensor& z = b.value();
  if (x.shape() != z.shape()) shape_error("sub", x.shape(), z.shape());
  Tensor y = Tensor::uninitialized(x.shape());
  K().sub(x.data(), z.data(), y.data(), y.size());
  return t.push(make(OpKind::sub, a, b, std::move(y)));
}

Var mul(Var a, Var b) {
  Tape& t = same_tape(a, b, "mul");
  const Tensor& x = a.value();
  const Tensor& z = b.value();
  Tensor y = Tensor::uninitialized(x.shape());
  if (x.shape() == z.shape()) {
    K().mul(x.data(), z.data(), y.data(), y.size());
  } else if (x.rank() == 2 && z.rank() == 2 && z.cols() == 1 && z.rows() == x.rows()) {
    const std::size_t cols = x.cols();
    for (std::size_t r = 0; r < x.rows(); ++r) K().scale(z[r], x.data() + r * cols, y.data() + r * cols, cols);
  } else {
    shape_error("mul", x.shape(), z.shape());
  }
  return t.push(make(OpKind::mul, a, b, std::move(y)));
}

Var add_bias(Var a, Var bias) {
  Tape& t = same_tape(a, bias, "add_bias");
  const Tensor& x = a.value();
  const Tensor& b = bias.value();
  require_matrix("add_bias", x);
  if (b.rank() != 1 || b.size() != x.cols()) shape_error("add_bias", x.shape(), b.shape());
  Tensor y = Tensor::uninitialized(x.shape());
  const std::size_t cols = x.cols();
  for (std::size_t r = 0; r < x.rows(); ++r) K().add(x.data() + r * cols, b.data(), y.data() + r * cols, cols);
  return t.push(make(OpKind::add_bias, a, bias, std::move(y)));
}

Var scale(Var a, double s) {
  const Tensor& x = a.value();
  Tensor y = Tensor::uninitialized(x.shape());
  K().scale(s, x.data(), y.data(), y.size());
  Tape::Node n = make(OpKind::scale, a, std::move(y));
  n.s0 = s;
  return a.tape()->push(std::move(n));
}

Var concat_cols(Var a, Var b) {
  Tape& t = same_tape(a, b, "concat_cols");
  const Tensor& x = a.value();
  const Tensor& z = b.value();
  require_matrix("concat_cols", x);
  require_matrix("concat_cols", z);
  if (x.rows() != z.rows()) shape_error("concat_cols", x.shape(), z.shape());
  const std::size_t ca = x.cols(), cb = z.cols();
  Tensor y = Tensor::uninitialized({x.rows(), ca + cb});
  for (std::size_t r = 0; r < x.rows(); ++r) {
    std::copy_n(x.data() + r * ca, ca, y.data() + r * (ca + cb));
    std::copy_n(z.data() + r * cb, cb, y.data() + r * (ca + cb) + ca);
  }
  return t.push(make(OpKind::concat_cols, a, b, std::move(y)));
}

Var slice_cols(Var a, std::size_t offset, std::size_t count) {
  const Tensor& x = a.value();
  require_matrix("slice_cols", x);
  if (count == 0 || offset + count > x.cols()) {
    shape_error("slice_cols", x.shape(), "cannot supply columns [" + std::to_string(offset) + ", " +
                                             std::to_string(offset + count) + ")");
  }
  Tensor y = Tensor::uninitialized({x.rows(), count});
  for (std::size_t r = 0; r < x.rows(); ++r) std::copy_n(x.data() + r * x.cols() + offset, count, y.data() + r * count);
  Tape::Node n = make(OpKind::slice_cols, a, std::move(y));
  n.offset = offset;
  n.extent = count;
  return a.tape()->push(std::move(n));
}

Var slice_rows(Var a, std::size_t offset, std::size_t count) {
  const Tensor& x = a.value();
  require_matrix("slice_rows", x);
  if (count == 0 || offset + count > x.rows()) {
    shape_error("slice_rows", x.shape(), "cannot supply rows [" + std::to_string(offset) + ", " +
                                             std::to_string(offset + count) + ")");
  }
  const std::size_t cols = x.cols();
  Tensor y = Tensor::uninitialized({count, cols});
  std::copy_n(x.data() + offset * cols, count * cols, y.data());
  Tape::Node n = make(OpKind::slice_rows, a, std::move(y));
  n.offset = offset;
  n.extent = count;
  return a.tape()->push(std::move(n));
}

Var gather_rows(Var table, std::shared_ptr<const std::vector<std::int64_t>> indices) {
  const Tensor& x = table.value();
  require_matrix("gather_rows", x);
  if (!indices || indices->empty()) shape_error("gather_rows", x.shape(), "gathered with no indices");
  const std::size_t cols = x.cols();
  Tensor y({indices->size(), cols});
  for (std::size_t r = 0; r < indices->size(); ++r) {
    const std::int64_t i = (*indices)[r];
    if (i < 0) continue;
    if (static_cast<std::size_t>(i) >= x.rows()) {
      shape_error("gather_rows", x.shape(), "has no row " + std::to_string(i));
    }
    std::copy_n(x.data() + static_cast<std::size_t>(i) * cols, cols, y.data() + r * cols);
  }
  Tape::Node n = make(OpKind::gather_rows, table, std::move(y));
  n.indices = std::move(indices);
  return table.tape()->push(std::move(n));
}

Var select_cols(Var a, std::shared_ptr<const std::vector<std::int64_t>> indices) {
  const Tensor& x = a.value();
  require_matrix("select_cols", x);
  if (!indices || indices->size() != x.rows()) {
    shape_error("select_cols", x.shape(), "needs one column index per row");
  }
  Tensor y = Tensor::uninitialized({x.rows(), 1});
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const std::int64_t c = (*indices)[r];
    if (c < 0 || static_cast<std::size_t>(c) >= x.cols()) {
      shape_error("select_cols", x.shape(), "has no column " + std::to_string(c));
    }
    y[r] = x.at(r, static_cast<std::size_t>(c));
  }
  Tape::Node n = make(OpKind::select_cols, a, std::move(y));
  n.indices = std::move(indices);
  return a.tape()->push(std::move(n));
}

Var transpose(Var a) {
  const Tensor& x = a.value();
  require_matrix("transpose", x);
  const std::size_t rows = x.rows(), cols = x.cols();
  Tensor y = Tensor::uninitialized({cols, rows});
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) y[c * rows + r] = x[r * cols + c];
  return a.tape()->push(make(OpKind::transpose, a, std::move(y)));
}

Var sigmoid(Var a) {
  return unary(OpKind::sigmoid, a, [](double v) {
    if (v >= 0.0) return 1.0 / (1.0 + std::exp(-v));
    const double e = std::exp(v);
    return e / (1.0 + e);
  });
}

Var tanh(Var a) {
  return unary(OpKind::tanh, a, [](double v) { return std::tanh(v); });
}

Var softmax_rows(Var a) {
  const Tensor& x = a.value();
  if (x.rank() > 2) shape_error("softmax_rows", x.shape(), "has rank above 2");
  Tensor y = Tensor::uninitialized(x.shape());
  const std::size_t cols = x.cols();
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const double* xr = x.data() + r * cols;
    double* yr = y.data() + r * cols;
    const double mx = *std::max_element(xr, xr + cols);
    double sum = 0.0;
    for (std::size_t c = 0; c < cols; ++c) sum += (yr[c] = std::exp(xr[c] - mx));
    for (std::size_t c = 0; c < cols; ++c) yr[c] /= sum;
  }
  return a.tape()->push(make(OpKind::softmax_rows, a, std::move(y)));
}

Var log(Var a) {
  return unary(OpKind::log, a, [](double v) { return std::log(v); });
}

Var clamp(Var a, double lo, double hi) {
  if (!(lo <= hi)) throw std::invalid_argument("clamp: lo must not exceed hi");
  const Tensor& x = a.value();
  Tensor y = Tensor::uninitialized(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = std::clamp(x[i], lo, hi);
  Tape::Node n = make(OpKind::clamp, a, std::move(y));
  n.s0 = lo;
  n.s1 = hi;
  return a.tape()->push(std::move(n));
}

Var sum_all(Var a) {
  const Tensor& x = a.value();
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i];
  return a.tape()->push(make(OpKind::sum_all, a, Tensor::scalar(s)));
}

Var mean_all(Var a) {
  const Tensor& x = a.value();
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i];
  return a.tape()->push(make(OpKind::mean_all, a, Tensor::scalar(s / static_cast<double>(x.size()))));
}

Var mean_axis(Var a, std::size_t axis) {
  const Tensor& x = a.value();
  require_matrix("mean_axis", x);
  if (axis > 1) shape_error("mean_axis", x.shape(), "has no axis " + std::to_string(axis));
  const std::size_t rows = x.rows(), cols = x.cols();
  Tensor y = axis == 0 ? Tensor({cols}) : Tensor({rows, 1});
  if (axis == 0) {
    for (std::size_t r = 0; r < rows; ++r) K().add(y.data(), x.data() + r * cols, y.data(), cols);
    K().scale(1.0 / static_cast<double>(rows), y.data(), y.data(), cols);
  } else {
    for (std::size_t r = 0; r < rows; ++r) {
      double s = 0.0;
      for (std::size_t c = 0; c < cols; ++c) s += x[r * cols + c];
      y[r] = s / static_cast<double>(cols);
    }
  }
  Tape::Node n = make(OpKind::mean_axis, a, std::move(y));
  n.offset = axis;
  return a.tape()->push(std::move(n));
}

}  // namespace hat::ad
