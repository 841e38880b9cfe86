#pragma once

// Reverse-mode automatic differentiation over dense tensors.
//
// A Tape records every primitive applied during one forward pass. Vars are
// lightweight handles into a tape. Named leaves (model parameters) and
// watched intermediates (embedding blocks that receive perturbations) form
// the leaf registry; backward() returns one gradient per registry entry.
//
// A tape is single-writer. Parameters bound with leaf() are referenced, not
// copied, and must outlive the tape.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "hat/autodiff/gradient_map.hpp"
#include "hat/autodiff/tensor.hpp"

namespace hat::ad {

class Tape;

enum class OpKind : std::uint8_t {
  leaf,
  constant,
  matmul,
  add,
  sub,
  mul,
  add_bias,
  scale,
  concat_cols,
  slice_cols,
  slice_rows,
  gather_rows,
  select_cols,
  transpose,
  sigmoid,
  tanh,
  softmax_rows,
  log,
  clamp,
  sum_all,
  mean_all,
  mean_axis,
};

const char* op_name(OpKind kind);

class Var {
 public:
  Var() = default;
  Var(Tape* tape, std::uint32_t index) : tape_(tape), index_(index) {}

  Tape* tape() const noexcept { return tape_; }
  std::uint32_t index() const noexcept { return index_; }
  bool valid() const noexcept { return tape_ != nullptr; }

  const Tensor& value() const;
  const Shape& shape() const { return value().shape(); }

 private:
  Tape* tape_ = nullptr;
  std::uint32_t index_ = 0;
};

class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  // Differentiable leaf backed by external storage.
  Var leaf(const std::string& name, const Tensor& value);
  // Differentiable leaf owning its value.
  Var leaf_copy(const std::string& name, Tensor value);
  // Non-differentiable input; gradients never flow into it.
  Var constant(Tensor value);
  // Registers an intermediate value as a named gradient target.
  void watch(Var v, const std::string& name);

  bool is_registered(Var v) const;

  // Gradient of a scalar loss with respect to every registered leaf/target.
  // Leaves not on the loss path receive exact zeros. Each call is a fresh
  // sweep; the tape can be swept repeatedly for different losses.
  GradientMap backward(Var loss);

  // Gradient of a scalar loss with respect to one registered target.
  Tensor grad_wrt(Var loss, Var target);

  std::size_t size() const noexcept { return nodes_.size(); }
  const Tensor& value(std::uint32_t index) const;

  // Used by the primitive free functions below.
  struct Node {
    OpKind kind = OpKind::constant;
    std::uint32_t lhs = kNone;
    std::uint32_t rhs = kNone;
    bool requires_grad = false;
    int registry = -1;
    Tensor owned;
    const Tensor* external = nullptr;
    std::size_t offset = 0;
    std::size_t extent = 0;
    double s0 = 0.0;
    double s1 = 0.0;
    std::shared_ptr<const std::vector<std::int64_t>> indices;

    const Tensor& value() const { return external ? *external : owned; }
  };
  static constexpr std::uint32_t kNone = 0xffffffffu;

  Var push(Node node);
  const Node& node(std::uint32_t index) const { return nodes_[index]; }

 private:
  struct Registered {
    std::string name;
    std::uint32_t node;
  };

  void sweep(Var loss, std::vector<Tensor>& grads) const;
  void backprop(std::uint32_t index, Tensor& g, std::vector<Tensor>& grads) const;
  Var register_leaf(const std::string& name, Node node);

  std::vector<Node> nodes_;
  std::vector<Registered> registry_;
};

// Primitives. All inputs must live on the same tape; shape mismatches throw
// ShapeError naming the offending shapes.

// [n x k] * [k x m]
Var matmul(Var a, Var b);
Var add(Var a, Var b);
Var sub(Var a, Var b);
// Elementwise product; b may also be an [n x 1] column broadcast over a's columns.
Var mul(Var a, Var b);
// a[n x m] + bias[m] broadcast over rows.
Var add_bias(Var a, Var bias);
Var scale(Var a, double s);
Var concat_cols(Var a, Var b);
Var slice_cols(Var a, std::size_t offset, std::size_t count);
Var slice_rows(Var a, std::size_t offset, std::size_t count);
// Rows of table[V x d] selected by index; index -1 yields a zero row. Result is [n x d].
Var gather_rows(Var table, std::shared_ptr<const std::vector<std::int64_t>> indices);
// Picks a[i, indices[i]] for each row i. Result is [n x 1].
Var select_cols(Var a, std::shared_ptr<const std::vector<std::int64_t>> indices);
Var transpose(Var a);
Var sigmoid(Var a);
Var tanh(Var a);
Var softmax_rows(Var a);
Var log(Var a);
// Values outside [lo, hi] are clamped and receive zero gradient.
Var clamp(Var a, double lo, double hi);
Var sum_all(Var a);
Var mean_all(Var a);
// axis 0: mean over rows -> [m]; axis 1: mean over columns -> [n x 1].
Var mean_axis(Var a, std::size_t axis);

}  // namespace hat::ad
