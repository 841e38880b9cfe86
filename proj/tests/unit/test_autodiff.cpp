#include <cmath>
#include <memory>
#include <random>

#include "doctest.h"
#include "hat/autodiff/gradient_map.hpp"
#include "hat/autodiff/tape.hpp"
#include "hat/errors.hpp"
#include "hat/simd/kernels.hpp"
#include "test_support.hpp"

using namespace hat;
using namespace hat::ad;
using hat::testing::max_fd_error;
using hat::testing::random_tensor;

namespace {

using Builder = std::function<Var(Tape&, Var)>;

// Checks d sum(w * f(x)) / dx against central differences, with a fixed
// random weighting w so that every output entry matters.
double fd_check_unary(const Shape& shape, const Builder& f, std::uint64_t seed, double lo = -1.0, double hi = 1.0) {
  std::mt19937_64 rng(seed);
  Tensor x = random_tensor(shape, rng, lo, hi);
  Tensor w;
  auto loss = [&](Tape& t) {
    Var xv = t.leaf("x", x);
    Var y = f(t, xv);
    if (w.empty()) w = random_tensor(y.shape(), rng);
    return sum_all(mul(y, t.constant(w)));
  };
  Tape tape;
  const Tensor g = tape.backward(loss(tape)).at("x");
  return max_fd_error(x, g, [&] {
    Tape t;
    return loss(t).value().item();
  });
}

double fd_check_binary(const Shape& sa, const Shape& sb, const std::function<Var(Var, Var)>& f,
                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Tensor a = random_tensor(sa, rng), b = random_tensor(sb, rng);
  Tensor w;
  auto loss = [&](Tape& t) {
    Var y = f(t.leaf("a", a), t.leaf("b", b));
    if (w.empty()) w = random_tensor(y.shape(), rng);
    return sum_all(mul(y, t.constant(w)));
  };
  Tape tape;
  const GradientMap g = tape.backward(loss(tape));
  auto eval = [&] {
    Tape t;
    return loss(t).value().item();
  };
  return std::max(max_fd_error(a, g.at("a"), eval), max_fd_error(b, g.at("b"), eval));
}

}  // namespace

TEST_CASE("primitive values") {
  Tape t;
  const Var z = t.constant(Tensor::matrix(1, 2, {0, 0}));
  const Tensor s = softmax_rows(z).value();
  CHECK(s[0] == 0.5);
  CHECK(s[1] == 0.5);

  const Var zeros = t.constant(Tensor({2, 3}));
  CHECK(tanh(zeros).value() == Tensor({2, 3}));

  std::mt19937_64 rng(3);
  const Tensor a = random_tensor({3, 3}, rng);
  const Var eye = t.constant(Tensor::matrix(3, 3, {1, 0, 0, 0, 1, 0, 0, 0, 1}));
  CHECK(matmul(eye, t.constant(a)).value() == a);

  const Var m = t.constant(Tensor::matrix(2, 3, {1, 2, 3, 4, 5, 6}));
  CHECK(mean_axis(m, 0).value() == Tensor({3}, {2.5, 3.5, 4.5}));
  CHECK(mean_axis(m, 1).value() == Tensor({2, 1}, {2, 5}));
  CHECK(slice_cols(m, 1, 2).value() == Tensor::matrix(2, 2, {2, 3, 5, 6}));
  CHECK(slice_rows(m, 1, 1).value() == Tensor::matrix(1, 3, {4, 5, 6}));
  CHECK(transpose(m).value() == Tensor::matrix(3, 2, {1, 4, 2, 5, 3, 6}));
  CHECK(concat_cols(m, m).value() == Tensor::matrix(2, 6, {1, 2, 3, 1, 2, 3, 4, 5, 6, 4, 5, 6}));
  auto idx = std::make_shared<std::vector<std::int64_t>>(std::vector<std::int64_t>{1, -1, 0});
  CHECK(gather_rows(m, idx).value() == Tensor::matrix(3, 3, {4, 5, 6, 0, 0, 0, 1, 2, 3}));
  auto cols = std::make_shared<std::vector<std::int64_t>>(std::vector<std::int64_t>{2, 0});
  CHECK(select_cols(m, cols).value() == Tensor({2, 1}, {3, 4}));
  CHECK(clamp(m, 2, 4).value() == Tensor::matrix(2, 3, {2, 2, 3, 4, 4, 4}));
  CHECK(mul(m, t.constant(Tensor({2, 1}, {2, -1}))).value() == Tensor::matrix(2, 3, {2, 4, 6, -4, -5, -6}));
  CHECK(add_bias(m, t.constant(Tensor({3}, {1, 1, 1}))).value() == Tensor::matrix(2, 3, {2, 3, 4, 5, 6, 7}));
  CHECK(sum_all(m).value().item() == 21.0);
  CHECK(mean_all(m).value().item() == 3.5);
  CHECK(sigmoid(t.constant(Tensor::scalar(0))).value().item() == 0.5);
}

TEST_CASE("shape mismatches are rejected with both shapes named") {
  Tape t;
  const Var a = t.constant(Tensor({2, 3}));
  const Var b = t.constant(Tensor({4, 2}));
  try {
    matmul(a, b);
    FAIL("matmul accepted incompatible shapes");
  } catch (const ShapeError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("[2 x 3]") != std::string::npos);
    CHECK(msg.find("[4 x 2]") != std::string::npos);
  }
  CHECK_THROWS_AS(add(a, b), ShapeError);
  CHECK_THROWS_AS(mul(a, b), ShapeError);
  CHECK_THROWS_AS(concat_cols(a, b), ShapeError);
  CHECK_THROWS_AS(slice_cols(a, 2, 2), ShapeError);
  CHECK_THROWS_AS(add_bias(a, t.constant(Tensor({2}))), ShapeError);
  CHECK_THROWS_AS(Tensor({2, 0}), ShapeError);
  CHECK_THROWS_AS(Tensor({2}, std::vector<double>{1, 2, 3}), ShapeError);
}

TEST_CASE("backward on simple functions") {
  SUBCASE("d(x*x)/dx at 3 is 6") {
    Tensor x = Tensor::scalar(3.0);
    Tape t;
    const Var xv = t.leaf("x", x);
    CHECK(t.backward(mul(xv, xv)).at("x").item() == 6.0);
  }
  SUBCASE("sum(Wx) with W fixed has gradient equal to W's column sums") {
    const Tensor w = Tensor::matrix(2, 3, {1, 2, 3, 4, 5, 6});
    Tensor x({3, 1}, {0.5, -1, 2});
    Tape t;
    const Var loss = sum_all(matmul(t.constant(w), t.leaf("x", x)));
    CHECK(t.backward(loss).at("x") == Tensor({3, 1}, {5, 7, 9}));
  }
  SUBCASE("non-scalar loss is rejected") {
    Tensor x({2, 2}, 1.0);
    Tape t;
    CHECK_THROWS_AS(t.backward(t.leaf("x", x)), ShapeError);
  }
}

TEST_CASE("zero-path leaves get exact zeros and gradients keep leaf shapes") {
  Tensor a({2, 3}, 1.0), b({4}, 2.0);
  Tape t;
  const Var av = t.leaf("a", a);
  t.leaf("b", b);
  const GradientMap g = t.backward(sum_all(tanh(av)));
  REQUIRE(g.contains("b"));
  CHECK(g.at("b").shape() == b.shape());
  CHECK(bitwise_equal(g.at("b"), Tensor({4})));
  CHECK(g.at("a").shape() == a.shape());
}

TEST_CASE("backward is deterministic across sweeps") {
  std::mt19937_64 rng(1);
  Tensor w1 = random_tensor({4, 5}, rng), w2 = random_tensor({5, 2}, rng), x = random_tensor({3, 4}, rng);
  Tape t;
  const Var h = tanh(matmul(t.leaf("x", x), t.leaf("w1", w1)));
  const Var loss = mean_all(softmax_rows(matmul(h, t.leaf("w2", w2))));
  const GradientMap g1 = t.backward(loss);
  const GradientMap g2 = t.backward(loss);
  CHECK(bitwise_equal(g1, g2));
}

TEST_CASE("grad_wrt watched intermediates") {
  std::mt19937_64 rng(2);
  Tensor x = random_tensor({2, 3}, rng);
  const Tensor c = random_tensor({2, 3}, rng);
  Tape t;
  const Var xv = t.leaf("x", x);
  const Var target = tanh(xv);
  t.watch(target, "target");
  SUBCASE("linear functional gives its coefficients") {
    const Var loss = sum_all(mul(target, t.constant(c)));
    CHECK(t.grad_wrt(loss, target) == c);
  }
  SUBCASE("independent loss gives zeros") {
    Tensor other({1}, 4.0);
    const Var loss = sum_all(t.leaf("other", other));
    CHECK(bitwise_equal(t.grad_wrt(loss, target), Tensor({2, 3})));
  }
  SUBCASE("unregistered targets are rejected") {
    const Var loss = sum_all(target);
    CHECK_THROWS_AS(t.grad_wrt(loss, sigmoid(xv)), std::invalid_argument);
  }
  SUBCASE("constants receive no gradient") {
    const Var k = t.constant(c);
    const Var loss = sum_all(mul(target, k));
    const GradientMap g = t.backward(loss);
    CHECK(g.size() == 2);
    CHECK_FALSE(t.is_registered(k));
  }
}

TEST_CASE("every primitive matches finite differences") {
  const double tol = hat::testing::kFdTolerance;
  CHECK(fd_check_binary({3, 4}, {4, 2}, [](Var a, Var b) { return matmul(a, b); }, 1) < tol);
  CHECK(fd_check_binary({3, 4}, {3, 4}, [](Var a, Var b) { return add(a, b); }, 2) < tol);
  CHECK(fd_check_binary({3, 4}, {3, 4}, [](Var a, Var b) { return sub(a, b); }, 3) < tol);
  CHECK(fd_check_binary({3, 4}, {3, 4}, [](Var a, Var b) { return mul(a, b); }, 4) < tol);
  CHECK(fd_check_binary({3, 4}, {3, 1}, [](Var a, Var b) { return mul(a, b); }, 5) < tol);
  CHECK(fd_check_binary({3, 4}, {4}, [](Var a, Var b) { return add_bias(a, b); }, 6) < tol);
  CHECK(fd_check_binary({3, 4}, {3, 2}, [](Var a, Var b) { return concat_cols(a, b); }, 7) < tol);
  CHECK(fd_check_unary({3, 4}, [](Tape&, Var x) { return scale(x, -1.7); }, 8) < tol);
  CHECK(fd_check_unary({3, 5}, [](Tape&, Var x) { return slice_cols(x, 1, 3); }, 9) < tol);
  CHECK(fd_check_unary({5, 3}, [](Tape&, Var x) { return slice_rows(x, 2, 2); }, 10) < tol);
  CHECK(fd_check_unary({4, 3}, [](Tape&, Var x) {
          auto idx = std::make_shared<std::vector<std::int64_t>>(std::vector<std::int64_t>{2, -1, 0, 2, 3});
          return gather_rows(x, idx);
        }, 11) < tol);
  CHECK(fd_check_unary({3, 4}, [](Tape&, Var x) {
          auto idx = std::make_shared<std::vector<std::int64_t>>(std::vector<std::int64_t>{3, 0, 1});
          return select_cols(x, idx);
        }, 12) < tol);
  CHECK(fd_check_unary({3, 4}, [](Tape&, Var x) { return transpose(x); }, 13) < tol);
  CHECK(fd_check_unary({3, 4}, [](Tape&, Var x) { return sigmoid(x); }, 14, -4, 4) < tol);
  CHECK(fd_check_unary({3, 4}, [](Tape&, Var x) { return tanh(x); }, 15, -3, 3) < tol);
  CHECK(fd_check_unary({3, 4}, [](Tape&, Var x) { return softmax_rows(x); }, 16, -3, 3) < tol);
  CHECK(fd_check_unary({3, 4}, [](Tape&, Var x) { return log(x); }, 17, 0.2, 3.0) < tol);
  CHECK(fd_check_unary({3, 4}, [](Tape&, Var x) { return clamp(x, -0.5, 0.5); }, 18) < tol);
  CHECK(fd_check_unary({3, 4}, [](Tape&, Var x) { return sum_all(x); }, 19) < tol);
  CHECK(fd_check_unary({3, 4}, [](Tape&, Var x) { return mean_all(x); }, 20) < tol);
  CHECK(fd_check_unary({3, 4}, [](Tape&, Var x) { return mean_axis(x, 0); }, 21) < tol);
  CHECK(fd_check_unary({3, 4}, [](Tape&, Var x) { return mean_axis(x, 1); }, 22) < tol);
}

TEST_CASE("two-layer tanh network matches finite differences") {
  std::mt19937_64 rng(42);
  Tensor x = random_tensor({5, 4}, rng), w1 = random_tensor({4, 6}, rng), b1 = random_tensor({6}, rng);
  Tensor w2 = random_tensor({6, 3}, rng), b2 = random_tensor({3}, rng);
  auto loss = [&](Tape& t) {
    const Var h = tanh(add_bias(matmul(t.leaf("x", x), t.leaf("w1", w1)), t.leaf("b1", b1)));
    const Var y = tanh(add_bias(matmul(h, t.leaf("w2", w2)), t.leaf("b2", b2)));
    return mean_all(mul(y, y));
  };
  Tape tape;
  const GradientMap g = tape.backward(loss(tape));
  auto eval = [&] {
    Tape t;
    return loss(t).value().item();
  };
  for (auto* p : {&x, &w1, &b1, &w2, &b2}) {
    const std::string name = p == &x ? "x" : p == &w1 ? "w1" : p == &b1 ? "b1" : p == &w2 ? "w2" : "b2";
    CAPTURE(name);
    CHECK(max_fd_error(*p, g.at(name), eval) < hat::testing::kFdTolerance);
  }
}

TEST_CASE("gradients agree across kernel backends") {
  if (!simd::avx2_available()) return;
  std::mt19937_64 rng(8);
  Tensor x = random_tensor({17, 9}, rng), w = random_tensor({9, 33}, rng);
  auto run = [&] {
    Tape t;
    const Var y = softmax_rows(tanh(matmul(t.leaf("x", x), t.leaf("w", w))));
    return t.backward(mean_all(log(y)));
  };
  const simd::Backend before = simd::active_backend();
  simd::set_backend(simd::Backend::scalar);
  const GradientMap gs = run();
  simd::set_backend(simd::Backend::avx2);
  const GradientMap gv = run();
  simd::set_backend(before);
  for (const auto& [name, t] : gs) {
    for (std::size_t i = 0; i < t.size(); ++i) CHECK(std::abs(t[i] - gv.at(name)[i]) < 1e-12);
  }
}

TEST_CASE("normalize_scale") {
  const Tensor a = normalize_scale(Tensor({2}, {3, 4}), 1.0);
  CHECK(a[0] == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(a[1] == doctest::Approx(0.8).epsilon(1e-15));
  const Tensor b = normalize_scale(Tensor({2}, {0, 2}), 0.3);
  CHECK(b[0] == 0.0);
  CHECK(b[1] == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(bitwise_equal(normalize_scale(Tensor({3}), 1.0), Tensor({3})));
  CHECK(bitwise_equal(normalize_scale(Tensor({2}, {1e-13, 0}), 1.0), Tensor({2})));
  CHECK_THROWS_AS(normalize_scale(Tensor({2}, {1, 1}), -0.1), ConfigError);

  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const Tensor g = random_tensor({3, 7}, rng);
    const double eps = std::uniform_real_distribution<double>(0.01, 5.0)(rng);
    const Tensor r = normalize_scale(g, eps);
    CHECK(std::abs(r.l2_norm() - eps) < 1e-9);
    CHECK(std::abs(hat::testing::cosine(r, g) - 1.0) < 1e-9);
  }
}

TEST_CASE("gradient maps") {
  GradientMap a, b;
  a.set("w", Tensor({2}, {1, 2}));
  b.set("w", Tensor({2}, {3, 4}));
  a.add_scaled(b, 2.0);
  CHECK(a.at("w") == Tensor({2}, {7, 10}));
  CHECK(a.global_norm() == doctest::Approx(std::sqrt(149.0)));
  GradientMap c;
  c.set("v", Tensor({2}));
  CHECK_THROWS_AS(a.add_scaled(c), ShapeError);
  GradientMap d;
  d.set("w", Tensor({3}));
  CHECK_THROWS_AS(a.add_scaled(d), ShapeError);
}
