#include <doctest.h>

#include <cmath>
#include <numbers>

#include "forecast/error.hpp"
#include "forecast/numeric/ops.hpp"
#include "forecast/numeric/rng.hpp"
#include "forecast/numeric/simd.hpp"
#include "forecast/numeric/tensor.hpp"

using namespace forecast;

TEST_CASE("tensor construction checks element count") {
  CHECK_THROWS_AS(Tensor({2, 3}, std::vector<double>(5)), DimensionError);
  const Tensor t({2, 3}, 1.5);
  CHECK(t.size() == shape_product(t.shape()));
  CHECK(t.at(1, 2) == 1.5);
  CHECK(shape_to_string({7, 128}) == "[7x128]");
  CHECK_THROWS_AS(t.dim(2), DimensionError);
}

TEST_CASE("matmul") {
  const Tensor b = Tensor::matrix(2, 2, {5, 6, 7, 8});
  CHECK(matmul(Tensor::identity(2), b) == b);
  const Tensor r = matmul(Tensor::matrix(2, 2, {1, 2, 3, 4}), Tensor::matrix(2, 1, {1, 1}));
  CHECK(r == Tensor::matrix(2, 1, {3, 7}));
  try {
    matmul(Tensor({2, 3}), Tensor({2, 3}));
    FAIL("expected a dimension error");
  } catch (const DimensionError& e) {
    CHECK(std::string(e.what()).find("[2x3]") != std::string::npos);
  }
}

TEST_CASE("matmul is associative on random chains") {
  RngStream rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t m = 1 + rng.below(6), k = 1 + rng.below(6), n = 1 + rng.below(6),
                      p = 1 + rng.below(6);
    const Tensor a = rng_uniform(rng, -2, 2, {m, k});
    const Tensor b = rng_uniform(rng, -2, 2, {k, n});
    const Tensor c = rng_uniform(rng, -2, 2, {n, p});
    const Tensor l = matmul(matmul(a, b), c), r = matmul(a, matmul(b, c));
    for (std::size_t i = 0; i < l.size(); ++i) {
      CHECK(std::abs(l[i] - r[i]) <= 1e-9 * std::max(1.0, std::abs(l[i])));
    }
  }
}

TEST_CASE("activations") {
  CHECK(sigmoid(0.0) == 0.5);
  CHECK(sigmoid(1.0) == doctest::Approx(1.0 / (1.0 + std::exp(-1.0))).epsilon(1e-15));
  CHECK(sigmoid(1.0) == doctest::Approx(0.7310585786).epsilon(1e-10));
  CHECK(std::tanh(1.0) == doctest::Approx(0.7615941559).epsilon(1e-10));
  CHECK(tanh_act(Tensor::vector({0.0}))[0] == 0.0);
  CHECK(relu(Tensor::vector({-2, 0, 3})) == Tensor::vector({0, 0, 3}));
  CHECK(relu(Tensor::vector({-1, -5, -0.1})) == Tensor::vector({0, 0, 0}));

  const Tensor u = softmax(Tensor::vector({4, 4, 4}));
  for (double v : u.values()) CHECK(v == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  const Tensor s = softmax(Tensor::vector({0.0, std::log(3.0)}));
  CHECK(s[0] == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(s[1] == doctest::Approx(0.75).epsilon(1e-14));
  CHECK_THROWS_AS(softmax(Tensor::vector({})), DimensionError);
}

TEST_CASE("activation ranges and identities on sampled inputs") {
  // Beyond |x| ~ 19 tanh rounds to exactly +-1 in double precision, so the
  // open-interval checks sample a range where the bounds are representable.
  RngStream rng(3);
  const Tensor x = rng_uniform(rng, -15, 15, {500});
  const Tensor sx = sigmoid(x), tx = tanh_act(x), rx = relu(x);
  Tensor neg = x;
  neg *= -1.0;
  const Tensor sn = sigmoid(neg), tn = tanh_act(neg);
  for (std::size_t i = 0; i < x.size(); ++i) {
    CHECK(sx[i] > 0.0);
    CHECK(sx[i] < 1.0);
    CHECK(std::abs(tx[i]) < 1.0);
    CHECK(rx[i] >= 0.0);
    CHECK(sx[i] + sn[i] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(tn[i] == -tx[i]);
    if (x[i] >= 0) CHECK(rx[i] == x[i]);
  }
  Tensor shifted = x;
  for (auto& v : shifted.values()) v += 123.0;
  const Tensor a = softmax(x), b = softmax(shifted);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sum += a[i];
    CHECK(std::abs(a[i] - b[i]) <= 1e-12);
  }
  CHECK(std::abs(sum - 1.0) <= 1e-12);
}

TEST_CASE("rng streams") {
  RngStream a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  CHECK(RngStream(1).child("a").next_u64() != RngStream(1).child("b").next_u64());
  CHECK(RngStream(1).child("a", 0).next_u64() != RngStream(1).child("a", 1).next_u64());

  RngStream s1(9), s2(9);
  CHECK(rng_uniform(s1, 0, 1, {50}) == rng_uniform(s2, 0, 1, {50}));

  RngStream u(5);
  const Tensor t = rng_uniform(u, 0.0, 1.0, {10000});
  double mean = 0.0;
  for (double v : t.values()) {
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
    mean += v;
  }
  mean /= 10000.0;
  CHECK(mean >= 0.47);
  CHECK(mean <= 0.53);
  CHECK_THROWS_AS(u.uniform(1.0, 1.0), RangeError);
  CHECK_THROWS_AS(rng_uniform(u, 2.0, 1.0, {3}), RangeError);
}

TEST_CASE("normal draws have the requested moments") {
  RngStream r(17);
  double s = 0.0, ss = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double v = r.normal(2.0, 3.0);
    s += v;
    ss += v * v;
  }
  const double mean = s / n, var = ss / n - mean * mean;
  CHECK(mean == doctest::Approx(2.0).epsilon(0.05));
  CHECK(std::sqrt(var) == doctest::Approx(3.0).epsilon(0.03));
}

TEST_CASE("SIMD kernels agree with the scalar reference") {
  const simd::KernelTable* avx = simd::avx2_kernels();
  if (!avx) {
    MESSAGE("AVX2 kernels unavailable on this build or CPU; nothing to compare");
    return;
  }
  const auto& ref = simd::scalar_kernels();
  RngStream rng(77);
  for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 8u, 15u, 16u, 17u, 33u, 100u, 257u}) {
    const Tensor x = rng_uniform(rng, -1, 1, {std::max<std::size_t>(n, 1)});
    const Tensor y = rng_uniform(rng, -1, 1, {std::max<std::size_t>(n, 1)});
    const double d_ref = ref.dot(x.data(), y.data(), n), d_avx = avx->dot(x.data(), y.data(), n);
    CHECK(std::abs(d_ref - d_avx) <= 1e-13 * std::max(1.0, double(n)));

    Tensor y1 = y, y2 = y;
    ref.axpy(0.37, x.data(), y1.data(), n);
    avx->axpy(0.37, x.data(), y2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(y1[i] - y2[i]) <= 1e-15);
  }
  for (auto [rows, cols] : {std::pair<std::size_t, std::size_t>{1, 1}, {3, 5}, {7, 16}, {16, 33}, {64, 96}}) {
    const Tensor w = rng_uniform(rng, -1, 1, {rows, cols});
    const Tensor x = rng_uniform(rng, -1, 1, {cols});
    Tensor g = rng_uniform(rng, -1, 1, {rows});
    g[0] = 0.0;  // exercises the zero-row skip
    Tensor y1({rows}, 0.5), y2({rows}, 0.5);
    ref.gemv(w.data(), rows, cols, x.data(), y1.data());
    avx->gemv(w.data(), rows, cols, x.data(), y2.data());
    for (std::size_t i = 0; i < rows; ++i) CHECK(std::abs(y1[i] - y2[i]) <= 1e-12);

    Tensor x1({cols}, 0.1), x2({cols}, 0.1);
    ref.gemv_t(w.data(), rows, cols, g.data(), x1.data());
    avx->gemv_t(w.data(), rows, cols, g.data(), x2.data());
    for (std::size_t i = 0; i < cols; ++i) CHECK(std::abs(x1[i] - x2[i]) <= 1e-12);

    Tensor w1 = w, w2 = w;
    ref.ger(w1.data(), rows, cols, g.data(), x.data());
    avx->ger(w2.data(), rows, cols, g.data(), x.data());
    for (std::size_t i = 0; i < w.size(); ++i) CHECK(std::abs(w1[i] - w2[i]) <= 1e-15);
  }
}

TEST_CASE("active kernel table can be switched") {
  const auto before = simd::active().isa;
  CHECK(simd::set_active(simd::Isa::Scalar));
  CHECK(simd::active().isa == simd::Isa::Scalar);
  const bool has_avx = simd::avx2_kernels() != nullptr;
  CHECK(simd::set_active(simd::Isa::Avx2) == has_avx);
  simd::set_active(before);
}
