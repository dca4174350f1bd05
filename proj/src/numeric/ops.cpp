#include "forecast/numeric/ops.hpp"

#include <algorithm>

#include "forecast/error.hpp"
#include "forecast/numeric/simd.hpp"

namespace forecast {

Tensor matmul(const Tensor& a, const Tensor& b) {
  if (a.rank() != 2 || b.rank() != 2 || a.dim(1) != b.dim(0)) {
    throw DimensionError("matmul: incompatible shapes " +
                         shape_to_string(a.shape()) + " and " +
                         shape_to_string(b.shape()));
  }
  const std::size_t m = a.dim(0), k = a.dim(1), n = b.dim(1);
  Tensor out({m, n});
  // Row-oriented i-k-j order keeps the inner loop an axpy over contiguous rows.
  for (std::size_t i = 0; i < m; ++i) {
    auto out_row = out.row(i);
    for (std::size_t p = 0; p < k; ++p) {
      const double s = a.at(i, p);
      if (s != 0.0) simd::axpy(s, b.row(p), out_row);
    }
  }
  return out;
}

Tensor sigmoid(const Tensor& x) {
  Tensor y = x;
  for (auto& v : y.values()) v = sigmoid(v);
  return y;
}

Tensor tanh_act(const Tensor& x) {
  Tensor y = x;
  for (auto& v : y.values()) v = std::tanh(v);
  return y;
}

Tensor relu(const Tensor& x) {
  Tensor y = x;
  for (auto& v : y.values()) v = v > 0.0 ? v : 0.0;
  return y;
}

Tensor softmax(const Tensor& x) {
  if (x.empty()) throw DimensionError("softmax: empty input");
  const auto vals = x.values();
  const double mx = *std::max_element(vals.begin(), vals.end());
  Tensor y = x;
  double total = 0.0;
  for (auto& v : y.values()) {
    v = std::exp(v - mx);
    total += v;
  }
  for (auto& v : y.values()) v /= total;
  return y;
}

}  // namespace forecast
