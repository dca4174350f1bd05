#pragma once

#include <cmath>

#include "forecast/numeric/tensor.hpp"

namespace forecast {

// a[m x k] * b[k x n]; throws DimensionError naming both shapes.
Tensor matmul(const Tensor& a, const Tensor& b);

inline double sigmoid(double x) {
  // Split on sign so exp() never overflows.
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

Tensor sigmoid(const Tensor& x);
Tensor tanh_act(const Tensor& x);
Tensor relu(const Tensor& x);

// Max-subtracted softmax over a non-empty rank-1 tensor.
Tensor softmax(const Tensor& x);

}  // namespace forecast
