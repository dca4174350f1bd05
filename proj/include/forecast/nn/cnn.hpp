#pragma once

// 1-D convolutional feature extractor over a [time x channels] window:
// convolution, ReLU, max pooling, flatten and dense layers, each with an
// analytic backward pass.

#include <cstddef>
#include <utility>
#include <vector>

#include "forecast/numeric/tensor.hpp"

namespace forecast {

enum class Padding { Same, Valid };

struct ConvLayer {
  Tensor weights;  // out_ch x in_ch x kernel_len
  Tensor bias;     // out_ch
  Padding padding = Padding::Same;

  std::size_t out_channels() const { return weights.dim(0); }
  std::size_t in_channels() const { return weights.dim(1); }
  std::size_t kernel_len() const { return weights.dim(2); }
  std::size_t output_length(std::size_t input_length) const;
  // Zeros of length (kernel_len - 1) split left-heavy-right for Same padding.
  std::size_t pad_left() const;

  static ConvLayer zeros(std::size_t in_ch, std::size_t out_ch, std::size_t kernel_len,
                         Padding padding = Padding::Same);
};

struct ConvCache {
  Tensor columns;  // T' x (kernel_len * in_ch), ordered (tap, channel)
  Tensor packed;   // out_ch x (kernel_len * in_ch), same ordering
  std::size_t input_length = 0;
  std::size_t in_channels = 0;
  std::size_t kernel_len = 0;
  std::size_t pad_left = 0;
};

struct ConvGrads {
  Tensor grad_x;
  Tensor grad_weights;
  Tensor grad_bias;
};

// z[t, o] = b[o] + sum_{c,k} W[o, c, k] * x_pad[t + k, c]
std::pair<Tensor, ConvCache> conv1d_forward(const ConvLayer& layer, const Tensor& x);
ConvGrads conv1d_backward(const ConvCache& cache, const Tensor& grad_z);

struct PoolSpec {
  std::size_t filter = 2;
  std::size_t stride = 2;
  std::size_t output_length(std::size_t input_length) const;
};

struct PoolCache {
  std::vector<std::size_t> argmax;  // winning input time index per output cell
  std::size_t input_length = 0;
  std::size_t channels = 0;
};

// Ties resolve to the earliest index.
std::pair<Tensor, PoolCache> maxpool_forward(const PoolSpec& spec, const Tensor& x);
Tensor maxpool_backward(const PoolCache& cache, const Tensor& grad_y);

Tensor relu_forward(const Tensor& z);
// Gradient is zero where z <= 0, including z == 0 exactly.
Tensor relu_backward(const Tensor& z, const Tensor& grad_a);

Tensor flatten(const Tensor& x);
Tensor unflatten(const Tensor& flat, const Shape& shape);

struct DenseLayer {
  Tensor weights;  // out x in
  Tensor bias;     // out

  std::size_t out_features() const { return weights.dim(0); }
  std::size_t in_features() const { return weights.dim(1); }
  static DenseLayer zeros(std::size_t in, std::size_t out);
};

struct DenseCache {
  Tensor input;
};

struct DenseGrads {
  Tensor grad_x;
  Tensor grad_weights;
  Tensor grad_bias;
};

std::pair<Tensor, DenseCache> dense_forward(const DenseLayer& layer, const Tensor& x);
DenseGrads dense_backward(const DenseLayer& layer, const DenseCache& cache,
                          const Tensor& grad_z);

}  // namespace forecast
