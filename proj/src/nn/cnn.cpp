#include "forecast/nn/cnn.hpp"

#include <algorithm>

#include "forecast/error.hpp"
#include "forecast/numeric/ops.hpp"
#include "forecast/numeric/simd.hpp"

namespace forecast {

std::size_t ConvLayer::pad_left() const {
  return padding == Padding::Same ? (kernel_len() - 1) / 2 : 0;
}

std::size_t ConvLayer::output_length(std::size_t input_length) const {
  if (padding == Padding::Same) return input_length;
  if (input_length < kernel_len()) {
    throw DimensionError("conv1d: input length " + std::to_string(input_length) +
                         " shorter than kernel " + std::to_string(kernel_len()));
  }
  return input_length - kernel_len() + 1;
}

ConvLayer ConvLayer::zeros(std::size_t in_ch, std::size_t out_ch, std::size_t kernel_len,
                           Padding padding) {
  if (in_ch == 0 || out_ch == 0 || kernel_len == 0) {
    throw ConfigError("conv layer dimensions must be positive");
  }
  return {Tensor({out_ch, in_ch, kernel_len}), Tensor({out_ch}), padding};
}

std::pair<Tensor, ConvCache> conv1d_forward(const ConvLayer& layer, const Tensor& x) {
  if (x.rank() != 2 || x.dim(1) != layer.in_channels()) {
    throw DimensionError("conv1d: expected [T x " + std::to_string(layer.in_channels()) +
                         "] input, got " + shape_to_string(x.shape()));
  }
  const std::size_t T = x.dim(0), in = layer.in_channels(), out = layer.out_channels();
  const std::size_t K = layer.kernel_len();
  const std::size_t Tout = layer.output_length(T);
  const std::size_t width = K * in;

  ConvCache cache;
  cache.input_length = T;
  cache.in_channels = in;
  cache.kernel_len = K;
  cache.pad_left = layer.pad_left();
  cache.packed = Tensor({out, width});
  for (std::size_t o = 0; o < out; ++o) {
    for (std::size_t c = 0; c < in; ++c) {
      for (std::size_t k = 0; k < K; ++k) {
        cache.packed.at(o, k * in + c) = layer.weights.at(o, c, k);
      }
    }
  }
  // im2col: row t holds the (zero-padded) receptive field of output t.
  cache.columns = Tensor({Tout, width});
  for (std::size_t t = 0; t < Tout; ++t) {
    for (std::size_t k = 0; k < K; ++k) {
      const auto src = static_cast<std::ptrdiff_t>(t + k) -
                       static_cast<std::ptrdiff_t>(cache.pad_left);
      if (src < 0 || src >= static_cast<std::ptrdiff_t>(T)) continue;
      const auto xr = x.row(static_cast<std::size_t>(src));
      std::copy(xr.begin(), xr.end(), cache.columns.row(t).begin() + k * in);
    }
  }

  Tensor z({Tout, out});
  for (std::size_t t = 0; t < Tout; ++t) {
    auto zr = z.row(t);
    std::copy(layer.bias.values().begin(), layer.bias.values().end(), zr.begin());
    simd::gemv(cache.packed.values(), out, width, cache.columns.row(t), zr);
  }
  return {std::move(z), std::move(cache)};
}

ConvGrads conv1d_backward(const ConvCache& cache, const Tensor& grad_z) {
  const std::size_t Tout = cache.columns.dim(0), width = cache.columns.dim(1);
  const std::size_t out = cache.packed.dim(0);
  const std::size_t in = cache.in_channels, K = cache.kernel_len, T = cache.input_length;
  if (grad_z.rank() != 2 || grad_z.dim(0) != Tout || grad_z.dim(1) != out) {
    throw DimensionError("conv1d_backward: grad shape " + shape_to_string(grad_z.shape()) +
                         " does not match output [" + std::to_string(Tout) + "x" +
                         std::to_string(out) + "]");
  }

  Tensor grad_packed({out, width});
  Tensor grad_cols({Tout, width});
  ConvGrads g{Tensor({T, in}), Tensor({out, in, K}), Tensor({out})};
  for (std::size_t t = 0; t < Tout; ++t) {
    const auto gz = grad_z.row(t);
    simd::axpy(1.0, gz, g.grad_bias.values());
    simd::ger(grad_packed.values(), out, width, gz, cache.columns.row(t));
    simd::gemv_t(cache.packed.values(), out, width, gz, grad_cols.row(t));
  }
  // col2im: scatter receptive-field gradients back onto input rows.
  for (std::size_t t = 0; t < Tout; ++t) {
    for (std::size_t k = 0; k < K; ++k) {
      const auto src = static_cast<std::ptrdiff_t>(t + k) -
                       static_cast<std::ptrdiff_t>(cache.pad_left);
      if (src < 0 || src >= static_cast<std::ptrdiff_t>(T)) continue;
      simd::axpy(1.0, grad_cols.row(t).subspan(k * in, in),
                 g.grad_x.row(static_cast<std::size_t>(src)));
    }
  }
  for (std::size_t o = 0; o < out; ++o) {
    for (std::size_t c = 0; c < in; ++c) {
      for (std::size_t k = 0; k < K; ++k) {
        g.grad_weights.at(o, c, k) = grad_packed.at(o, k * in + c);
      }
    }
  }
  return g;
}

std::size_t PoolSpec::output_length(std::size_t input_length) const {
  if (filter == 0 || stride == 0) throw ConfigError("pool filter and stride must be positive");
  if (input_length < filter) {
    throw DimensionError("maxpool: input length " + std::to_string(input_length) +
                         " shorter than filter " + std::to_string(filter));
  }
  return (input_length - filter) / stride + 1;
}

std::pair<Tensor, PoolCache> maxpool_forward(const PoolSpec& spec, const Tensor& x) {
  if (x.rank() != 2) {
    throw DimensionError("maxpool: expected [T x ch] input, got " + shape_to_string(x.shape()));
  }
  const std::size_t T = x.dim(0), ch = x.dim(1);
  const std::size_t Tout = spec.output_length(T);
  Tensor y({Tout, ch});
  PoolCache cache{std::vector<std::size_t>(Tout * ch), T, ch};
  for (std::size_t t = 0; t < Tout; ++t) {
    const std::size_t start = t * spec.stride;
    for (std::size_t c = 0; c < ch; ++c) {
      std::size_t best = start;
      for (std::size_t i = start + 1; i < start + spec.filter; ++i) {
        if (x.at(i, c) > x.at(best, c)) best = i;
      }
      y.at(t, c) = x.at(best, c);
      cache.argmax[t * ch + c] = best;
    }
  }
  return {std::move(y), std::move(cache)};
}

Tensor maxpool_backward(const PoolCache& cache, const Tensor& grad_y) {
  if (grad_y.rank() != 2 || grad_y.dim(1) != cache.channels ||
      grad_y.dim(0) * cache.channels != cache.argmax.size()) {
    throw DimensionError("maxpool_backward: grad shape " + shape_to_string(grad_y.shape()) +
                         " does not match the forward output");
  }
  Tensor grad_x({cache.input_length, cache.channels});
  const std::size_t ch = cache.channels;
  for (std::size_t t = 0; t < grad_y.dim(0); ++t) {
    for (std::size_t c = 0; c < ch; ++c) {
      grad_x.at(cache.argmax[t * ch + c], c) += grad_y.at(t, c);
    }
  }
  return grad_x;
}

Tensor relu_forward(const Tensor& z) { return relu(z); }

Tensor relu_backward(const Tensor& z, const Tensor& grad_a) {
  if (z.shape() != grad_a.shape()) {
    throw DimensionError("relu_backward: shapes " + shape_to_string(z.shape()) + " and " +
                         shape_to_string(grad_a.shape()) + " differ");
  }
  Tensor g = grad_a;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!(z[i] > 0.0)) g[i] = 0.0;
  }
  return g;
}

Tensor flatten(const Tensor& x) { return x.reshaped({x.size()}); }

Tensor unflatten(const Tensor& flat, const Shape& shape) { return flat.reshaped(shape); }

DenseLayer DenseLayer::zeros(std::size_t in, std::size_t out) {
  if (in == 0 || out == 0) throw ConfigError("dense layer dimensions must be positive");
  return {Tensor({out, in}), Tensor({out})};
}

std::pair<Tensor, DenseCache> dense_forward(const DenseLayer& layer, const Tensor& x) {
  if (x.size() != layer.in_features()) {
    throw DimensionError("dense: expected " + std::to_string(layer.in_features()) +
                         " inputs, got " + shape_to_string(x.shape()));
  }
  Tensor z = layer.bias;
  simd::gemv(layer.weights.values(), layer.out_features(), layer.in_features(), x.values(),
             z.values());
  return {std::move(z), DenseCache{x}};
}

DenseGrads dense_backward(const DenseLayer& layer, const DenseCache& cache,
                          const Tensor& grad_z) {
  if (grad_z.size() != layer.out_features()) {
    throw DimensionError("dense_backward: expected " + std::to_string(layer.out_features()) +
                         " gradients, got " + shape_to_string(grad_z.shape()));
  }
  const std::size_t out = layer.out_features(), in = layer.in_features();
  DenseGrads g{Tensor(cache.input.shape()), Tensor({out, in}), grad_z.reshaped({out})};
  simd::ger(g.grad_weights.values(), out, in, grad_z.values(), cache.input.values());
  simd::gemv_t(layer.weights.values(), out, in, grad_z.values(), g.grad_x.values());
  return g;
}

}  // namespace forecast
