#pragma once

// conv -> relu -> pool -> conv -> relu -> pool -> conv -> relu -> (Bi)GRU
// stack -> flatten -> dense, emitting all horizon steps in one pass.

#include <array>
#include <cstdint>
#include <string>
#include <utility>

#include "forecast/nn/bigru.hpp"
#include "forecast/nn/cnn.hpp"
#include "forecast/numeric/rng.hpp"

namespace forecast {

struct HyperParams {
  double learning_rate = 0.001;
  std::size_t batch_size = 64;
  std::size_t max_epochs = 100;
  std::array<std::size_t, 3> conv_channels{16, 32, 64};
  std::size_t kernel_len = 3;
  std::size_t gru_hidden = 64;
  std::size_t gru_layers = 2;
  std::size_t window_len = 30;
  std::size_t horizon = 7;
  bool bidirectional = true;
  std::size_t patience = 10;
  bool early_stopping = true;
  std::uint64_t seed = 0;

  // Throws ConfigError naming the first offending field.
  void validate() const;

  friend bool operator==(const HyperParams&, const HyperParams&) = default;
};

// Time lengths through the conv/pool stack for a given window.
struct TimeLayout {
  std::size_t conv1 = 0, pool1 = 0, conv2 = 0, pool2 = 0, conv3 = 0;
};
TimeLayout time_layout(const HyperParams& hp);

struct Network {
  std::array<ConvLayer, 3> convs;
  PoolSpec pool{2, 2};
  BiGruStack gru;
  OutputHead head;

  // Visits every trainable tensor with a stable dotted name, e.g.
  // "conv1.weight", "gru.l0.fwd.u_reset", "head.bias".
  template <typename Self, typename Fn>
  static void visit(Self& self, Fn&& fn) {
    for (std::size_t i = 0; i < self.convs.size(); ++i) {
      const std::string p = "conv" + std::to_string(i + 1);
      fn(p + ".weight", self.convs[i].weights);
      fn(p + ".bias", self.convs[i].bias);
    }
    for (std::size_t l = 0; l < self.gru.layers.size(); ++l) {
      auto& layer = self.gru.layers[l];
      const std::string p = "gru.l" + std::to_string(l);
      GruCellParams::visit(layer.forward,
                           [&](std::string_view n, auto& t) { fn(p + ".fwd." + std::string(n), t); });
      if (layer.backward) {
        GruCellParams::visit(*layer.backward, [&](std::string_view n, auto& t) {
          fn(p + ".bwd." + std::string(n), t);
        });
      }
    }
    fn(std::string("head.weight"), self.head.affine.weights);
    fn(std::string("head.bias"), self.head.affine.bias);
  }

  std::size_t parameter_count() const;
  Network zeros_like() const;
  Network& operator+=(const Network& other);
  Network& operator*=(double s);
};

struct ModelState {
  HyperParams hp;
  std::size_t feature_dim = 0;
  Network net;

  friend bool operator==(const ModelState& a, const ModelState& b);
};

// Zero-valued network with the shapes implied by (hp, feature_dim).
ModelState model_skeleton(const HyperParams& hp, std::size_t feature_dim);

// Glorot-uniform weights and zero biases; each tensor draws from its own
// child stream labelled by its name.
ModelState build_model(const HyperParams& hp, std::size_t feature_dim, const RngStream& rng);

struct ForwardCache {
  std::array<ConvCache, 3> conv;
  std::array<Tensor, 3> pre_relu;
  std::array<PoolCache, 2> pool;
  BiGruCache gru;
  Shape gru_output_shape;
  HeadCache head;
};

// window: [window_len x feature_dim]; returns [horizon].
std::pair<Tensor, ForwardCache> forward(const ModelState& model, const Tensor& window);

// Gradients of all parameters given d(loss)/d(prediction). Optionally
// returns d(loss)/d(window).
Network backward(const ModelState& model, const ForwardCache& cache, const Tensor& grad_pred,
                 Tensor* grad_window = nullptr);

struct Loss {
  double value = 0.0;
  Tensor grad;  // d(loss)/d(pred)
};

// mean((pred - target)^2) and its gradient 2 (pred - target) / n.
Loss mse_loss(const Tensor& pred, const Tensor& target);

// theta -= lr * grads. Throws NumericError naming the first non-finite
// gradient tensor; parameters are untouched in that case.
void sgd_step(ModelState& model, const Network& grads, double lr);

}  // namespace forecast
