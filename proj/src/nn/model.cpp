#include "forecast/nn/model.hpp"

#include <cmath>
#include <vector>

#include "forecast/error.hpp"
#include "forecast/numeric/simd.hpp"

namespace forecast {

void HyperParams::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError("hyperparameters: " + what); };
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) fail("learning_rate must be positive");
  if (batch_size == 0) fail("batch_size must be positive");
  if (max_epochs == 0) fail("max_epochs must be positive");
  for (auto c : conv_channels) {
    if (c == 0) fail("conv_channels must be positive");
  }
  if (kernel_len == 0) fail("kernel_len must be positive");
  if (kernel_len > window_len) fail("kernel_len must not exceed window_len");
  if (gru_hidden == 0) fail("gru_hidden must be positive");
  if (gru_layers == 0) fail("gru_layers must be positive");
  if (window_len == 0) fail("window_len must be positive");
  if (horizon == 0) fail("horizon must be positive");
  if (patience == 0) fail("patience must be positive");
  if (window_len < 4) fail("window_len must be at least 4 to survive two 2x pooling stages");
}

TimeLayout time_layout(const HyperParams& hp) {
  const PoolSpec pool{2, 2};
  TimeLayout t;
  t.conv1 = hp.window_len;  // same padding keeps length
  t.pool1 = pool.output_length(t.conv1);
  t.conv2 = t.pool1;
  t.pool2 = pool.output_length(t.conv2);
  t.conv3 = t.pool2;
  return t;
}

std::size_t Network::parameter_count() const {
  std::size_t n = 0;
  visit(*this, [&](const std::string&, const Tensor& t) { n += t.size(); });
  return n;
}

Network Network::zeros_like() const {
  Network z = *this;
  visit(z, [](const std::string&, Tensor& t) { t.fill(0.0); });
  return z;
}

Network& Network::operator+=(const Network& other) {
  std::vector<const Tensor*> src;
  visit(other, [&](const std::string&, const Tensor& t) { src.push_back(&t); });
  std::size_t i = 0;
  visit(*this, [&](const std::string& name, Tensor& t) {
    if (i >= src.size() || src[i]->shape() != t.shape()) {
      throw DimensionError("network accumulate: mismatched tensor " + name);
    }
    t += *src[i++];
  });
  return *this;
}

Network& Network::operator*=(double s) {
  visit(*this, [&](const std::string&, Tensor& t) { t *= s; });
  return *this;
}

bool operator==(const ModelState& a, const ModelState& b) {
  if (!(a.hp == b.hp) || a.feature_dim != b.feature_dim) return false;
  std::vector<const Tensor*> ta, tb;
  Network::visit(a.net, [&](const std::string&, const Tensor& t) { ta.push_back(&t); });
  Network::visit(b.net, [&](const std::string&, const Tensor& t) { tb.push_back(&t); });
  if (ta.size() != tb.size()) return false;
  for (std::size_t i = 0; i < ta.size(); ++i) {
    if (!(*ta[i] == *tb[i])) return false;
  }
  return a.net.head.activation == b.net.head.activation;
}

ModelState model_skeleton(const HyperParams& hp, std::size_t feature_dim) {
  hp.validate();
  if (feature_dim == 0) throw ConfigError("feature_dim must be positive");
  const auto layout = time_layout(hp);
  ModelState m;
  m.hp = hp;
  m.feature_dim = feature_dim;
  const auto& ch = hp.conv_channels;
  m.net.convs[0] = ConvLayer::zeros(feature_dim, ch[0], hp.kernel_len);
  m.net.convs[1] = ConvLayer::zeros(ch[0], ch[1], hp.kernel_len);
  m.net.convs[2] = ConvLayer::zeros(ch[1], ch[2], hp.kernel_len);
  m.net.gru = BiGruStack::zeros(ch[2], hp.gru_hidden, hp.gru_layers, hp.bidirectional);
  m.net.head.affine = DenseLayer::zeros(layout.conv3 * m.net.gru.output_dim(), hp.horizon);
  m.net.head.activation = HeadActivation::Identity;
  return m;
}

ModelState build_model(const HyperParams& hp, std::size_t feature_dim, const RngStream& rng) {
  ModelState m = model_skeleton(hp, feature_dim);
  Network::visit(m.net, [&](const std::string& name, Tensor& t) {
    if (t.rank() < 2) return;  // biases stay zero
    std::size_t fan_in, fan_out;
    if (t.rank() == 3) {  // conv: out x in x k
      fan_in = t.dim(1) * t.dim(2);
      fan_out = t.dim(0) * t.dim(2);
    } else {
      fan_in = t.dim(1);
      fan_out = t.dim(0);
    }
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    RngStream stream = rng.child(name);
    for (auto& v : t.values()) v = stream.uniform(-limit, limit);
  });
  return m;
}

std::pair<Tensor, ForwardCache> forward(const ModelState& model, const Tensor& window) {
  const auto& hp = model.hp;
  if (window.rank() != 2 || window.dim(0) != hp.window_len || window.dim(1) != model.feature_dim) {
    throw DimensionError("model forward: expected window [" + std::to_string(hp.window_len) +
                         "x" + std::to_string(model.feature_dim) + "], got " +
                         shape_to_string(window.shape()));
  }
  const auto& net = model.net;
  ForwardCache cache;
  Tensor a = window;
  for (std::size_t i = 0; i < 3; ++i) {
    auto [z, cc] = conv1d_forward(net.convs[i], a);
    cache.conv[i] = std::move(cc);
    a = relu_forward(z);
    cache.pre_relu[i] = std::move(z);
    if (i < 2) {
      auto [pooled, pc] = maxpool_forward(net.pool, a);
      cache.pool[i] = std::move(pc);
      a = std::move(pooled);
    }
  }
  auto [seq, gc] = bigru_forward(net.gru, a);
  cache.gru = std::move(gc);
  cache.gru_output_shape = seq.shape();
  auto [pred, hc] = output_head_forward(net.head, flatten(seq));
  cache.head = std::move(hc);
  return {std::move(pred), std::move(cache)};
}

Network backward(const ModelState& model, const ForwardCache& cache, const Tensor& grad_pred,
                 Tensor* grad_window) {
  const auto& net = model.net;
  Network g;
  g.pool = net.pool;
  g.head.activation = net.head.activation;

  auto hg = output_head_backward(net.head, cache.head, grad_pred);
  g.head.affine = {std::move(hg.grad_weights), std::move(hg.grad_bias)};

  auto gg = bigru_backward(net.gru, cache.gru, unflatten(hg.grad_x, cache.gru_output_shape));
  g.gru = std::move(gg.params);

  Tensor upstream = std::move(gg.grad_xs);
  for (std::size_t i = 3; i-- > 0;) {
    if (i < 2) upstream = maxpool_backward(cache.pool[i], upstream);
    upstream = relu_backward(cache.pre_relu[i], upstream);
    auto cg = conv1d_backward(cache.conv[i], upstream);
    g.convs[i] = {std::move(cg.grad_weights), std::move(cg.grad_bias), net.convs[i].padding};
    upstream = std::move(cg.grad_x);
  }
  if (grad_window) *grad_window = std::move(upstream);
  return g;
}

Loss mse_loss(const Tensor& pred, const Tensor& target) {
  if (pred.size() != target.size() || pred.empty()) {
    throw DimensionError("mse_loss: prediction " + shape_to_string(pred.shape()) +
                         " vs target " + shape_to_string(target.shape()));
  }
  const double n = static_cast<double>(pred.size());
  Loss loss{0.0, Tensor(pred.shape())};
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - target[i];
    loss.value += d * d;
    loss.grad[i] = 2.0 * d / n;
  }
  loss.value /= n;
  return loss;
}

void sgd_step(ModelState& model, const Network& grads, double lr) {
  std::vector<std::pair<std::string, const Tensor*>> gs;
  Network::visit(grads, [&](const std::string& name, const Tensor& t) { gs.emplace_back(name, &t); });
  std::size_t i = 0;
  Network::visit(model.net, [&](const std::string& name, Tensor& t) {
    if (i >= gs.size() || gs[i].second->shape() != t.shape()) {
      throw DimensionError("sgd_step: gradient for " + name + " has the wrong shape");
    }
    if (!gs[i].second->all_finite()) {
      throw NumericError("sgd_step: non-finite gradient in " + name);
    }
    ++i;
  });
  if (i != gs.size()) throw DimensionError("sgd_step: gradient tensor count mismatch");
  i = 0;
  Network::visit(model.net, [&](const std::string&, Tensor& t) {
    simd::axpy(-lr, gs[i++].second->values(), t.values());
  });
}

}  // namespace forecast
