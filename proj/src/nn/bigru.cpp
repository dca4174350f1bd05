#include "forecast/nn/bigru.hpp"

#include <algorithm>
#include <cmath>

#include "forecast/error.hpp"
#include "forecast/numeric/ops.hpp"
#include "forecast/numeric/simd.hpp"

namespace forecast {
namespace {

void require_vector(const Tensor& t, std::size_t n, const char* what) {
  if (t.size() != n) {
    throw DimensionError(std::string(what) + ": expected " + std::to_string(n) +
                         " elements, got " + shape_to_string(t.shape()));
  }
}

// pre = W x + U h + b for one gate.
Tensor gate_preactivation(const Tensor& w, const Tensor& u, const Tensor& b, const Tensor& x,
                          const Tensor& h) {
  Tensor a = b;
  const std::size_t hidden = w.dim(0);
  simd::gemv(w.values(), hidden, w.dim(1), x.values(), a.values());
  simd::gemv(u.values(), hidden, hidden, h.values(), a.values());
  return a;
}

}  // namespace

GruCellParams GruCellParams::zeros(std::size_t input_dim, std::size_t hidden_dim) {
  if (input_dim == 0 || hidden_dim == 0) {
    throw ConfigError("GRU dimensions must be positive");
  }
  const auto wx = [&] { return Tensor({hidden_dim, input_dim}); };
  const auto uh = [&] { return Tensor({hidden_dim, hidden_dim}); };
  const auto b = [&] { return Tensor({hidden_dim}); };
  return {wx(), wx(), wx(), uh(), uh(), uh(), b(), b(), b()};
}

std::pair<Tensor, GruCellCache> gru_cell_forward(const GruCellParams& p, const Tensor& x,
                                                 const Tensor& h_prev) {
  const std::size_t hidden = p.hidden_dim();
  require_vector(x, p.input_dim(), "gru_cell_forward input");
  require_vector(h_prev, hidden, "gru_cell_forward state");

  GruCellCache c;
  c.x = x.reshaped({x.size()});
  c.h_prev = h_prev.reshaped({hidden});
  c.reset = gate_preactivation(p.w_reset, p.u_reset, p.b_reset, c.x, c.h_prev);
  c.update = gate_preactivation(p.w_update, p.u_update, p.b_update, c.x, c.h_prev);
  for (auto& v : c.reset.values()) v = sigmoid(v);
  for (auto& v : c.update.values()) v = sigmoid(v);

  c.gated_prev = Tensor({hidden});
  for (std::size_t i = 0; i < hidden; ++i) c.gated_prev[i] = c.reset[i] * c.h_prev[i];
  c.candidate = gate_preactivation(p.w_candidate, p.u_candidate, p.b_candidate, c.x,
                                   c.gated_prev);
  for (auto& v : c.candidate.values()) v = std::tanh(v);

  Tensor h({hidden});
  for (std::size_t i = 0; i < hidden; ++i) {
    h[i] = (1.0 - c.update[i]) * c.h_prev[i] + c.update[i] * c.candidate[i];
  }
  return {std::move(h), std::move(c)};
}

GruCellInputGrads gru_cell_backward(const GruCellParams& p, const GruCellCache& c,
                                    const Tensor& grad_h, GruCellParams& grads) {
  const std::size_t hidden = p.hidden_dim(), input = p.input_dim();
  require_vector(grad_h, hidden, "gru_cell_backward gradient");

  Tensor d_cand({hidden}), d_upd({hidden}), d_reset({hidden});
  GruCellInputGrads out{Tensor({input}), Tensor({hidden})};
  for (std::size_t i = 0; i < hidden; ++i) {
    const double z = c.update[i], hc = c.candidate[i];
    out.grad_h_prev[i] = grad_h[i] * (1.0 - z);
    d_cand[i] = grad_h[i] * z * (1.0 - hc * hc);
    d_upd[i] = grad_h[i] * (hc - c.h_prev[i]) * z * (1.0 - z);
  }

  // Candidate path: U_c acts on r * h_prev.
  Tensor d_gated({hidden});
  simd::gemv_t(p.u_candidate.values(), hidden, hidden, d_cand.values(), d_gated.values());
  for (std::size_t i = 0; i < hidden; ++i) {
    const double r = c.reset[i];
    out.grad_h_prev[i] += d_gated[i] * r;
    d_reset[i] = d_gated[i] * c.h_prev[i] * r * (1.0 - r);
  }

  simd::ger(grads.w_candidate.values(), hidden, input, d_cand.values(), c.x.values());
  simd::ger(grads.u_candidate.values(), hidden, hidden, d_cand.values(),
            c.gated_prev.values());
  simd::axpy(1.0, d_cand.values(), grads.b_candidate.values());
  simd::ger(grads.w_update.values(), hidden, input, d_upd.values(), c.x.values());
  simd::ger(grads.u_update.values(), hidden, hidden, d_upd.values(), c.h_prev.values());
  simd::axpy(1.0, d_upd.values(), grads.b_update.values());
  simd::ger(grads.w_reset.values(), hidden, input, d_reset.values(), c.x.values());
  simd::ger(grads.u_reset.values(), hidden, hidden, d_reset.values(), c.h_prev.values());
  simd::axpy(1.0, d_reset.values(), grads.b_reset.values());

  simd::gemv_t(p.w_candidate.values(), hidden, input, d_cand.values(), out.grad_x.values());
  simd::gemv_t(p.w_update.values(), hidden, input, d_upd.values(), out.grad_x.values());
  simd::gemv_t(p.w_reset.values(), hidden, input, d_reset.values(), out.grad_x.values());
  simd::gemv_t(p.u_update.values(), hidden, hidden, d_upd.values(),
               out.grad_h_prev.values());
  simd::gemv_t(p.u_reset.values(), hidden, hidden, d_reset.values(),
               out.grad_h_prev.values());
  return out;
}

std::pair<Tensor, GruSequenceCache> gru_sequence_forward(const GruCellParams& p,
                                                         const Tensor& xs, const Tensor* h0) {
  if (xs.rank() != 2 || xs.dim(0) == 0) {
    throw DimensionError("gru_sequence_forward: expected non-empty [T x input], got " +
                         shape_to_string(xs.shape()));
  }
  if (xs.dim(1) != p.input_dim()) {
    throw DimensionError("gru_sequence_forward: input width " + std::to_string(xs.dim(1)) +
                         " != cell input " + std::to_string(p.input_dim()));
  }
  const std::size_t T = xs.dim(0), hidden = p.hidden_dim();
  Tensor h = h0 ? h0->reshaped({hidden}) : Tensor({hidden});
  Tensor hs({T, hidden});
  GruSequenceCache cache;
  cache.steps.reserve(T);
  for (std::size_t t = 0; t < T; ++t) {
    const auto xr = xs.row(t);
    auto [next, step] =
        gru_cell_forward(p, Tensor({xs.dim(1)}, std::vector<double>(xr.begin(), xr.end())), h);
    std::copy(next.values().begin(), next.values().end(), hs.row(t).begin());
    h = std::move(next);
    cache.steps.push_back(std::move(step));
  }
  return {std::move(hs), std::move(cache)};
}

GruSequenceGrads gru_sequence_backward(const GruCellParams& p, const GruSequenceCache& cache,
                                       const Tensor& grad_hs) {
  const std::size_t T = cache.steps.size(), hidden = p.hidden_dim();
  if (grad_hs.rank() != 2 || grad_hs.dim(0) != T || grad_hs.dim(1) != hidden) {
    throw DimensionError("gru_sequence_backward: grad shape " +
                         shape_to_string(grad_hs.shape()) + " does not match [" +
                         std::to_string(T) + "x" + std::to_string(hidden) + "]");
  }
  GruSequenceGrads g{Tensor({T, p.input_dim()}), Tensor({hidden}),
                     GruCellParams::zeros(p.input_dim(), hidden)};
  Tensor carry({hidden});
  for (std::size_t t = T; t-- > 0;) {
    simd::axpy(1.0, grad_hs.row(t), carry.values());
    auto step = gru_cell_backward(p, cache.steps[t], carry, g.params);
    std::copy(step.grad_x.values().begin(), step.grad_x.values().end(),
              g.grad_xs.row(t).begin());
    carry = std::move(step.grad_h_prev);
  }
  g.grad_h0 = std::move(carry);
  return g;
}

Tensor reverse_rows(const Tensor& x) {
  Tensor out = x;
  const std::size_t T = x.dim(0);
  for (std::size_t t = 0; t < T; ++t) {
    const auto src = x.row(T - 1 - t);
    std::copy(src.begin(), src.end(), out.row(t).begin());
  }
  return out;
}

BiGruStack BiGruStack::zeros(std::size_t input_dim, std::size_t hidden_dim,
                             std::size_t num_layers, bool bidirectional) {
  if (num_layers == 0) throw ConfigError("GRU stack needs at least one layer");
  BiGruStack s;
  const std::size_t dirs = bidirectional ? 2 : 1;
  for (std::size_t l = 0; l < num_layers; ++l) {
    const std::size_t in = l == 0 ? input_dim : dirs * hidden_dim;
    BiGruLayer layer{GruCellParams::zeros(in, hidden_dim), std::nullopt};
    if (bidirectional) layer.backward = GruCellParams::zeros(in, hidden_dim);
    s.layers.push_back(std::move(layer));
  }
  return s;
}

std::pair<Tensor, BiGruCache> bigru_forward(const BiGruStack& stack, const Tensor& xs) {
  if (stack.layers.empty()) throw ConfigError("bigru_forward: empty stack");
  BiGruCache cache;
  Tensor current = xs;
  for (const auto& layer : stack.layers) {
    BiGruCache::Layer lc;
    auto [fwd, fwd_cache] = gru_sequence_forward(layer.forward, current);
    lc.forward = std::move(fwd_cache);
    if (!layer.backward) {
      current = std::move(fwd);
    } else {
      auto [bwd_rev, bwd_cache] = gru_sequence_forward(*layer.backward, reverse_rows(current));
      lc.backward = std::move(bwd_cache);
      const Tensor bwd = reverse_rows(bwd_rev);
      const std::size_t T = fwd.dim(0), H = fwd.dim(1);
      Tensor merged({T, 2 * H});
      for (std::size_t t = 0; t < T; ++t) {
        auto m = merged.row(t);
        std::copy(fwd.row(t).begin(), fwd.row(t).end(), m.begin());
        std::copy(bwd.row(t).begin(), bwd.row(t).end(), m.begin() + H);
      }
      current = std::move(merged);
    }
    cache.layers.push_back(std::move(lc));
  }
  return {std::move(current), std::move(cache)};
}

BiGruGrads bigru_backward(const BiGruStack& stack, const BiGruCache& cache,
                          const Tensor& grad_ys) {
  const std::size_t L = stack.layers.size();
  if (cache.layers.size() != L) {
    throw DimensionError("bigru_backward: cache has " + std::to_string(cache.layers.size()) +
                         " layers, stack has " + std::to_string(L));
  }
  const std::size_t out_dim = stack.output_dim();
  const std::size_t T = cache.layers.front().forward.steps.size();
  if (grad_ys.rank() != 2 || grad_ys.dim(0) != T || grad_ys.dim(1) != out_dim) {
    throw DimensionError("bigru_backward: grad shape " + shape_to_string(grad_ys.shape()) +
                         " does not match [" + std::to_string(T) + "x" +
                         std::to_string(out_dim) + "]");
  }

  BiGruGrads g;
  g.params.layers.resize(L);
  Tensor upstream = grad_ys;
  for (std::size_t l = L; l-- > 0;) {
    const auto& layer = stack.layers[l];
    const std::size_t H = layer.forward.hidden_dim();
    if (!layer.backward) {
      auto fg = gru_sequence_backward(layer.forward, cache.layers[l].forward, upstream);
      g.params.layers[l] = {std::move(fg.params), std::nullopt};
      upstream = std::move(fg.grad_xs);
      continue;
    }
    Tensor gf({T, H}), gb_rev({T, H});
    for (std::size_t t = 0; t < T; ++t) {
      const auto u = upstream.row(t);
      std::copy(u.begin(), u.begin() + H, gf.row(t).begin());
      std::copy(u.begin() + H, u.end(), gb_rev.row(T - 1 - t).begin());
    }
    auto fg = gru_sequence_backward(layer.forward, cache.layers[l].forward, gf);
    auto bg = gru_sequence_backward(*layer.backward, cache.layers[l].backward, gb_rev);
    Tensor grad_in = fg.grad_xs;
    grad_in += reverse_rows(bg.grad_xs);
    g.params.layers[l] = {std::move(fg.params), std::move(bg.params)};
    upstream = std::move(grad_in);
  }
  g.grad_xs = std::move(upstream);
  return g;
}

std::pair<Tensor, HeadCache> output_head_forward(const OutputHead& head,
                                                 const Tensor& features) {
  auto [z, dense] = dense_forward(head.affine, features);
  Tensor y = head.activation == HeadActivation::Softmax ? softmax(z) : z;
  return {y, HeadCache{std::move(dense), y}};
}

DenseGrads output_head_backward(const OutputHead& head, const HeadCache& cache,
                                const Tensor& grad_y) {
  if (head.activation == HeadActivation::Identity) {
    return dense_backward(head.affine, cache.dense, grad_y);
  }
  // Softmax Jacobian-vector product: y * (g - <g, y>).
  const Tensor& y = cache.output;
  require_vector(grad_y, y.size(), "output_head_backward");
  const double inner = simd::dot(grad_y.values(), y.values());
  Tensor grad_z = y;
  for (std::size_t i = 0; i < y.size(); ++i) grad_z[i] = y[i] * (grad_y[i] - inner);
  return dense_backward(head.affine, cache.dense, grad_z);
}

}  // namespace forecast
