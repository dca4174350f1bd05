#pragma once

// Gated recurrent units: single cell, unidirectional sequence, and stacked
// bidirectional processor with backpropagation through time.
//
//   r  = sigmoid(W_r x + U_r h + b_r)
//   z  = sigmoid(W_z x + U_z h + b_z)
//   h~ = tanh(W x + U (r * h) + b)
//   h' = (1 - z) * h + z * h~

#include <functional>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "forecast/nn/cnn.hpp"
#include "forecast/numeric/tensor.hpp"

namespace forecast {

struct GruCellParams {
  Tensor w_reset, w_update, w_candidate;  // hidden x input
  Tensor u_reset, u_update, u_candidate;  // hidden x hidden
  Tensor b_reset, b_update, b_candidate;  // hidden

  std::size_t input_dim() const { return w_reset.dim(1); }
  std::size_t hidden_dim() const { return w_reset.dim(0); }

  static GruCellParams zeros(std::size_t input_dim, std::size_t hidden_dim);

  // Visits the nine tensors in a fixed order with stable short names.
  template <typename Self, typename Fn>
  static void visit(Self& self, Fn&& fn) {
    fn("w_reset", self.w_reset);
    fn("w_update", self.w_update);
    fn("w_candidate", self.w_candidate);
    fn("u_reset", self.u_reset);
    fn("u_update", self.u_update);
    fn("u_candidate", self.u_candidate);
    fn("b_reset", self.b_reset);
    fn("b_update", self.b_update);
    fn("b_candidate", self.b_candidate);
  }
};

struct GruCellCache {
  Tensor x;
  Tensor h_prev;
  Tensor reset;
  Tensor update;
  Tensor candidate;
  Tensor gated_prev;  // reset * h_prev
};

std::pair<Tensor, GruCellCache> gru_cell_forward(const GruCellParams& p, const Tensor& x,
                                                 const Tensor& h_prev);

struct GruCellInputGrads {
  Tensor grad_x;
  Tensor grad_h_prev;
};

// Adds parameter gradients into `grads` (same shapes as `p`).
GruCellInputGrads gru_cell_backward(const GruCellParams& p, const GruCellCache& cache,
                                    const Tensor& grad_h, GruCellParams& grads);

struct GruSequenceCache {
  std::vector<GruCellCache> steps;
};

// hs row t is the state after consuming xs rows 0..t. h0 defaults to zero.
std::pair<Tensor, GruSequenceCache> gru_sequence_forward(const GruCellParams& p,
                                                         const Tensor& xs,
                                                         const Tensor* h0 = nullptr);

struct GruSequenceGrads {
  Tensor grad_xs;
  Tensor grad_h0;
  GruCellParams params;
};

GruSequenceGrads gru_sequence_backward(const GruCellParams& p, const GruSequenceCache& cache,
                                       const Tensor& grad_hs);

struct BiGruLayer {
  GruCellParams forward;
  std::optional<GruCellParams> backward;  // absent for the unidirectional ablation
};

struct BiGruStack {
  std::vector<BiGruLayer> layers;

  bool bidirectional() const { return !layers.empty() && layers.front().backward.has_value(); }
  std::size_t directions() const { return bidirectional() ? 2 : 1; }
  std::size_t input_dim() const { return layers.front().forward.input_dim(); }
  std::size_t hidden_dim() const { return layers.front().forward.hidden_dim(); }
  std::size_t output_dim() const { return directions() * hidden_dim(); }

  static BiGruStack zeros(std::size_t input_dim, std::size_t hidden_dim, std::size_t num_layers,
                          bool bidirectional = true);
};

struct BiGruCache {
  struct Layer {
    GruSequenceCache forward;
    GruSequenceCache backward;
  };
  std::vector<Layer> layers;
};

// Output row t concatenates [forward state t, backward state t].
std::pair<Tensor, BiGruCache> bigru_forward(const BiGruStack& stack, const Tensor& xs);

struct BiGruGrads {
  Tensor grad_xs;
  BiGruStack params;
};

BiGruGrads bigru_backward(const BiGruStack& stack, const BiGruCache& cache,
                          const Tensor& grad_ys);

enum class HeadActivation { Identity, Softmax };

struct OutputHead {
  DenseLayer affine;
  HeadActivation activation = HeadActivation::Identity;
};

struct HeadCache {
  DenseCache dense;
  Tensor output;
};

std::pair<Tensor, HeadCache> output_head_forward(const OutputHead& head, const Tensor& features);
DenseGrads output_head_backward(const OutputHead& head, const HeadCache& cache,
                                const Tensor& grad_y);

Tensor reverse_rows(const Tensor& x);

}  // namespace forecast
