#pragma once

#include <string>
#include <vector>

#include "motedit/nn/graph.hpp"

namespace motedit::nn {

template <typename S>
inline void xavier_init(MatT<S>& w, Rng& rng) {
  const double bound = std::sqrt(6.0 / (w.rows() + w.cols()));
  for (Eigen::Index i = 0; i < w.rows(); ++i)
    for (Eigen::Index j = 0; j < w.cols(); ++j)
      w(i, j) = static_cast<S>(rng.uniform(-bound, bound));
}

template <typename S>
inline void gaussian_init(MatT<S>& w, Rng& rng, double stddev) {
  for (Eigen::Index i = 0; i < w.rows(); ++i)
    for (Eigen::Index j = 0; j < w.cols(); ++j)
      w(i, j) = static_cast<S>(stddev * rng.normal());
}

template <typename S>
struct Linear {
  Param<S>* w = nullptr;  // d_in x d_out
  Param<S>* b = nullptr;  // 1 x d_out

  void init(ParamSet<S>& ps, const std::string& name, int d_in, int d_out,
            Rng& rng) {
    w = &ps.add(name + ".w", d_in, d_out);
    b = &ps.add(name + ".b", 1, d_out);
    xavier_init(w->w, rng);
  }

  Node<S>* apply(Tape<S>& t, Node<S>* x) const {
    return t.add_rowvec(t.matmul(x, t.leaf(*w)), t.leaf(*b));
  }
};

template <typename S>
struct LayerNorm {
  Param<S>* gain = nullptr;
  Param<S>* bias = nullptr;

  void init(ParamSet<S>& ps, const std::string& name, int dim) {
    gain = &ps.add(name + ".gain", 1, dim);
    bias = &ps.add(name + ".bias", 1, dim);
    gain->w.setOnes();
  }

  Node<S>* apply(Tape<S>& t, Node<S>* x) const {
    return t.layer_norm(x, t.leaf(*gain), t.leaf(*bias));
  }
};

// Full (bidirectional) multi-head self-attention. `key_mask`, when non-null,
// is a 1 x L additive row (0 = attend, large negative = ignore the key).
template <typename S>
struct MultiHeadAttention {
  Linear<S> q, k, v, out;
  int heads = 1;
  int head_dim = 0;

  void init(ParamSet<S>& ps, const std::string& name, int d_model, int n_heads,
            Rng& rng) {
    if (d_model % n_heads != 0) {
      throw InvalidConfigError("attention: d_model must divide by heads");
    }
    heads = n_heads;
    head_dim = d_model / n_heads;
    q.init(ps, name + ".q", d_model, d_model, rng);
    k.init(ps, name + ".k", d_model, d_model, rng);
    v.init(ps, name + ".v", d_model, d_model, rng);
    out.init(ps, name + ".out", d_model, d_model, rng);
  }

  Node<S>* apply(Tape<S>& t, Node<S>* x, Node<S>* key_mask) const {
    Node<S>* qx = q.apply(t, x);
    Node<S>* kx = k.apply(t, x);
    Node<S>* vx = v.apply(t, x);
    const S inv_sqrt = S(1) / std::sqrt(static_cast<S>(head_dim));
    std::vector<Node<S>*> head_outs;
    head_outs.reserve(heads);
    for (int h = 0; h < heads; ++h) {
      Node<S>* qh = t.slice_cols(qx, h * head_dim, head_dim);
      Node<S>* kh = t.slice_cols(kx, h * head_dim, head_dim);
      Node<S>* vh = t.slice_cols(vx, h * head_dim, head_dim);
      Node<S>* scores = t.scale(t.matmul_nt(qh, kh), inv_sqrt);
      if (key_mask != nullptr) scores = t.add_rowvec(scores, key_mask);
      Node<S>* attn = t.softmax_rows(scores);
      head_outs.push_back(t.matmul(attn, vh));
    }
    return out.apply(t, t.concat_cols(head_outs));
  }
};

template <typename S>
struct EncoderLayer {
  LayerNorm<S> ln1, ln2;
  MultiHeadAttention<S> attn;
  Linear<S> ff1, ff2;

  void init(ParamSet<S>& ps, const std::string& name, int d_model, int heads,
            int d_ff, Rng& rng) {
    ln1.init(ps, name + ".ln1", d_model);
    attn.init(ps, name + ".attn", d_model, heads, rng);
    ln2.init(ps, name + ".ln2", d_model);
    ff1.init(ps, name + ".ff1", d_model, d_ff, rng);
    ff2.init(ps, name + ".ff2", d_ff, d_model, rng);
  }

  Node<S>* apply(Tape<S>& t, Node<S>* x, Node<S>* key_mask) const {
    // Pre-norm residual blocks.
    Node<S>* h = t.add(x, attn.apply(t, ln1.apply(t, x), key_mask));
    Node<S>* f = ff2.apply(t, t.gelu(ff1.apply(t, ln2.apply(t, h))));
    return t.add(h, f);
  }
};

template <typename S>
struct TransformerEncoder {
  std::vector<EncoderLayer<S>> layers;
  LayerNorm<S> final_ln;

  void init(ParamSet<S>& ps, const std::string& name, int d_model, int heads,
            int d_ff, int n_layers, Rng& rng) {
    layers.resize(n_layers);
    for (int l = 0; l < n_layers; ++l) {
      layers[l].init(ps, name + ".layer" + std::to_string(l), d_model, heads,
                     d_ff, rng);
    }
    final_ln.init(ps, name + ".final_ln", d_model);
  }

  Node<S>* apply(Tape<S>& t, Node<S>* x, Node<S>* key_mask = nullptr) const {
    Node<S>* h = x;
    for (const auto& layer : layers) h = layer.apply(t, h, key_mask);
    return final_ln.apply(t, h);
  }
};

// Sinusoidal position code: row p holds interleaved (sin, cos) pairs over
// geometrically spaced frequencies. Also used for the timestep embedding
// stage, where `positions` holds a single timestep value.
template <typename S>
inline MatT<S> sinusoidal_embedding(const std::vector<double>& positions, int dim) {
  if (dim % 2 != 0) throw InvalidConfigError("sinusoidal embedding: dim must be even");
  MatT<S> pe(static_cast<Eigen::Index>(positions.size()), dim);
  for (Eigen::Index r = 0; r < pe.rows(); ++r) {
    for (int i = 0; i < dim / 2; ++i) {
      const double freq = std::pow(10000.0, -2.0 * i / dim);
      pe(r, 2 * i) = static_cast<S>(std::sin(positions[r] * freq));
      pe(r, 2 * i + 1) = static_cast<S>(std::cos(positions[r] * freq));
    }
  }
  return pe;
}

template <typename S>
inline MatT<S> positional_encoding(int length, int dim) {
  std::vector<double> pos(length);
  for (int i = 0; i < length; ++i) pos[i] = i;
  return sinusoidal_embedding<S>(pos, dim);
}

}  // namespace motedit::nn
