#pragma once

#include "motedit/nn/graph.hpp"

namespace motedit::nn {

template <typename S>
struct Adam {
  double lr = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double max_grad_norm = 1.0;  // <= 0 disables clipping
  long steps = 0;

  void step(ParamSet<S>& params, std::vector<MatT<S>>& grads) {
    double scale = 1.0;
    if (max_grad_norm > 0.0) {
      double sq = 0.0;
      for (const auto& g : grads) {
        if (g.size() > 0) sq += static_cast<double>(g.squaredNorm());
      }
      const double norm = std::sqrt(sq);
      if (norm > max_grad_norm) scale = max_grad_norm / norm;
    }
    ++steps;
    const double bc1 = 1.0 - std::pow(beta1, steps);
    const double bc2 = 1.0 - std::pow(beta2, steps);
    for (std::size_t i = 0; i < params.size(); ++i) {
      if (i >= grads.size() || grads[i].size() == 0) continue;
      Param<S>& p = params[i];
      const MatT<S> g = grads[i] * static_cast<S>(scale);
      p.adam_m = p.adam_m * S(beta1) + g * S(1.0 - beta1);
      p.adam_v = p.adam_v * S(beta2) + g.cwiseProduct(g) * S(1.0 - beta2);
      const MatT<S> mhat = p.adam_m / S(bc1);
      const MatT<S> vhat = p.adam_v / S(bc2);
      p.w -= (mhat.array() * S(lr) / (vhat.array().sqrt() + S(eps))).matrix();
    }
  }
};

}  // namespace motedit::nn
