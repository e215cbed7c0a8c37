#pragma once

#include "motedit/common.hpp"

namespace motedit {

// Precomputed DDPM coefficients, 1-indexed by timestep t = 1..steps; slot 0
// of the per-step arrays is unused. alpha_bar has steps+1 entries with
// alpha_bar[0] == 1.
struct NoiseSchedule {
  int steps = 0;
  VecX alpha_bar;       // steps+1, strictly decreasing from 1
  VecX beta;            // steps+1, beta[0] = 0, each in (0,1)
  VecX alpha;           // steps+1, alpha[t] = 1 - beta[t]
  VecX posterior_var;   // steps+1, variance of q(x_{t-1} | x_t, x0)
  VecX post_coef_x0;    // steps+1, posterior mean coefficient on x0
  VecX post_coef_xt;    // steps+1, posterior mean coefficient on x_t

  void validate() const;
};

// Squared-cosine alpha_bar with offset 0.008; betas clipped at 0.999 and
// alpha_bar rebuilt as the cumulative product so the posterior identities
// stay exact.
NoiseSchedule cosine_schedule(int steps);

}  // namespace motedit
