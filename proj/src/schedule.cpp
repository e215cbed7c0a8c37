#include "motedit/schedule.hpp"

namespace motedit {

void NoiseSchedule::validate() const {
  if (steps < 1) throw InvalidConfigError("schedule: steps must be >= 1");
  if (alpha_bar.size() != steps + 1 || beta.size() != steps + 1) {
    throw ShapeError("schedule: coefficient arrays have wrong length");
  }
  if (alpha_bar[0] != 1.0) throw InvalidConfigError("schedule: alpha_bar[0] must be 1");
  for (int t = 1; t <= steps; ++t) {
    if (!(alpha_bar[t] < alpha_bar[t - 1])) {
      throw InvalidConfigError("schedule: alpha_bar must strictly decrease");
    }
    if (!(beta[t] > 0.0 && beta[t] < 1.0)) {
      throw InvalidConfigError("schedule: beta out of (0,1) at t=" + std::to_string(t));
    }
  }
}

NoiseSchedule cosine_schedule(int steps) {
  if (steps < 1) throw InvalidConfigError("cosine_schedule: steps must be >= 1");
  const double s = 0.008;
  auto f = [&](double t) {
    const double x = (t / steps + s) / (1.0 + s) * M_PI / 2.0;
    const double c = std::cos(x);
    return c * c;
  };
  NoiseSchedule sched;
  sched.steps = steps;
  sched.alpha_bar.resize(steps + 1);
  sched.beta.setZero(steps + 1);
  sched.alpha.setZero(steps + 1);
  sched.posterior_var.setZero(steps + 1);
  sched.post_coef_x0.setZero(steps + 1);
  sched.post_coef_xt.setZero(steps + 1);

  sched.alpha_bar[0] = 1.0;
  sched.alpha[0] = 1.0;
  const double f0 = f(0.0);
  double prev_raw = 1.0;
  for (int t = 1; t <= steps; ++t) {
    const double raw = f(static_cast<double>(t)) / f0;
    double b = 1.0 - raw / prev_raw;
    b = std::clamp(b, 1e-8, 0.999);
    prev_raw = raw;
    sched.beta[t] = b;
    sched.alpha[t] = 1.0 - b;
    sched.alpha_bar[t] = sched.alpha_bar[t - 1] * sched.alpha[t];

    const double ab = sched.alpha_bar[t];
    const double ab_prev = sched.alpha_bar[t - 1];
    sched.post_coef_x0[t] = std::sqrt(ab_prev) * b / (1.0 - ab);
    sched.post_coef_xt[t] = std::sqrt(sched.alpha[t]) * (1.0 - ab_prev) / (1.0 - ab);
    sched.posterior_var[t] = b * (1.0 - ab_prev) / (1.0 - ab);
  }
  sched.validate();
  return sched;
}

}  // namespace motedit
