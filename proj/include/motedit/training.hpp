#pragma once

#include <optional>
#include <vector>

#include "motedit/denoiser.hpp"

namespace motedit {

// One pre-encoded training sample in the normalized feature domain.
struct TrainItem {
  nn::MatT<float> target;
  std::optional<nn::MatT<float>> source;
  TextEncoding text;
};

struct TrainConfig {
  int steps = 2000;
  int batch_size = 16;
  double lr = 3e-4;
  double grad_clip = 1.0;
  std::uint64_t seed = 0;
  int log_every = 0;       // 0 = silent
  bool text_only = false;  // MDM mode: the source condition is never fed
};

// Differentiable diffusion training loss for one sample: MSE between the
// denoiser's x0 prediction at a noised target and the clean target.
template <typename S>
nn::Node<S>* build_training_loss(nn::Tape<S>& tape,
                                 const TmedDenoiserT<S>& model,
                                 const nn::MatT<S>& target,
                                 const nn::MatT<S>* source,
                                 const TextEncoding* text, int t,
                                 const nn::MatT<S>& eps,
                                 const NoiseSchedule& sched) {
  const S a = static_cast<S>(std::sqrt(sched.alpha_bar[t]));
  const S b = static_cast<S>(std::sqrt(1.0 - sched.alpha_bar[t]));
  const nn::MatT<S> x_t = a * target + b * eps;
  nn::Node<S>* pred = model.forward(tape, x_t, t, text, source);
  return tape.mse(pred, target);
}

struct TrainReport {
  std::vector<double> step_losses;  // running means at log points
  double final_loss = 0.0;
  double seconds = 0.0;
};

// Minibatch Adam training of the denoiser over pre-encoded items. Condition
// dropout is drawn per sample per the 5/5/5/85 scheme.
TrainReport train_denoiser(TmedDenoiser& model, const std::vector<TrainItem>& items,
                           const NoiseSchedule& sched, const TrainConfig& cfg);

}  // namespace motedit
