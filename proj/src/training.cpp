#include "motedit/training.hpp"

#include <chrono>
#include <cstdio>

#include "motedit/nn/adam.hpp"

namespace motedit {

TrainReport train_denoiser(TmedDenoiser& model, const std::vector<TrainItem>& items,
                           const NoiseSchedule& sched, const TrainConfig& cfg) {
  if (items.empty()) throw InvalidConfigError("train_denoiser: empty training set");
  if (cfg.steps < 1 || cfg.batch_size < 1) {
    throw InvalidConfigError("train_denoiser: steps and batch_size must be >= 1");
  }
  auto& core = model.core();
  nn::Adam<float> opt;
  opt.lr = cfg.lr;
  opt.max_grad_norm = cfg.grad_clip;

  Rng rng(Rng::derive(cfg.seed, 0x7121));
  TrainReport report;
  double running = 0.0;
  int running_n = 0;
  const auto t_start = std::chrono::steady_clock::now();

  nn::Tape<float> tape(core.params().size());
  for (int step = 0; step < cfg.steps; ++step) {
    tape.reset(core.params().size());
    std::vector<nn::Node<float>*> losses;
    losses.reserve(cfg.batch_size);
    for (int b = 0; b < cfg.batch_size; ++b) {
      const TrainItem& item = items[rng.uniform_int(items.size())];
      const int t = 1 + static_cast<int>(rng.uniform_int(sched.steps));
      nn::MatT<float> eps(item.target.rows(), item.target.cols());
      for (Eigen::Index r = 0; r < eps.rows(); ++r)
        for (Eigen::Index c = 0; c < eps.cols(); ++c)
          eps(r, c) = static_cast<float>(rng.normal());

      const ConditionDropout drop = draw_condition_dropout(rng);
      const bool drop_source = drop == ConditionDropout::kDropSource ||
                               drop == ConditionDropout::kDropBoth;
      const bool drop_text = drop == ConditionDropout::kDropText ||
                             drop == ConditionDropout::kDropBoth;
      const bool use_source =
          !cfg.text_only && item.source.has_value() && !drop_source;
      losses.push_back(build_training_loss<float>(
          tape, core, item.target, use_source ? &*item.source : nullptr,
          drop_text ? nullptr : &item.text, t, eps, sched));
    }
    nn::Node<float>* total = losses[0];
    for (std::size_t i = 1; i < losses.size(); ++i) total = tape.add(total, losses[i]);
    total = tape.scale(total, 1.0f / static_cast<float>(cfg.batch_size));
    tape.backward(total);
    opt.step(core.params(), tape.param_grads);

    running += total->val(0, 0);
    ++running_n;
    report.final_loss = total->val(0, 0);
    if (cfg.log_every > 0 && (step + 1) % cfg.log_every == 0) {
      const double mean = running / running_n;
      report.step_losses.push_back(mean);
      std::printf("step %d/%d  loss %.5f\n", step + 1, cfg.steps, mean);
      std::fflush(stdout);
      running = 0.0;
      running_n = 0;
    }
  }
  report.seconds = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - t_start)
                       .count();
  return report;
}

}  // namespace motedit
