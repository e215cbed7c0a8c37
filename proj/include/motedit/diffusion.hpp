#pragma once

#include <functional>
#include <optional>
#include <string>

#include "motedit/features.hpp"
#include "motedit/schedule.hpp"

namespace motedit {

struct GuidanceScales {
  double text = 2.0;    // s_L
  double source = 2.0;  // s_MS

  void validate() const {
    if (!std::isfinite(text) || !std::isfinite(source) || text < 0 || source < 0) {
      throw InvalidConfigError("guidance scales must be finite and >= 0");
    }
  }
};

// Which conditions a training draw nulls out. The four events are mutually
// exclusive: drop source only 5%, drop text only 5%, drop both 5%, keep 85%.
enum class ConditionDropout { kKeepAll, kDropSource, kDropText, kDropBoth };

ConditionDropout draw_condition_dropout(Rng& rng);

// A training/sampling condition pair with its drop flags.
struct ConditionSet {
  std::optional<std::string> text;
  const FeatureSequence* source = nullptr;  // normalized features or null
  bool drop_text = false;
  bool drop_source = false;

  bool use_text() const { return text.has_value() && !drop_text; }
  bool use_source() const { return source != nullptr && !drop_source; }
  void validate() const {
    if (drop_text && !text.has_value()) {
      throw InvalidConfigError("condition set: drop_text without a text condition");
    }
    if (drop_source && source == nullptr) {
      throw InvalidConfigError("condition set: drop_source without a source condition");
    }
  }
};

// Denoiser interface in the normalized feature domain. Null text/source mean
// the learned null condition, not zeros.
class X0Model {
 public:
  virtual ~X0Model() = default;
  virtual MatX predict_x0(const MatX& x_t, int t, const std::string* text,
                          const MatX* source) const = 0;
};

// Forward diffusion: sqrt(alpha_bar[t]) x0 + sqrt(1 - alpha_bar[t]) eps.
MatX q_sample(const MatX& x0, int t, const MatX& eps, const NoiseSchedule& sched);

// One denoiser evaluation under explicit condition flags.
using GuidedPassFn = std::function<MatX(bool with_source, bool with_text)>;

// Two-way classifier-free guidance over x0 predictions. Runs exactly three
// passes -- (0,0), (S,0), (S,L) -- and combines them as
//   (1 - s_MS) e00 + (s_MS - s_L) eS0 + s_L eSL,
// which telescopes exactly (bitwise) to the fully conditioned pass at (1,1)
// and to the unconditional pass at (0,0).
MatX guided_x0(const GuidedPassFn& pass, const GuidanceScales& scales);

MatX guided_x0(const X0Model& denoiser, const MatX& x_t, int t,
               const MatX* source, const std::string* text,
               const GuidanceScales& scales);

// Posterior step; adds sigma_t * z for t > 1 and is deterministic at t = 1.
MatX ddpm_reverse_step(const MatX& x_t, const MatX& x0_pred, int t,
                       const NoiseSchedule& sched, Rng& rng);

// Scalar training loss (no gradients; the trainer has its own graph path).
// Features must be normalized; dropout is drawn once per call.
struct TrainingExample {
  FeatureSequence target;  // normalized
  FeatureSequence source;  // normalized
  std::string text;
};

double training_loss(const X0Model& denoiser, const TrainingExample& ex, int t,
                     const MatX& eps, Rng& dropout_rng,
                     const NoiseSchedule& sched);

struct SampleOptions {
  int target_length = 0;
  std::uint64_t seed = 0;
  // When false, the source is still available for initialization/inpainting
  // but is never fed to the denoiser as a condition (text-only baselines).
  bool condition_on_source = true;
  // When set, the reverse chain starts from q_sample(source, N) instead of
  // pure noise (the source-initialized baselines).
  bool init_from_source = false;
  // When set, dims where mask[d] == false are overwritten from
  // q_sample(source, t) at every step and from the source exactly at the end
  // (inpainting-style editing). Requires a source.
  const std::vector<bool>* editable_dims = nullptr;
};

// Full reverse loop; `source` and the returned features are unnormalized.
// Deterministic given the seed.
FeatureSequence sample(const X0Model& denoiser, const FeatureSequence* source,
                       const std::optional<std::string>& text,
                       const GuidanceScales& scales, const SampleOptions& opts,
                       const NoiseSchedule& sched, const FeatureStats& stats);

}  // namespace motedit
