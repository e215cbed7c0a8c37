#pragma once

#include "motedit/bodyparts.hpp"
#include "motedit/diffusion.hpp"

namespace motedit {

// The text-to-motion editing baselines. All four repurpose a text-only
// denoiser at sampling time; none conditions on the source motion.
//   kMdm    plain text-conditioned sampling, source ignored
//   kMdmS   reverse chain initialized at q_sample(source, N)
//   kMdmBp  body-part inpainting from noise
//   kMdmBpS body-part inpainting initialized from the noised source
enum class BaselineKind { kMdm, kMdmS, kMdmBp, kMdmBpS };

std::string to_string(BaselineKind k);
BaselineKind baseline_from_string(const std::string& s);  // MDM | MDM_S | MDM-BP | MDM-BP_S

struct BaselineRequest {
  // Unnormalized source features; required for every kind except kMdm, with
  // frames == target_length.
  const FeatureSequence* source = nullptr;
  std::string text;
  GuidanceScales scales;
  int target_length = 0;
  std::uint64_t seed = 0;
  // Editable dims for the BP kinds; computed from body_parts_for_edit when
  // absent (using `cache` if provided).
  const std::vector<bool>* editable_dims = nullptr;
  const BodyPartCache* cache = nullptr;
  const Skeleton* skeleton = nullptr;
};

FeatureSequence sample_baseline(BaselineKind kind, const X0Model& text_only_model,
                                const BaselineRequest& req,
                                const NoiseSchedule& sched,
                                const FeatureStats& stats);

}  // namespace motedit
