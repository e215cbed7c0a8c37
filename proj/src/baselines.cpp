#include "motedit/baselines.hpp"

namespace motedit {

std::string to_string(BaselineKind k) {
  switch (k) {
    case BaselineKind::kMdm: return "MDM";
    case BaselineKind::kMdmS: return "MDM_S";
    case BaselineKind::kMdmBp: return "MDM-BP";
    case BaselineKind::kMdmBpS: return "MDM-BP_S";
  }
  throw InvalidConfigError("unknown baseline kind");
}

BaselineKind baseline_from_string(const std::string& s) {
  if (s == "MDM" || s == "mdm") return BaselineKind::kMdm;
  if (s == "MDM_S" || s == "mdm_s") return BaselineKind::kMdmS;
  if (s == "MDM-BP" || s == "mdm-bp") return BaselineKind::kMdmBp;
  if (s == "MDM-BP_S" || s == "mdm-bp_s") return BaselineKind::kMdmBpS;
  throw InvalidConfigError("unknown baseline kind '" + s + "'");
}

FeatureSequence sample_baseline(BaselineKind kind, const X0Model& text_only_model,
                                const BaselineRequest& req,
                                const NoiseSchedule& sched,
                                const FeatureStats& stats) {
  const bool needs_source = kind != BaselineKind::kMdm;
  if (needs_source && req.source == nullptr) {
    throw InvalidConfigError("sample_baseline: " + to_string(kind) +
                             " requires a source motion");
  }
  const bool masked =
      kind == BaselineKind::kMdmBp || kind == BaselineKind::kMdmBpS;

  std::vector<bool> mask_storage;
  const std::vector<bool>* mask = nullptr;
  if (masked) {
    if (req.editable_dims != nullptr) {
      mask = req.editable_dims;
    } else {
      if (req.skeleton == nullptr) {
        throw InvalidConfigError("sample_baseline: BP kinds need a skeleton "
                                 "to derive the feature mask");
      }
      const BodyPartSet parts = body_parts_for_edit(req.text, req.cache);
      mask_storage = part_mask(parts.parts, *req.skeleton);
      mask = &mask_storage;
    }
  }

  SampleOptions opts;
  opts.target_length = req.target_length;
  opts.seed = req.seed;
  opts.condition_on_source = false;  // the model was trained on text alone
  opts.init_from_source =
      kind == BaselineKind::kMdmS || kind == BaselineKind::kMdmBpS;
  opts.editable_dims = mask;

  const FeatureSequence* source = needs_source ? req.source : nullptr;
  return sample(text_only_model, source, req.text, req.scales, opts, sched, stats);
}

}  // namespace motedit
