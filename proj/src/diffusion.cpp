#include "motedit/diffusion.hpp"

namespace motedit {

namespace {

MatX normal_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  MatX m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = rng.normal();
  return m;
}

void check_t(int t, const NoiseSchedule& sched, int lo) {
  if (t < lo || t > sched.steps) {
    throw InvalidConfigError("timestep " + std::to_string(t) + " outside [" +
                             std::to_string(lo) + ", " + std::to_string(sched.steps) + "]");
  }
}

}  // namespace

ConditionDropout draw_condition_dropout(Rng& rng) {
  const double u = rng.uniform();
  if (u < 0.05) return ConditionDropout::kDropSource;
  if (u < 0.10) return ConditionDropout::kDropText;
  if (u < 0.15) return ConditionDropout::kDropBoth;
  return ConditionDropout::kKeepAll;
}

MatX q_sample(const MatX& x0, int t, const MatX& eps, const NoiseSchedule& sched) {
  check_t(t, sched, 0);
  if (eps.rows() != x0.rows() || eps.cols() != x0.cols()) {
    throw ShapeError("q_sample: eps shape does not match x0");
  }
  const double ab = sched.alpha_bar[t];
  return std::sqrt(ab) * x0 + std::sqrt(1.0 - ab) * eps;
}

MatX guided_x0(const GuidedPassFn& pass, const GuidanceScales& scales) {
  scales.validate();
  const MatX e00 = pass(false, false);
  const MatX es0 = pass(true, false);
  const MatX esl = pass(true, true);
  // Coefficient form of the two-way combination. A pass whose coefficient is
  // exactly 1 while the others are 0 is returned as-is, so the telescoping
  // identities at (1,1), (0,1) and (0,0) hold bitwise.
  const double c00 = 1.0 - scales.source;
  const double cs0 = scales.source - scales.text;
  const double csl = scales.text;
  if (c00 == 0.0 && cs0 == 0.0 && csl == 1.0) return esl;
  if (c00 == 0.0 && cs0 == 1.0 && csl == 0.0) return es0;
  if (c00 == 1.0 && cs0 == 0.0 && csl == 0.0) return e00;
  MatX out = MatX::Zero(esl.rows(), esl.cols());
  if (c00 != 0.0) out += c00 * e00;
  if (cs0 != 0.0) out += cs0 * es0;
  if (csl != 0.0) out += csl * esl;
  return out;
}

MatX guided_x0(const X0Model& denoiser, const MatX& x_t, int t,
               const MatX* source, const std::string* text,
               const GuidanceScales& scales) {
  return guided_x0(
      [&](bool with_source, bool with_text) {
        return denoiser.predict_x0(x_t, t, with_text ? text : nullptr,
                                   with_source ? source : nullptr);
      },
      scales);
}

MatX ddpm_reverse_step(const MatX& x_t, const MatX& x0_pred, int t,
                       const NoiseSchedule& sched, Rng& rng) {
  check_t(t, sched, 1);
  if (x0_pred.rows() != x_t.rows() || x0_pred.cols() != x_t.cols()) {
    throw ShapeError("ddpm_reverse_step: x0 shape does not match x_t");
  }
  // Degenerate step (no noise was added): the reverse step is the identity.
  if (sched.beta[t] <= 0.0 || 1.0 - sched.alpha_bar[t] < 1e-12) return x_t;
  MatX mean = sched.post_coef_x0[t] * x0_pred + sched.post_coef_xt[t] * x_t;
  if (t > 1) {
    mean += std::sqrt(sched.posterior_var[t]) *
            normal_matrix(x_t.rows(), x_t.cols(), rng);
  }
  return mean;
}

double training_loss(const X0Model& denoiser, const TrainingExample& ex, int t,
                     const MatX& eps, Rng& dropout_rng,
                     const NoiseSchedule& sched) {
  if (!ex.target.normalized || !ex.source.normalized) {
    throw MustNormalizeError("training_loss: features must be normalized");
  }
  check_t(t, sched, 1);
  const MatX x_t = q_sample(ex.target.data, t, eps, sched);

  ConditionSet conds;
  conds.text = ex.text;
  conds.source = &ex.source;
  const ConditionDropout drop = draw_condition_dropout(dropout_rng);
  conds.drop_source = drop == ConditionDropout::kDropSource || drop == ConditionDropout::kDropBoth;
  conds.drop_text = drop == ConditionDropout::kDropText || drop == ConditionDropout::kDropBoth;
  conds.validate();

  const MatX pred = denoiser.predict_x0(
      x_t, t, conds.use_text() ? &*conds.text : nullptr,
      conds.use_source() ? &conds.source->data : nullptr);
  if (pred.rows() != ex.target.data.rows() || pred.cols() != ex.target.data.cols()) {
    throw ShapeError("training_loss: denoiser output shape mismatch");
  }
  return (pred - ex.target.data).array().square().mean();
}

FeatureSequence sample(const X0Model& denoiser, const FeatureSequence* source,
                       const std::optional<std::string>& text,
                       const GuidanceScales& scales, const SampleOptions& opts,
                       const NoiseSchedule& sched, const FeatureStats& stats) {
  if (opts.target_length < 2) {
    throw InvalidConfigError("sample: target_length must be >= 2");
  }
  scales.validate();

  std::optional<MatX> source_n;
  if (source != nullptr) {
    if (source->normalized) {
      throw MustNormalizeError("sample: pass unnormalized source features");
    }
    source_n = normalize(*source, stats).data;
  }

  const std::vector<bool>* mask = opts.editable_dims;
  bool any_held = false;
  if (mask != nullptr) {
    if (!source_n.has_value()) {
      throw InvalidConfigError("sample: inpainting mask requires a source");
    }
    if (static_cast<int>(mask->size()) != kFeatureDim) {
      throw ShapeError("sample: editable-dim mask must have 207 entries");
    }
    if (source_n->rows() != opts.target_length) {
      throw ShapeError("sample: inpainting requires source length == target length");
    }
    for (bool editable : *mask) any_held = any_held || !editable;
  }
  if (opts.init_from_source) {
    if (!source_n.has_value()) {
      throw InvalidConfigError("sample: init_from_source requires a source");
    }
    if (source_n->rows() != opts.target_length) {
      throw ShapeError("sample: source init requires source length == target length");
    }
  }

  Rng chain_rng(Rng::derive(opts.seed, 0));
  Rng inpaint_rng(Rng::derive(opts.seed, 1));

  MatX x = normal_matrix(opts.target_length, kFeatureDim, chain_rng);
  if (opts.init_from_source) {
    x = q_sample(*source_n, sched.steps, x, sched);
  }

  const std::string* text_ptr = text.has_value() ? &*text : nullptr;
  for (int t = sched.steps; t >= 1; --t) {
    if (any_held) {
      const MatX noised_src = q_sample(
          *source_n, t, normal_matrix(source_n->rows(), kFeatureDim, inpaint_rng),
          sched);
      for (int d = 0; d < kFeatureDim; ++d) {
        if (!(*mask)[d]) x.col(d) = noised_src.col(d);
      }
    }
    const MatX x0 = guided_x0(
        [&](bool with_source, bool with_text) {
          const bool feed_source =
              with_source && source_n.has_value() && opts.condition_on_source;
          return denoiser.predict_x0(x, t, with_text ? text_ptr : nullptr,
                                     feed_source ? &*source_n : nullptr);
        },
        scales);
    x = ddpm_reverse_step(x, x0, t, sched, chain_rng);
  }

  FeatureSequence out;
  out.data = x;
  out.normalized = true;
  FeatureSequence result = denormalize(out, stats);
  if (any_held) {
    // Held dims carry the source bit-for-bit in the final output.
    for (int d = 0; d < kFeatureDim; ++d) {
      if (!(*mask)[d]) result.data.col(d) = source->data.col(d);
    }
  }
  return result;
}

}  // namespace motedit
