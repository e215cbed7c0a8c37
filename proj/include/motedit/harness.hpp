#pragma once

#include "motedit/baselines.hpp"
#include "motedit/eval.hpp"
#include "motedit/training.hpp"

namespace motedit {

// --- pipeline glue -------------------------------------------------------

FeatureStats stats_from_triplets(const std::vector<const EditTriplet*>& triplets,
                                 const Skeleton& skeleton);

// Pre-encoded training items (normalized features, tokenized edit text).
// text_only drops the source condition entirely (MDM training mode).
std::vector<TrainItem> make_train_items(const std::vector<const EditTriplet*>& triplets,
                                        const Skeleton& skeleton,
                                        const FeatureStats& stats,
                                        const TextEncoder& encoder,
                                        bool text_only);

// (features, description) pairs over every source and target motion, for
// embedder training.
std::vector<std::pair<FeatureSequence, std::string>> embedder_pairs_from_triplets(
    const std::vector<const EditTriplet*>& triplets, const Skeleton& skeleton);

// Editing sampler: condition on the encoded source and the edit text;
// generation length equals the ground-truth target length. The per-triplet
// seed derives from `seed` and the triplet id.
TripletSampler make_editing_sampler(const TmedDenoiser& model,
                                    const NoiseSchedule& sched,
                                    const FeatureStats& stats,
                                    const GuidanceScales& scales,
                                    const Skeleton& skeleton, std::uint64_t seed);

// Baseline sampler over a text-only model; the source motion is resampled to
// the target length before feature encoding when lengths differ.
TripletSampler make_baseline_sampler(BaselineKind kind, const TmedDenoiser& model,
                                     const NoiseSchedule& sched,
                                     const FeatureStats& stats,
                                     const GuidanceScales& scales,
                                     const Skeleton& skeleton,
                                     const BodyPartCache* cache,
                                     std::uint64_t seed);

// --- harness operations --------------------------------------------------

struct SweepCell {
  GuidanceScales scales;
  EvalReport report;
};

// One evaluate_editing run per (text, source) scale pair with a fixed
// gallery seed. The sampler factory binds the scales to a model.
std::vector<SweepCell> guidance_sweep(
    const std::function<TripletSampler(const GuidanceScales&)>& sampler_factory,
    const std::vector<const EditTriplet*>& valset, const MotionEmbedder& embedder,
    const EvalOptions& opts, const std::vector<double>& text_grid,
    const std::vector<double>& source_grid);

// Tab-separated plot data: s_text, s_source, R@1 for both benchmarks.
void save_sweep_dsv(const std::string& path, const std::vector<SweepCell>& cells);

struct AblationRun {
  double fraction;
  int train_count;
  EvalReport report;
};

// Seeded nested subsets (10% of the order is a prefix of 50%, and so on);
// the trainer builds and trains a model from scratch per fraction.
using SubsetTrainerFn =
    std::function<TripletSampler(const std::vector<const EditTriplet*>& subset)>;

std::vector<AblationRun> datasize_ablation(
    const SubsetTrainerFn& trainer, const std::vector<const EditTriplet*>& trainset,
    const std::vector<const EditTriplet*>& testset, const MotionEmbedder& embedder,
    const EvalOptions& opts, const std::vector<double>& fractions,
    std::uint64_t seed);

// Nested subset selection used by the ablation (exposed for tests).
std::vector<std::vector<const EditTriplet*>> nested_subsets(
    const std::vector<const EditTriplet*>& trainset,
    const std::vector<double>& fractions, std::uint64_t seed);

}  // namespace motedit
