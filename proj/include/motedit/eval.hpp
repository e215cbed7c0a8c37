#pragma once

#include <functional>

#include "motedit/dataset.hpp"
#include "motedit/embedder.hpp"

namespace motedit {

struct BenchmarkScores {
  double r1 = 0.0;  // percentages
  double r2 = 0.0;
  double r3 = 0.0;
  double avg_rank = 0.0;  // 1-based arithmetic mean
};

struct EvalReport {
  BenchmarkScores to_target;
  BenchmarkScores to_source;
  double fid = 0.0;
  double l2_cm = 0.0;
  std::uint64_t gallery_seed = 0;
  int gallery_size = 0;
  int batches = 0;
  int queries = 0;

  void validate() const;
};

// 1-based rank of every gallery item by descending cosine similarity to the
// query; ties break toward the lower index.
std::vector<int> rank_gallery(const VecX& query, const std::vector<VecX>& gallery);

using TripletSampler = std::function<FeatureSequence(const EditTriplet&)>;

struct EvalOptions {
  int gallery_size = 32;
  std::uint64_t seed = 0;
  // Rank against the whole test set instead of fixed 32-item batches.
  bool full_gallery = false;
  bool compute_l2 = true;
  const Skeleton* skeleton = nullptr;  // required
};

// The editing benchmark: partition the test set into fixed batches by seeded
// shuffle (dropping the final partial batch), generate one motion per
// triplet, and rank the true target (and source) inside each batch. The same
// seed reproduces the same batches for every model.
EvalReport evaluate_editing(const TripletSampler& sampler,
                            const std::vector<const EditTriplet*>& testset,
                            const MotionEmbedder& embedder,
                            const EvalOptions& opts);

// Frechet distance between Gaussian fits of two embedding sets. Singular
// covariances get 1e-6 I regularization; `regularized` reports when.
double fid(const std::vector<VecX>& features_a, const std::vector<VecX>& features_b,
           bool* regularized = nullptr);

// Mean per-joint position error in centimeters; the shorter motion is
// resampled to the longer one by linear interpolation.
double l2_joints(const Motion& gen, const Motion& ref, const Skeleton& skeleton);

// Motion-to-text retrieval over unique-text galleries (the embedder
// self-retrieval check).
double self_retrieval_r1(
    const MotionEmbedder& embedder,
    const std::vector<std::pair<FeatureSequence, std::string>>& pairs,
    int gallery_size, std::uint64_t seed);

void save_report(const std::string& path, const EvalReport& report);
EvalReport load_report(const std::string& path);
std::string format_report_table(const EvalReport& report);

}  // namespace motedit
