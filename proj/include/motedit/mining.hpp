#pragma once

#include <map>
#include <optional>

#include "motedit/embedder.hpp"
#include "motedit/motion.hpp"

namespace motedit {

struct MotionWindow {
  std::string parent_id;
  int start_frame = 0;
  int end_frame = 0;       // exclusive
  double duration = 0.0;   // seconds, in [3, 5]
  VecX embedding;          // unit norm; empty until embedded
};

enum class PairStatus { kPooled, kTooSimilar, kFiltered };

struct CandidatePair {
  int source_window = 0;  // index into the window list; the query side
  int target_window = 0;
  double similarity = 0.0;
  PairStatus status = PairStatus::kPooled;
};

// Sliding windows of the given durations (seconds) over the motion. Motions
// shorter than the minimum duration yield an empty list with a warning.
std::vector<MotionWindow> slide_windows(const Motion& m, const std::string& parent_id,
                                        const std::vector<double>& durations,
                                        double stride_seconds);

Motion extract_window(const Motion& m, const MotionWindow& w);

void embed_windows(std::vector<MotionWindow>& windows,
                   const std::vector<const Motion*>& parents,
                   const std::vector<int>& parent_of_window,
                   const MotionEmbedder& embedder, const Skeleton& skeleton);

// Per query window: neighbors ranked by cosine similarity; similarity >= the
// dedup threshold is recorded too-similar and skipped; overlapping windows of
// the same parent are recorded filtered; the top-k remaining pool. Pairs are
// ordered (query = source).
std::vector<CandidatePair> mine_pairs(const std::vector<MotionWindow>& windows,
                                      int k = 2, double dedup = 0.99);

// Both motions canonicalized: frame-0 translations coincide at the origin and
// frame-0 headings are zero.
std::pair<Motion, Motion> align_pair(const Motion& source, const Motion& target);

// Annotation-pool manifest plus aligned clips. Deterministic record order by
// (source window, similarity descending, target window). Pairs must be
// pooled; a missing clip aborts the export listing every missing window.
void export_pool(const std::vector<CandidatePair>& pairs,
                 const std::vector<MotionWindow>& windows,
                 const std::map<int, Motion>& clips_by_window,
                 const std::string& dir);

}  // namespace motedit
