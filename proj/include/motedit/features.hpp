#pragma once

#include <vector>

#include "motedit/motion.hpp"

namespace motedit {

// Per-frame feature layout (207 columns):
//   [0,3)     root-translation deltas between consecutive frames
//   [3,9)     6D code of the z-rotation-free root orientation R_xy
//   [9,15)    6D code of the per-frame heading delta Rz(dtheta)
//   [15,141)  21 x 6D body-pose rotations
//   [141,207) 22 x 3 local joint positions, heading removed, pelvis
//             horizontal position subtracted
inline constexpr int kFeatureDim = 207;
inline constexpr int kTransDeltaOffset = 0;
inline constexpr int kOrientXyOffset = 3;
inline constexpr int kOrientZDeltaOffset = 9;
inline constexpr int kBodyPoseOffset = 15;
inline constexpr int kJointPosOffset = 141;

struct FeatureSequence {
  MatX data;  // F x 207
  bool normalized = false;

  int frames() const { return static_cast<int>(data.rows()); }
  void check_shape() const {
    if (data.cols() != kFeatureDim) {
      throw ShapeError("feature sequence must have 207 columns, got " +
                       std::to_string(data.cols()));
    }
  }
};

struct FeatureStats {
  VecX mean;                        // 207
  VecX std;                         // 207, floored at kStdFloor
  std::int64_t count = 0;           // training frames
  std::vector<bool> constant_dims;  // true where std hit the floor
  static constexpr double kStdFloor = 1e-6;
};

FeatureSequence encode(const Motion& m, const Skeleton& skeleton);

// Reconstructs from rotation/translation dims only; joint-position dims are
// auxiliary supervision and are ignored.
Motion decode(const FeatureSequence& f, const Skeleton& skeleton,
              double fps = 20.0);

FeatureStats compute_stats(const std::vector<FeatureSequence>& dataset);
FeatureSequence normalize(const FeatureSequence& f, const FeatureStats& stats);
FeatureSequence denormalize(const FeatureSequence& f, const FeatureStats& stats);

}  // namespace motedit
