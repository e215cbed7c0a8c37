#pragma once

#include <vector>

#include "motedit/rotations.hpp"
#include "motedit/skeleton.hpp"

namespace motedit {

// Canonical in-memory motion: root trajectory plus per-frame body pose.
struct Motion {
  double fps = 20.0;
  std::vector<Vec3> root_trans;               // F x 3, meters
  std::vector<Mat3> root_orient;              // F rotations
  std::vector<std::vector<Mat3>> body_pose;   // F x 21 rotations

  int frames() const { return static_cast<int>(root_trans.size()); }
  double duration() const { return frames() / fps; }
  void validate() const;

  std::array<Vec3, kNumJoints> joints(int frame, const Skeleton& skel) const;
};

// True when frame 0 sits at the origin with zero heading (to tolerance).
bool is_canonical(const Motion& m, double tol = 1e-5);

// Rigid transform placing frame 0 at the origin facing +y. Bitwise identity
// on inputs that are already exactly canonical.
Motion canonicalize(const Motion& m);

// Apply a global rigid transform: root_orient <- R * root_orient,
// root_trans <- R * root_trans + t.
Motion apply_rigid(const Motion& m, const Mat3& r, const Vec3& t);

// Extract frames [start, end).
Motion crop(const Motion& m, int start, int end);

// Resample to new_frames via linear interpolation of translation and slerp of
// rotations; frame i samples source time i*(F-1)/(new_frames-1).
Motion resample(const Motion& m, int new_frames);

// Static rest pose (identity rotations) with the given frame count.
Motion rest_motion(int frames, double fps = 20.0);

}  // namespace motedit
