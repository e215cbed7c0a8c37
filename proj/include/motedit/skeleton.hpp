#pragma once

#include <array>
#include <string>
#include <vector>

#include "motedit/common.hpp"

namespace motedit {

inline constexpr int kNumJoints = 22;
inline constexpr int kNumBodyJoints = 21;  // rotated non-root joints

enum JointId : int {
  kPelvis = 0,
  kLeftHip,
  kRightHip,
  kSpine1,
  kLeftKnee,
  kRightKnee,
  kSpine2,
  kLeftAnkle,
  kRightAnkle,
  kSpine3,
  kLeftFoot,
  kRightFoot,
  kNeck,
  kLeftCollar,
  kRightCollar,
  kHead,
  kLeftShoulder,
  kRightShoulder,
  kLeftElbow,
  kRightElbow,
  kLeftWrist,
  kRightWrist,
};

// 22-joint kinematic tree. Joint order is frozen; the 207-dim feature layout
// indexes by it.
struct Skeleton {
  std::array<std::string, kNumJoints> joint_names;
  std::array<int, kNumJoints> parent_index;  // -1 for the pelvis root
  std::array<Vec3, kNumJoints> bone_offsets;  // meters, rest offset from parent

  int index_of(const std::string& name) const;
  void validate() const;
};

// Bundled rest skeleton (~1.7 m figure, z-up, facing +y, left side at +x).
Skeleton default_skeleton();

// Plain-text config: one `joint <name> <parent|-> <x> <y> <z>` line per joint.
Skeleton load_skeleton(const std::string& path);
void save_skeleton(const Skeleton& s, const std::string& path);

// Joint positions from pose parameters. `body_pose` holds one rotation per
// non-root joint, indexed by joint id minus one.
std::array<Vec3, kNumJoints> forward_kinematics(
    const std::vector<Mat3>& body_pose, const Mat3& root_orient,
    const Vec3& root_trans, const Skeleton& skeleton);

// det(R) must be within 1e-4 of +1 and R orthonormal to the same tolerance.
void check_rotation(const Mat3& r, const char* what);

}  // namespace motedit
