#include "motedit/motion.hpp"

namespace motedit {

void Motion::validate() const {
  if (frames() < 2) throw InvalidConfigError("motion: needs at least 2 frames");
  if (!(fps > 0.0)) throw InvalidConfigError("motion: fps must be positive");
  const std::size_t f = root_trans.size();
  if (root_orient.size() != f || body_pose.size() != f) {
    throw ShapeError("motion: per-frame array lengths disagree");
  }
  for (std::size_t t = 0; t < f; ++t) {
    if (!root_trans[t].allFinite()) {
      throw InvalidConfigError("motion: non-finite translation at frame " +
                               std::to_string(t));
    }
    check_rotation(root_orient[t], "motion root_orient");
    if (body_pose[t].size() != kNumBodyJoints) {
      throw ShapeError("motion: frame " + std::to_string(t) +
                       " has wrong body pose count");
    }
    for (const Mat3& r : body_pose[t]) check_rotation(r, "motion body_pose");
  }
}

std::array<Vec3, kNumJoints> Motion::joints(int frame,
                                            const Skeleton& skel) const {
  return forward_kinematics(body_pose[frame], root_orient[frame],
                            root_trans[frame], skel);
}

bool is_canonical(const Motion& m, double tol) {
  if (m.frames() == 0) return false;
  if (m.root_trans[0].norm() > tol) return false;
  const ZFactorization z = factor_z_rotation(m.root_orient[0]);
  return z.degenerate || std::abs(z.theta_z) <= tol;
}

Motion canonicalize(const Motion& m) {
  m.validate();
  const Vec3 t0 = m.root_trans[0];
  const ZFactorization z = factor_z_rotation(m.root_orient[0]);
  // Fixed point: residuals below 1e-9 come from a previous canonicalization,
  // so the motion is returned unchanged (idempotence is bitwise).
  if (t0.norm() <= 1e-9 && std::abs(z.theta_z) <= 1e-9) return m;
  const Mat3 r = rot_z(-z.theta_z);
  Motion out = m;
  for (int t = 0; t < m.frames(); ++t) {
    out.root_trans[t] = r * (m.root_trans[t] - t0);
    out.root_orient[t] = r * m.root_orient[t];
  }
  return out;
}

Motion apply_rigid(const Motion& m, const Mat3& r, const Vec3& t) {
  Motion out = m;
  for (int f = 0; f < m.frames(); ++f) {
    out.root_trans[f] = r * m.root_trans[f] + t;
    out.root_orient[f] = r * m.root_orient[f];
  }
  return out;
}

Motion crop(const Motion& m, int start, int end) {
  if (start < 0 || end > m.frames() || end - start < 2) {
    throw InvalidConfigError("crop: invalid frame range");
  }
  Motion out;
  out.fps = m.fps;
  out.root_trans.assign(m.root_trans.begin() + start, m.root_trans.begin() + end);
  out.root_orient.assign(m.root_orient.begin() + start, m.root_orient.begin() + end);
  out.body_pose.assign(m.body_pose.begin() + start, m.body_pose.begin() + end);
  return out;
}

Motion resample(const Motion& m, int new_frames) {
  if (new_frames < 2) throw InvalidConfigError("resample: needs >= 2 frames");
  const int f = m.frames();
  Motion out;
  out.fps = m.fps;
  out.root_trans.resize(new_frames);
  out.root_orient.resize(new_frames);
  out.body_pose.resize(new_frames);
  for (int i = 0; i < new_frames; ++i) {
    const double src = static_cast<double>(i) * (f - 1) / (new_frames - 1);
    const int lo = std::min(static_cast<int>(src), f - 2);
    const double w = src - lo;
    out.root_trans[i] = (1.0 - w) * m.root_trans[lo] + w * m.root_trans[lo + 1];
    out.root_orient[i] = rotation_slerp(m.root_orient[lo], m.root_orient[lo + 1], w);
    out.body_pose[i].resize(kNumBodyJoints);
    for (int j = 0; j < kNumBodyJoints; ++j) {
      out.body_pose[i][j] =
          rotation_slerp(m.body_pose[lo][j], m.body_pose[lo + 1][j], w);
    }
  }
  return out;
}

Motion rest_motion(int frames, double fps) {
  Motion m;
  m.fps = fps;
  m.root_trans.assign(frames, Vec3::Zero());
  m.root_orient.assign(frames, Mat3::Identity());
  m.body_pose.assign(frames, std::vector<Mat3>(kNumBodyJoints, Mat3::Identity()));
  return m;
}

}  // namespace motedit
