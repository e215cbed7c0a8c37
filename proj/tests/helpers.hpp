#pragma once

#include "motedit/features.hpp"
#include "motedit/io.hpp"
#include "motedit/motion.hpp"

namespace motedit::testutil {

// Random smooth-ish valid motion; canonical when requested.
inline Motion random_motion(Rng& rng, int frames, bool canonical = true,
                            double fps = 20.0) {
  Motion m;
  m.fps = fps;
  m.root_trans.resize(frames);
  m.root_orient.resize(frames);
  m.body_pose.resize(frames);

  // Random per-joint axes and rates keep consecutive frames correlated.
  std::vector<Vec3> axes(kNumBodyJoints);
  std::vector<double> rates(kNumBodyJoints), phases(kNumBodyJoints), amps(kNumBodyJoints);
  for (int j = 0; j < kNumBodyJoints; ++j) {
    axes[j] = Vec3(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
    if (axes[j].norm() < 1e-3) axes[j] = Vec3::UnitX();
    rates[j] = rng.uniform(0.2, 2.0);
    phases[j] = rng.uniform(0, 2 * M_PI);
    amps[j] = rng.uniform(0.1, 0.9);
  }
  const Vec3 vel(rng.uniform(-0.05, 0.05), rng.uniform(-0.05, 0.05),
                 rng.uniform(-0.01, 0.01));
  const double turn_rate = rng.uniform(-0.05, 0.05);
  const double tilt = rng.uniform(-0.3, 0.3);

  for (int t = 0; t < frames; ++t) {
    m.root_trans[t] = vel * t;
    m.root_orient[t] = rot_z(turn_rate * t) * rot_x(tilt * std::sin(0.1 * t));
    m.body_pose[t].resize(kNumBodyJoints);
    for (int j = 0; j < kNumBodyJoints; ++j) {
      m.body_pose[t][j] = axis_angle_to_rotmat(
          axes[j], amps[j] * std::sin(rates[j] * t / fps + phases[j]));
    }
  }
  if (!canonical) {
    m = apply_rigid(m, rot_z(rng.uniform(-M_PI, M_PI)),
                    Vec3(rng.uniform(-3, 3), rng.uniform(-3, 3), 0.0));
  }
  return m;
}

inline double max_joint_error(const Motion& a, const Motion& b,
                              const Skeleton& skel) {
  double worst = 0.0;
  const int frames = std::min(a.frames(), b.frames());
  for (int t = 0; t < frames; ++t) {
    const auto pa = a.joints(t, skel);
    const auto pb = b.joints(t, skel);
    for (int j = 0; j < kNumJoints; ++j) {
      worst = std::max(worst, (pa[j] - pb[j]).norm());
    }
  }
  return worst;
}

}  // namespace motedit::testutil
