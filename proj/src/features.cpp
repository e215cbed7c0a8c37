#include "motedit/features.hpp"

namespace motedit {

namespace {

void put6(MatX& data, int row, int col, const Vec6& v) {
  data.block<1, 6>(row, col) = v.transpose();
}

Vec6 get6(const MatX& data, int row, int col) {
  return data.block<1, 6>(row, col).transpose();
}

}  // namespace

FeatureSequence encode(const Motion& m, const Skeleton& skeleton) {
  m.validate();
  if (!is_canonical(m)) {
    throw MustCanonicalizeError("encode: motion must be canonicalized first");
  }
  const int f = m.frames();
  FeatureSequence out;
  out.data.setZero(f, kFeatureDim);

  std::vector<double> theta(f);
  for (int t = 0; t < f; ++t) {
    const ZFactorization z = factor_z_rotation(m.root_orient[t]);
    theta[t] = z.theta_z;

    if (t == 0) {
      out.data.block<1, 3>(t, kTransDeltaOffset).setZero();
      put6(out.data, t, kOrientZDeltaOffset, rotmat_to_6d(Mat3::Identity()));
    } else {
      out.data.block<1, 3>(t, kTransDeltaOffset) =
          (m.root_trans[t] - m.root_trans[t - 1]).transpose();
      put6(out.data, t, kOrientZDeltaOffset,
           rotmat_to_6d(rot_z(theta[t] - theta[t - 1])));
    }
    put6(out.data, t, kOrientXyOffset, rotmat_to_6d(z.r_xy));

    for (int j = 0; j < kNumBodyJoints; ++j) {
      put6(out.data, t, kBodyPoseOffset + 6 * j, rotmat_to_6d(m.body_pose[t][j]));
    }

    // Local joints: FK with heading removed and pelvis horizontal position
    // subtracted, i.e. root at (0, 0, z) with orientation R_xy.
    const Vec3 local_root(0.0, 0.0, m.root_trans[t].z());
    const auto joints =
        forward_kinematics(m.body_pose[t], z.r_xy, local_root, skeleton);
    for (int j = 0; j < kNumJoints; ++j) {
      out.data.block<1, 3>(t, kJointPosOffset + 3 * j) = joints[j].transpose();
    }
  }
  out.normalized = false;
  return out;
}

Motion decode(const FeatureSequence& f, const Skeleton& skeleton, double fps) {
  f.check_shape();
  if (f.normalized) {
    throw MustNormalizeError("decode: features must be denormalized first");
  }
  const int frames = f.frames();
  if (frames < 2) throw InvalidConfigError("decode: needs at least 2 frames");

  Motion m;
  m.fps = fps;
  m.root_trans.resize(frames);
  m.root_orient.resize(frames);
  m.body_pose.resize(frames);

  Vec3 trans = Vec3::Zero();
  double heading = 0.0;
  for (int t = 0; t < frames; ++t) {
    if (t > 0) {
      trans += f.data.block<1, 3>(t, kTransDeltaOffset).transpose();
      Mat3 dz;
      try {
        dz = sixd_to_rotmat(get6(f.data, t, kOrientZDeltaOffset));
      } catch (const DegenerateSixDError&) {
        throw DegenerateSixDError("decode: degenerate heading-delta 6D at frame " +
                                  std::to_string(t));
      }
      heading += std::atan2(dz(1, 0), dz(0, 0));
    }
    m.root_trans[t] = trans;

    Mat3 rxy;
    try {
      rxy = sixd_to_rotmat(get6(f.data, t, kOrientXyOffset));
    } catch (const DegenerateSixDError&) {
      throw DegenerateSixDError("decode: degenerate orientation 6D at frame " +
                                std::to_string(t));
    }
    m.root_orient[t] = rot_z(heading) * rxy;

    m.body_pose[t].resize(kNumBodyJoints);
    for (int j = 0; j < kNumBodyJoints; ++j) {
      try {
        m.body_pose[t][j] = sixd_to_rotmat(get6(f.data, t, kBodyPoseOffset + 6 * j));
      } catch (const DegenerateSixDError&) {
        throw DegenerateSixDError("decode: degenerate body-pose 6D at frame " +
                                  std::to_string(t) + ", joint " +
                                  std::to_string(j + 1));
      }
    }
  }
  (void)skeleton;  // joint-position dims [141,207) are not used to reconstruct
  return m;
}

FeatureStats compute_stats(const std::vector<FeatureSequence>& dataset) {
  if (dataset.empty()) {
    throw InvalidConfigError("compute_stats: empty dataset");
  }
  std::int64_t n = 0;
  VecX sum = VecX::Zero(kFeatureDim);
  VecX sumsq = VecX::Zero(kFeatureDim);
  for (const FeatureSequence& f : dataset) {
    f.check_shape();
    if (f.normalized) {
      throw MustNormalizeError("compute_stats: expects unnormalized features");
    }
    n += f.frames();
    sum += f.data.colwise().sum().transpose();
    sumsq += f.data.array().square().colwise().sum().matrix().transpose();
  }
  FeatureStats s;
  s.count = n;
  s.mean = sum / static_cast<double>(n);
  VecX var = sumsq / static_cast<double>(n) - s.mean.array().square().matrix();
  s.std.resize(kFeatureDim);
  s.constant_dims.assign(kFeatureDim, false);
  for (int d = 0; d < kFeatureDim; ++d) {
    const double sd = std::sqrt(std::max(var[d], 0.0));
    if (sd < FeatureStats::kStdFloor) {
      s.std[d] = FeatureStats::kStdFloor;
      s.constant_dims[d] = true;
    } else {
      s.std[d] = sd;
    }
  }
  return s;
}

FeatureSequence normalize(const FeatureSequence& f, const FeatureStats& stats) {
  f.check_shape();
  if (f.normalized) {
    throw MustNormalizeError("normalize: features already normalized");
  }
  FeatureSequence out;
  out.data = (f.data.rowwise() - stats.mean.transpose()).array().rowwise() /
             stats.std.transpose().array();
  out.normalized = true;
  return out;
}

FeatureSequence denormalize(const FeatureSequence& f, const FeatureStats& stats) {
  f.check_shape();
  if (!f.normalized) {
    throw MustNormalizeError("denormalize: features are not normalized");
  }
  FeatureSequence out;
  out.data = (f.data.array().rowwise() * stats.std.transpose().array()).matrix();
  out.data.rowwise() += stats.mean.transpose();
  out.normalized = false;
  return out;
}

}  // namespace motedit
