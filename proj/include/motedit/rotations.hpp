#pragma once

#include "motedit/common.hpp"

namespace motedit {

Mat3 rot_x(double angle);
Mat3 rot_y(double angle);
Mat3 rot_z(double angle);
Mat3 axis_angle_to_rotmat(const Vec3& axis, double angle);

// First two columns of R, column-major: (R00,R10,R20, R01,R11,R21).
Vec6 rotmat_to_6d(const Mat3& r);

// Gram-Schmidt reconstruction; third column is the cross product.
// Throws DegenerateSixDError on parallel or zero input vectors.
Mat3 sixd_to_rotmat(const Vec6& v);

// Geodesic distance in radians between two rotations.
double rotation_geodesic(const Mat3& a, const Mat3& b);

struct ZFactorization {
  double theta_z = 0.0;   // heading in (-pi, pi]
  Mat3 r_xy;              // residual tilt with zero heading
  bool degenerate = false;  // body axis parallel to gravity; theta_z forced 0
};

// Decompose R = Rz(theta_z) * R_xy where R_xy's forward axis (R_xy * +y)
// projects onto +y in the ground plane.
ZFactorization factor_z_rotation(const Mat3& r);

// Uniform random rotation (Shoemake quaternion method).
Mat3 random_rotation(Rng& rng);

// Slerp between rotations, t in [0,1], along the geodesic.
Mat3 rotation_slerp(const Mat3& a, const Mat3& b, double t);

}  // namespace motedit
