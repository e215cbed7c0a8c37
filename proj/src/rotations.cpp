#include "motedit/rotations.hpp"

#include <Eigen/Geometry>

#include "motedit/skeleton.hpp"

namespace motedit {

Mat3 rot_x(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Mat3 r;
  r << 1, 0, 0, 0, c, -s, 0, s, c;
  return r;
}

Mat3 rot_y(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Mat3 r;
  r << c, 0, s, 0, 1, 0, -s, 0, c;
  return r;
}

Mat3 rot_z(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Mat3 r;
  r << c, -s, 0, s, c, 0, 0, 0, 1;
  return r;
}

Mat3 axis_angle_to_rotmat(const Vec3& axis, double angle) {
  const double n = axis.norm();
  if (n < 1e-12) return Mat3::Identity();
  return Eigen::AngleAxisd(angle, axis / n).toRotationMatrix();
}

Vec6 rotmat_to_6d(const Mat3& r) {
  check_rotation(r, "rotmat_to_6d");
  Vec6 v;
  v << r(0, 0), r(1, 0), r(2, 0), r(0, 1), r(1, 1), r(2, 1);
  return v;
}

Mat3 sixd_to_rotmat(const Vec6& v) {
  if (!v.allFinite()) throw DegenerateSixDError("sixd_to_rotmat: non-finite input");
  Vec3 a = v.head<3>();
  Vec3 b = v.tail<3>();
  const double na = a.norm();
  if (na < 1e-8) throw DegenerateSixDError("sixd_to_rotmat: first vector has zero norm");
  a /= na;
  b -= a.dot(b) * a;
  const double nb = b.norm();
  if (nb < 1e-8) {
    throw DegenerateSixDError("sixd_to_rotmat: vectors are parallel");
  }
  b /= nb;
  Mat3 r;
  r.col(0) = a;
  r.col(1) = b;
  r.col(2) = a.cross(b);
  return r;
}

double rotation_geodesic(const Mat3& a, const Mat3& b) {
  const double tr = (a.transpose() * b).trace();
  const double c = std::clamp((tr - 1.0) / 2.0, -1.0, 1.0);
  return std::acos(c);
}

ZFactorization factor_z_rotation(const Mat3& r) {
  check_rotation(r, "factor_z_rotation");
  ZFactorization out;
  // Forward axis of the body is R * +y; its ground-plane projection defines
  // the heading. Rz(theta) * +y = (-sin theta, cos theta, 0).
  const double fx = r(0, 1);
  const double fy = r(1, 1);
  const double planar = std::hypot(fx, fy);
  if (planar < 1e-8) {
    out.degenerate = true;
    out.theta_z = 0.0;
    out.r_xy = r;
    return out;
  }
  out.theta_z = std::atan2(-fx, fy);
  out.r_xy = rot_z(-out.theta_z) * r;
  return out;
}

Mat3 random_rotation(Rng& rng) {
  // Shoemake: uniform unit quaternion from three uniforms.
  const double u1 = rng.uniform(), u2 = rng.uniform(), u3 = rng.uniform();
  const double s1 = std::sqrt(1.0 - u1), s2 = std::sqrt(u1);
  const Eigen::Quaterniond q(s1 * std::sin(2 * M_PI * u2),
                             s1 * std::cos(2 * M_PI * u2),
                             s2 * std::sin(2 * M_PI * u3),
                             s2 * std::cos(2 * M_PI * u3));
  return q.normalized().toRotationMatrix();
}

Mat3 rotation_slerp(const Mat3& a, const Mat3& b, double t) {
  Eigen::Quaterniond qa(a), qb(b);
  return qa.slerp(t, qb).toRotationMatrix();
}

}  // namespace motedit
