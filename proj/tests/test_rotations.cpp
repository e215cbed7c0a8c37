#include <doctest.h>

#include "motedit/rotations.hpp"

using namespace motedit;

TEST_CASE("rotmat_to_6d takes the first two columns, column-major") {
  const Vec6 id = rotmat_to_6d(Mat3::Identity());
  CHECK(id.isApprox((Vec6() << 1, 0, 0, 0, 1, 0).finished(), 1e-15));

  // 90 degrees about z: columns (0,1,0), (-1,0,0).
  const Vec6 z90 = rotmat_to_6d(rot_z(M_PI / 2.0));
  CHECK((z90 - (Vec6() << 0, 1, 0, -1, 0, 0).finished()).norm() < 1e-12);

  // 180 degrees about x.
  const Vec6 x180 = rotmat_to_6d(rot_x(M_PI));
  CHECK((x180 - (Vec6() << 1, 0, 0, 0, -1, 0).finished()).norm() < 1e-12);
}

TEST_CASE("sixd_to_rotmat reconstructs via Gram-Schmidt") {
  CHECK(sixd_to_rotmat((Vec6() << 1, 0, 0, 0, 1, 0).finished())
            .isApprox(Mat3::Identity(), 1e-15));
  // Scaling is removed by normalization.
  CHECK(sixd_to_rotmat((Vec6() << 2, 0, 0, 0, 3, 0).finished())
            .isApprox(Mat3::Identity(), 1e-15));
  // Hand-computed case: b1=(0,0,1), b2=(0,1,0), b3=b1 x b2=(-1,0,0).
  const Mat3 r = sixd_to_rotmat((Vec6() << 0, 0, 2, 0, 1, 0).finished());
  Mat3 expect;
  expect << 0, 0, -1, 0, 1, 0, 1, 0, 0;
  CHECK((r - expect).norm() < 1e-15);

  SUBCASE("degenerate inputs throw") {
    CHECK_THROWS_AS(sixd_to_rotmat((Vec6() << 0, 0, 0, 0, 1, 0).finished()),
                    DegenerateSixDError);
    CHECK_THROWS_AS(sixd_to_rotmat((Vec6() << 1, 0, 0, 2, 0, 0).finished()),
                    DegenerateSixDError);
  }
}

TEST_CASE("6d round trip over 10k random rotations to 1e-9") {
  Rng rng(7);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const Mat3 r = random_rotation(rng);
    const Mat3 back = sixd_to_rotmat(rotmat_to_6d(r));
    worst = std::max(worst, (back - r).norm());
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("factor_z_rotation splits heading from tilt") {
  SUBCASE("pure heading rotation") {
    const ZFactorization z = factor_z_rotation(rot_z(M_PI / 2.0));
    CHECK(z.theta_z == doctest::Approx(M_PI / 2.0));
    CHECK(z.r_xy.isApprox(Mat3::Identity(), 1e-12));
    CHECK_FALSE(z.degenerate);
  }
  SUBCASE("identity") {
    const ZFactorization z = factor_z_rotation(Mat3::Identity());
    CHECK(z.theta_z == 0.0);
    CHECK(z.r_xy.isApprox(Mat3::Identity(), 1e-15));
  }
  SUBCASE("composite Rz(30) * Rx(45)") {
    const Mat3 r = rot_z(M_PI / 6.0) * rot_x(M_PI / 4.0);
    const ZFactorization z = factor_z_rotation(r);
    CHECK(z.theta_z == doctest::Approx(M_PI / 6.0));
    CHECK((z.r_xy - rot_x(M_PI / 4.0)).norm() < 1e-12);
    // Recomposition oracle.
    CHECK((rot_z(z.theta_z) * z.r_xy - r).norm() < 1e-12);
  }
  SUBCASE("gimbal-degenerate orientation is flagged with zero heading") {
    // Rx(90) maps the forward axis onto gravity.
    const ZFactorization z = factor_z_rotation(rot_x(M_PI / 2.0));
    CHECK(z.degenerate);
    CHECK(z.theta_z == 0.0);
  }
}

TEST_CASE("factor_z recomposition holds to 1e-9 over 10k random rotations") {
  Rng rng(11);
  double worst = 0.0;
  int degenerate = 0;
  for (int i = 0; i < 10000; ++i) {
    const Mat3 r = random_rotation(rng);
    const ZFactorization z = factor_z_rotation(r);
    if (z.degenerate) {
      ++degenerate;
      continue;
    }
    worst = std::max(worst, (rot_z(z.theta_z) * z.r_xy - r).norm());
    CHECK(z.theta_z > -M_PI);
    CHECK(z.theta_z <= M_PI);
    // Zero heading of the residual: forward axis has no x component.
    CHECK(std::abs(z.r_xy(0, 1)) < 1e-9);
    CHECK(z.r_xy(1, 1) >= 0.0);
  }
  CHECK(worst < 1e-9);
  CHECK(degenerate == 0);  // random rotations land exactly on the pole with probability 0
}

TEST_CASE("rotation_slerp endpoints and midpoint") {
  Rng rng(3);
  const Mat3 a = random_rotation(rng);
  const Mat3 b = random_rotation(rng);
  CHECK((rotation_slerp(a, b, 0.0) - a).norm() < 1e-12);
  CHECK((rotation_slerp(a, b, 1.0) - b).norm() < 1e-12);
  const Mat3 mid = rotation_slerp(a, b, 0.5);
  CHECK(rotation_geodesic(a, mid) ==
        doctest::Approx(rotation_geodesic(mid, b)).epsilon(1e-9));
}
