// SPDX-FileCopyrightText: 2026 occu authors
// SPDX-License-Identifier: Apache-2.0

#include "occu/geometry.hpp"

#include <cmath>

namespace occu {

namespace {
constexpr double kDegenerate = 1e-8;
}

double wrap_angle(double a)
{
    a = std::fmod(a, 2.0 * kPi);
    if (a <= -kPi) a += 2.0 * kPi;
    if (a > kPi) a -= 2.0 * kPi;
    return a;
}

Mat3 rot6d_to_matrix(const Rot6d& r)
{
    const Vec3 a1(r[0], r[1], r[2]);
    const Vec3 a2(r[3], r[4], r[5]);
    if (!a1.allFinite() || !a2.allFinite())
        throw InvalidRotation("rot6d: non-finite component");
    const double n1 = a1.norm();
    if (n1 < kDegenerate) throw InvalidRotation("rot6d: first column is zero");
    const Vec3 b1 = a1 / n1;
    const Vec3 ortho = a2 - b1.dot(a2) * b1;
    const double n2 = ortho.norm();
    if (n2 < kDegenerate) throw InvalidRotation("rot6d: columns are parallel or second column is zero");
    const Vec3 b2 = ortho / n2;
    Mat3 m;
    m.col(0) = b1;
    m.col(1) = b2;
    m.col(2) = b1.cross(b2);
    return m;
}

Rot6d matrix_to_rot6d(const Mat3& m)
{
    return {m(0, 0), m(1, 0), m(2, 0), m(0, 1), m(1, 1), m(2, 1)};
}

Rot6d identity_rot6d() { return {1, 0, 0, 0, 1, 0}; }

Mat3 rot_z(double yaw)
{
    const double c = std::cos(yaw);
    const double s = std::sin(yaw);
    Mat3 m;
    m << c, -s, 0, s, c, 0, 0, 0, 1;
    return m;
}

Mat3 axis_angle(const Vec3& axis, double angle)
{
    return Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
}

double yaw_of(const Mat3& m) { return std::atan2(m(1, 0), m(0, 0)); }

}  // namespace occu
