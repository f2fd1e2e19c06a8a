// SPDX-FileCopyrightText: 2026 occu authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <stdexcept>
#include <string>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace occu {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Continuous rotation parameterization: the first two columns of a rotation
/// matrix, stored column-major as (c0.x, c0.y, c0.z, c1.x, c1.y, c1.z).
using Rot6d = std::array<double, 6>;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidRotation : public Error {
public:
    using Error::Error;
};

class FormatError : public Error {
public:
    using Error::Error;
};

inline constexpr double kPi = 3.14159265358979323846;

inline double deg2rad(double d) { return d * kPi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / kPi; }

/// Wraps an angle into (-pi, pi].
double wrap_angle(double a);

Mat3 rot6d_to_matrix(const Rot6d& r);
Rot6d matrix_to_rot6d(const Mat3& m);
Rot6d identity_rot6d();

Mat3 rot_z(double yaw);
Mat3 axis_angle(const Vec3& axis, double angle);

/// Heading of a rotation's +X axis projected onto the XY plane.
double yaw_of(const Mat3& m);

}  // namespace occu
