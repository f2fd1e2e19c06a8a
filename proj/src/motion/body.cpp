// SPDX-FileCopyrightText: 2026 occu authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <limits>

#include "occu/motion.hpp"

namespace occu {

double Capsule::distance_to_axis(const Vec3& p) const
{
    const Vec3 ab = b - a;
    const double len2 = ab.squaredNorm();
    double t = 0.0;
    if (len2 > 0.0) t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return (p - (a + t * ab)).norm();
}

double Capsule::volume() const
{
    const double len = (b - a).norm();
    return kPi * radius * radius * len + 4.0 / 3.0 * kPi * radius * radius * radius;
}

bool CapsuleBody::contains(const Vec3& p) const
{
    return std::any_of(capsules.begin(), capsules.end(), [&](const Capsule& c) { return c.contains(p); });
}

std::pair<Vec3, Vec3> CapsuleBody::bounds() const
{
    Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
    Vec3 hi = -lo;
    for (const auto& c : capsules) {
        const Vec3 r = Vec3::Constant(c.radius);
        lo = lo.cwiseMin(c.a - r).cwiseMin(c.b - r);
        hi = hi.cwiseMax(c.a + r).cwiseMax(c.b + r);
    }
    return {lo, hi};
}

CapsuleBody body_geometry(const std::vector<Vec3>& joints, const Skeleton& skeleton)
{
    CapsuleBody body;
    body.capsules.reserve(skeleton.joint_count() - 1);
    for (int i = 1; i < skeleton.joint_count(); ++i)
        body.capsules.push_back({joints[skeleton.parent(i)], joints[i], skeleton.radius(i)});
    return body;
}

CapsuleBody body_geometry(const Pose& pose, const Skeleton& skeleton)
{
    return body_geometry(forward_kinematics(pose, skeleton), skeleton);
}

bool point_in_body(const Vec3& point, const CapsuleBody& body) { return body.contains(point); }

void sample_capsule_surface(const Capsule& c, double spacing, std::vector<Vec3>& out)
{
    const Vec3 axis_vec = c.b - c.a;
    const double len = axis_vec.norm();
    const Vec3 axis = len > 1e-12 ? Vec3(axis_vec / len) : Vec3::UnitZ();
    // Any unit vector not parallel to the axis seeds the ring basis.
    const Vec3 seed = std::abs(axis.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
    const Vec3 u = axis.cross(seed).normalized();
    const Vec3 v = axis.cross(u);
    const double r = c.radius;

    const auto ring = [&](const Vec3& center, double ring_radius) {
        const int n = std::max(4, static_cast<int>(std::ceil(2.0 * kPi * ring_radius / spacing)));
        for (int k = 0; k < n; ++k) {
            const double phi = 2.0 * kPi * k / n;
            out.push_back(center + ring_radius * (std::cos(phi) * u + std::sin(phi) * v));
        }
    };

    const int n_axial = std::max(1, static_cast<int>(std::ceil(len / spacing)));
    for (int i = 0; i <= n_axial; ++i) ring(c.a + axis_vec * (static_cast<double>(i) / n_axial), r);

    const int n_lat = std::max(1, static_cast<int>(std::ceil(0.5 * kPi * r / spacing)));
    for (int i = 1; i <= n_lat; ++i) {
        const double theta = 0.5 * kPi * i / n_lat;
        const double ring_r = r * std::cos(theta);
        const double h = r * std::sin(theta);
        if (i == n_lat) {
            out.push_back(c.b + h * axis);
            out.push_back(c.a - h * axis);
            continue;
        }
        ring(c.b + h * axis, ring_r);
        ring(c.a - h * axis, ring_r);
    }
}

std::vector<Vec3> body_samples(const std::vector<Vec3>& joints, const CapsuleBody& body, double spacing)
{
    std::vector<Vec3> out(joints.begin(), joints.end());
    for (const auto& c : body.capsules) sample_capsule_surface(c, spacing, out);
    return out;
}

}  // namespace occu
