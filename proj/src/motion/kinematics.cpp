// SPDX-FileCopyrightText: 2026 occu authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "occu/motion.hpp"

namespace occu {

namespace {
constexpr double kDegenerateFacing = 1e-6;
}

std::vector<Mat3> world_rotations(const Pose& pose, const Skeleton& skeleton)
{
    const int n = skeleton.joint_count();
    if (static_cast<int>(pose.joint_rotations.size()) != n)
        throw Error("forward_kinematics: pose joint count does not match skeleton");
    std::vector<Mat3> rot(n);
    rot[0] = rot6d_to_matrix(pose.root_orientation) * rot6d_to_matrix(pose.joint_rotations[0]);
    for (int i = 1; i < n; ++i) rot[i] = rot[skeleton.parent(i)] * rot6d_to_matrix(pose.joint_rotations[i]);
    return rot;
}

std::vector<Vec3> forward_kinematics(const Pose& pose, const Skeleton& skeleton)
{
    const auto rot = world_rotations(pose, skeleton);
    const int n = skeleton.joint_count();
    std::vector<Vec3> pos(n);
    pos[0] = pose.root_position;
    for (int i = 1; i < n; ++i) {
        const int p = skeleton.parent(i);
        pos[i] = pos[p] + rot[p] * skeleton.offset(i);
    }
    return pos;
}

Vec3 CanonicalFrame::to_canonical_point(const Vec3& p) const { return rot_z(-yaw) * (p - origin); }
Vec3 CanonicalFrame::to_world_point(const Vec3& p) const { return rot_z(yaw) * p + origin; }
Vec3 CanonicalFrame::to_canonical_direction(const Vec3& d) const { return rot_z(-yaw) * d; }
Vec3 CanonicalFrame::to_world_direction(const Vec3& d) const { return rot_z(yaw) * d; }
Mat3 CanonicalFrame::to_canonical_rotation(const Mat3& r) const { return rot_z(-yaw) * r; }
Mat3 CanonicalFrame::to_world_rotation(const Mat3& r) const { return rot_z(yaw) * r; }
double CanonicalFrame::to_canonical_yaw(double yaw_world) const { return wrap_angle(yaw_world - yaw); }

double facing_yaw(const std::vector<Vec3>& joints, const Skeleton& skeleton, std::optional<double> previous_yaw)
{
    const auto at = [&](Landmark l) -> const Vec3& { return joints[skeleton.landmark(l)]; };
    Vec3 right = (at(Landmark::RightShoulder) - at(Landmark::LeftShoulder)) +
                 (at(Landmark::RightHip) - at(Landmark::LeftHip));
    right.z() = 0.0;
    const double n = right.norm();
    if (n < kDegenerateFacing) {
        if (previous_yaw) return *previous_yaw;
        throw Error("canonical_frame: facing direction is degenerate and no previous frame is available");
    }
    right /= n;
    // Counterclockwise quarter turn of the right vector in the XY plane.
    const Vec3 forward(-right.y(), right.x(), 0.0);
    return std::atan2(forward.y(), forward.x());
}

CanonicalFrame canonical_frame(const Pose& pose, const Skeleton& skeleton, std::optional<double> previous_yaw)
{
    const auto joints = forward_kinematics(pose, skeleton);
    CanonicalFrame f;
    f.yaw = facing_yaw(joints, skeleton, previous_yaw);
    f.origin = Vec3(pose.root_position.x(), pose.root_position.y(), 0.0);
    return f;
}

void canonicalize(std::span<Vec3> values, ValueKind kind, const CanonicalFrame& frame)
{
    for (auto& v : values)
        v = kind == ValueKind::Point ? frame.to_canonical_point(v) : frame.to_canonical_direction(v);
}

void decanonicalize(std::span<Vec3> values, ValueKind kind, const CanonicalFrame& frame)
{
    for (auto& v : values) v = kind == ValueKind::Point ? frame.to_world_point(v) : frame.to_world_direction(v);
}

std::vector<FrameVelocities> finite_velocities(const MotionSequence& seq)
{
    if (seq.size() < 2) throw Error("finite_velocities: at least 2 frames required");
    const auto& sk = seq.skeleton();
    const double fps = seq.fps();
    std::vector<std::vector<Vec3>> joints;
    std::vector<double> yaws;
    joints.reserve(seq.size());
    std::optional<double> prev;
    for (const auto& pose : seq.frames()) {
        joints.push_back(forward_kinematics(pose, sk));
        prev = facing_yaw(joints.back(), sk, prev);
        yaws.push_back(*prev);
    }
    std::vector<FrameVelocities> out(seq.size());
    for (std::size_t t = 1; t < seq.size(); ++t) {
        auto& v = out[t];
        v.root = (seq.frames()[t].root_position - seq.frames()[t - 1].root_position) * fps;
        v.joints.resize(joints[t].size());
        for (std::size_t j = 0; j < joints[t].size(); ++j) v.joints[j] = (joints[t][j] - joints[t - 1][j]) * fps;
        v.yaw_rate = wrap_angle(yaws[t] - yaws[t - 1]) * fps;
    }
    out[0] = out[1];
    return out;
}

}  // namespace occu
