// SPDX-FileCopyrightText: 2026 occu authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>

#include "occu/controller.hpp"

namespace occu {

void WindowConfig::validate() const
{
    if (history < 1 || future < 1) throw Error("window: history and future must be >= 1");
    if (!(rate > 0.0) || !std::isfinite(rate)) throw Error("window: rate must be positive");
}

namespace {

LimbPoints limbs(const std::vector<Vec3>& joints, const Skeleton& sk)
{
    LimbPoints out;
    for (std::size_t i = 1; i < kEndEffectors.size(); ++i) out[i - 1] = joints[sk.landmark(kEndEffectors[i])];
    return out;
}

}  // namespace

PoseState encode_pose_state(const MotionSequence& seq, std::size_t t)
{
    if (t >= seq.size()) throw Error("encode_pose_state: frame out of range");
    const auto& sk = seq.skeleton();
    const auto& pose = seq.frames()[t];
    const auto frame = canonical_frame(pose, sk);
    const auto vel = finite_velocities(seq)[t];

    PoseState x;
    x.root_position = frame.to_canonical_point(pose.root_position);
    x.root_orientation = matrix_to_rot6d(frame.to_canonical_rotation(rot6d_to_matrix(pose.root_orientation)));
    x.joint_positions = forward_kinematics(pose, sk);
    canonicalize(x.joint_positions, ValueKind::Point, frame);
    x.joint_rotations = pose.joint_rotations;
    x.root_velocity = frame.to_canonical_direction(vel.root);
    x.joint_velocities = vel.joints;
    canonicalize(x.joint_velocities, ValueKind::Direction, frame);
    x.yaw_rate = vel.yaw_rate;
    x.foot_contact = pose.foot_contact;
    return x;
}

HistoryState encode_history(const MotionSequence& seq, std::size_t t, int w)
{
    if (w < 1) throw Error("encode_history: window must be >= 1");
    if (t >= seq.size()) throw Error("encode_history: frame out of range");
    const auto& sk = seq.skeleton();
    const auto frame = canonical_frame(seq.frames()[t], sk);
    const auto vel = finite_velocities(seq);

    HistoryState h;
    for (long k = static_cast<long>(t) - w; k <= static_cast<long>(t); ++k) {
        const auto i = static_cast<std::size_t>(std::max(0L, k));
        const auto& pose = seq.frames()[i];
        const auto joints = forward_kinematics(pose, sk);
        h.root_positions.push_back(frame.to_canonical_point(pose.root_position));
        auto l = limbs(joints, sk);
        canonicalize(l, ValueKind::Point, frame);
        h.limb_positions.push_back(l);
        h.root_orientations.push_back(
            matrix_to_rot6d(frame.to_canonical_rotation(rot6d_to_matrix(pose.root_orientation))));
        h.root_velocities.push_back(frame.to_canonical_direction(vel[i].root));
        auto jv = vel[i].joints;
        canonicalize(jv, ValueKind::Direction, frame);
        h.joint_velocities.push_back(std::move(jv));
        h.yaw_rates.push_back(vel[i].yaw_rate);
    }
    return h;
}

TargetPoints target_points(const Pose& pose, const Skeleton& skeleton)
{
    const auto joints = forward_kinematics(pose, skeleton);
    TargetPoints out;
    for (std::size_t i = 0; i < kEndEffectors.size(); ++i) out[i] = joints[skeleton.landmark(kEndEffectors[i])];
    return out;
}

TargetPoints encode_target(const TargetPoints& world, const CanonicalFrame& frame)
{
    TargetPoints out;
    for (std::size_t i = 0; i < out.size(); ++i)
        if (world[i]) out[i] = frame.to_canonical_point(*world[i]);
    return out;
}

TargetPoints decode_target(const TargetPoints& canonical, const CanonicalFrame& frame)
{
    TargetPoints out;
    for (std::size_t i = 0; i < out.size(); ++i)
        if (canonical[i]) out[i] = frame.to_world_point(*canonical[i]);
    return out;
}

std::optional<double> target_facing(const TargetPoints& p)
{
    // Slots: 0 root, 1 left hand, 2 right hand, 3 left foot, 4 right foot.
    for (std::size_t i = 1; i < 5; ++i)
        if (!p[i]) return std::nullopt;
    const Vec3 right = (*p[2] - *p[1]) + (*p[4] - *p[3]);
    if (std::hypot(right.x(), right.y()) < 1e-6) return std::nullopt;
    return std::atan2(right.x(), -right.y());
}

}  // namespace occu
