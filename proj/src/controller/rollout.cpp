// SPDX-FileCopyrightText: 2026 occu authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <deque>

#include "occu/controller.hpp"

namespace occu {

const TargetEvent* active_target(const std::vector<TargetEvent>& schedule, double t)
{
    const TargetEvent* best = nullptr;
    for (const auto& e : schedule)
        if (e.time <= t && (!best || e.time >= best->time)) best = &e;
    return best;
}

std::vector<Vec3> penetration_samples(const std::vector<Vec3>& joints, const Skeleton& skeleton, double unit)
{
    return body_samples(joints, body_geometry(joints, skeleton), unit / 2.0);
}

namespace {

// World-space snapshot kept for the history window.
struct Past {
    Vec3 root;
    LimbPoints limbs;
    Mat3 orientation;
    Vec3 root_velocity;
    std::vector<Vec3> joint_velocities;
    double yaw_rate;
};

HistoryState build_history(const std::deque<Past>& past, int w, const CanonicalFrame& frame)
{
    HistoryState h;
    // Pad at the start by repeating the oldest snapshot.
    const int missing = w + 1 - static_cast<int>(past.size());
    for (int k = 0; k < w + 1; ++k) {
        const auto& p = past[std::max(0, k - missing)];
        h.root_positions.push_back(frame.to_canonical_point(p.root));
        LimbPoints l = p.limbs;
        canonicalize(l, ValueKind::Point, frame);
        h.limb_positions.push_back(l);
        h.root_orientations.push_back(matrix_to_rot6d(frame.to_canonical_rotation(p.orientation)));
        h.root_velocities.push_back(frame.to_canonical_direction(p.root_velocity));
        auto jv = p.joint_velocities;
        canonicalize(jv, ValueKind::Direction, frame);
        h.joint_velocities.push_back(std::move(jv));
        h.yaw_rates.push_back(p.yaw_rate);
    }
    return h;
}

}  // namespace

EpisodeResult rollout(Policy& policy, const Pose& initial, std::shared_ptr<const Skeleton> skeleton,
                      const OccupancyProvider& provider, const std::vector<TargetEvent>& schedule, double duration,
                      std::uint64_t seed, const RolloutOptions& options)
{
    if (!skeleton) throw Error("rollout: null skeleton");
    options.window.validate();
    options.occupancy.validate();
    options.field.validate();
    if (!(duration > 0.0)) throw Error("rollout: duration must be positive");
    const auto& sk = *skeleton;
    const double rate = options.window.rate;
    const double dt = options.window.dt();
    const auto steps = static_cast<std::size_t>(std::llround(duration * rate));
    if (steps < 1) throw Error("rollout: duration shorter than one control step");

    RegulationOptions reg = default_regulation(sk, dt);
    if (options.regulate_all_joints) {
        reg.joints.clear();
        for (int j = 1; j < sk.joint_count(); ++j) reg.joints.push_back(j);
    }

    EpisodeResult result;
    result.skeleton = skeleton;
    result.rate = rate;
    result.seed = seed;
    result.provider = provider.describe();
    result.policy = policy.name();
    result.regulation = options.regulate;
    result.schedule = schedule;
    result.frames.reserve(steps);

    policy.reset(seed);
    Pose pose = initial;
    if (pose.joint_rotations.size() != static_cast<std::size_t>(sk.joint_count()))
        throw Error("rollout: initial pose does not match the skeleton");
    update_contacts(pose, sk);
    WorldState world{pose.root_position, canonical_frame(pose, sk).yaw};

    // Velocities start at zero.
    Vec3 root_velocity = Vec3::Zero();
    double yaw_rate = 0.0;
    std::vector<Vec3> joint_velocities(sk.joint_count(), Vec3::Zero());
    std::vector<double> corrections(reg.joints.size() + 1, 0.0);
    std::deque<Past> past;

    for (std::size_t i = 0; i < steps; ++i) {
        const double t = static_cast<double>(i) / rate;
        const auto joints = forward_kinematics(pose, sk);
        const CanonicalFrame frame{Vec3(world.position.x(), world.position.y(), 0.0), world.facing};
        const auto co = sample_canonical_occupancy(provider, frame, t, pose.root_position.z(), options.occupancy);

        FrameRecord rec;
        rec.time = t;
        rec.pose = pose;
        rec.joints = joints;
        rec.world = world;
        rec.root_velocity = root_velocity;
        rec.yaw_rate = yaw_rate;
        rec.joint_velocities = joint_velocities;
        rec.corrections = corrections;
        rec.occupancy_hash = occupancy_hash(co);
        rec.penetrated =
            provider.penetrated_cells(penetration_samples(joints, sk, options.penetration_unit), t,
                                      options.penetration_unit);
        result.frames.push_back(std::move(rec));
        if (i + 1 == steps) break;

        const Mat3 root_rot = rot6d_to_matrix(pose.root_orientation);
        PoseState x;
        x.root_position = frame.to_canonical_point(pose.root_position);
        x.root_orientation = matrix_to_rot6d(frame.to_canonical_rotation(root_rot));
        x.joint_positions = joints;
        canonicalize(x.joint_positions, ValueKind::Point, frame);
        x.joint_rotations = pose.joint_rotations;
        x.root_velocity = frame.to_canonical_direction(root_velocity);
        x.joint_velocities = joint_velocities;
        canonicalize(x.joint_velocities, ValueKind::Direction, frame);
        x.yaw_rate = yaw_rate;
        x.foot_contact = pose.foot_contact;

        LimbPoints limbs;
        for (std::size_t k = 1; k < kEndEffectors.size(); ++k) limbs[k - 1] = joints[sk.landmark(kEndEffectors[k])];
        past.push_back({pose.root_position, limbs, root_rot, root_velocity, joint_velocities, yaw_rate});
        while (static_cast<int>(past.size()) > options.window.history + 1) past.pop_front();
        const auto h = build_history(past, options.window.history, frame);

        ControlSignals c;
        c.occupancy = co;
        if (const auto* target = active_target(schedule, t)) c.target = encode_target(target->points, frame);

        Prediction pred;
        try {
            pred = policy.predict(h, x, c);
        } catch (const std::exception& e) {
            throw Error("rollout: policy failed at frame " + std::to_string(i) + ": " + e.what());
        }
        if (pred.next.joint_rotations.size() != pose.joint_rotations.size() ||
            pred.next.joint_velocities.size() != joint_velocities.size())
            throw Error("rollout: policy output at frame " + std::to_string(i) + " does not match the skeleton");

        std::fill(corrections.begin(), corrections.end(), 0.0);
        if (options.regulate && co.count() > 0) {
            const auto r = apply_regulation(pred, x, occupied_centers(co), options.field, reg);
            for (std::size_t k = 0; k < r.deltas.size(); ++k) corrections[k] = r.deltas[k].norm();
        }

        // Explicit Euler in world coordinates.
        const auto& n = pred.next;
        root_velocity = frame.to_world_direction(n.root_velocity);
        yaw_rate = n.yaw_rate;
        joint_velocities = n.joint_velocities;
        decanonicalize(joint_velocities, ValueKind::Direction, frame);
        world.position += root_velocity * dt;
        world.facing = wrap_angle(world.facing + yaw_rate * dt);
        pose.root_position = world.position;
        pose.root_orientation = matrix_to_rot6d(frame.to_world_rotation(rot6d_to_matrix(n.root_orientation)));
        pose.joint_rotations = n.joint_rotations;
        update_contacts(pose, sk);
    }
    return result;
}

}  // namespace occu
