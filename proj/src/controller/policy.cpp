// SPDX-FileCopyrightText: 2026 occu authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>

#include "occu/controller.hpp"

namespace occu {

void BaselineLimits::validate() const
{
    if (!(max_speed >= 0.0) || !(max_turn_rate >= 0.0) || !(blend_radius > 0.0))
        throw Error("baseline limits: speeds must be >= 0 and blend radius > 0");
}

namespace {

// Advances x rigidly by root velocity v and yaw rate w for one step, all in
// frame-t canonical coordinates, then fills a constant-velocity future in
// frame-(t+1) canonical coordinates.
Prediction rigid_step(const PoseState& x, const Vec3& v, double w, const WindowConfig& window)
{
    const double dt = window.dt();
    const Mat3 turn = rot_z(w * dt);
    Prediction out;
    auto& n = out.next;
    n = x;
    n.root_position = x.root_position + v * dt;
    n.root_orientation = matrix_to_rot6d(turn * rot6d_to_matrix(x.root_orientation));
    n.root_velocity = v;
    n.yaw_rate = w;
    for (std::size_t j = 0; j < x.joint_positions.size(); ++j) {
        n.joint_positions[j] = turn * (x.joint_positions[j] - x.root_position) + n.root_position;
        n.joint_velocities[j] = (n.joint_positions[j] - x.joint_positions[j]) / dt;
    }

    const CanonicalFrame next_frame{Vec3(n.root_position.x(), n.root_position.y(), 0.0), w * dt};
    auto& f = out.future;
    for (int k = 1; k <= window.future; ++k) {
        const Mat3 rk = rot_z(w * dt * k);
        const Vec3 root = n.root_position + v * dt * k;
        f.root_positions.push_back(next_frame.to_canonical_point(root));
        std::vector<Vec3> joints;
        for (const auto& p : n.joint_positions) joints.push_back(next_frame.to_canonical_point(rk * (p - n.root_position) + root));
        f.joint_positions.push_back(std::move(joints));
        f.joint_rotations.push_back(n.joint_rotations);
        f.root_velocities.push_back(next_frame.to_canonical_direction(v));
        std::vector<Vec3> jv;
        for (const auto& u : n.joint_velocities) jv.push_back(next_frame.to_canonical_direction(u));
        f.joint_velocities.push_back(std::move(jv));
        f.yaw_rates.push_back(w);
    }
    return out;
}

}  // namespace

BaselinePolicy::BaselinePolicy(std::shared_ptr<const Skeleton> skeleton, BaselineLimits limits, WindowConfig window)
    : skeleton_(std::move(skeleton)), limits_(limits), window_(window)
{
    if (!skeleton_) throw Error("baseline policy: null skeleton");
    limits_.validate();
    window_.validate();
}

Prediction BaselinePolicy::predict(const HistoryState&, const PoseState& x, const ControlSignals& c)
{
    if (x.joint_positions.size() != static_cast<std::size_t>(skeleton_->joint_count()) ||
        x.joint_velocities.size() != x.joint_positions.size())
        throw Error("baseline policy: pose state does not match the skeleton");
    const double dt = window_.dt();
    Vec3 v = Vec3::Zero();
    double w = 0.0;
    if (c.target && (*c.target)[0]) {
        const Vec3 goal = *(*c.target)[0];
        const Vec3 g(goal.x() - x.root_position.x(), goal.y() - x.root_position.y(), 0.0);
        const double dist = g.norm();
        // Never overshoot: the last step lands on the goal.
        if (dist > 0.0) v = g / dist * std::min(limits_.max_speed, dist / dt);

        const double toward = dist > 1e-6 ? std::atan2(g.y(), g.x()) : 0.0;
        double desired = toward;
        if (const auto facing = target_facing(*c.target)) {
            const double blend = std::clamp(1.0 - dist / limits_.blend_radius, 0.0, 1.0);
            desired = toward + blend * wrap_angle(*facing - toward);
        } else if (dist <= 1e-6) {
            desired = 0.0;
        }
        // Canonical heading is zero, so the wrapped desired yaw is the error.
        w = std::clamp(wrap_angle(desired) / dt, -limits_.max_turn_rate, limits_.max_turn_rate);
    }
    return rigid_step(x, v, w, window_);
}

Prediction ZeroPolicy::predict(const HistoryState&, const PoseState& x, const ControlSignals&)
{
    window_.validate();
    PoseState still = x;
    std::fill(still.joint_velocities.begin(), still.joint_velocities.end(), Vec3::Zero());
    return rigid_step(still, Vec3::Zero(), 0.0, window_);
}

Prediction baseline_policy(const HistoryState& h, const PoseState& x, const ControlSignals& c,
                           const Skeleton& skeleton, const BaselineLimits& limits, const FieldParams& field,
                           const WindowConfig& window)
{
    auto shared = std::make_shared<const Skeleton>(skeleton);
    BaselinePolicy policy(shared, limits, window);
    auto pred = policy.predict(h, x, c);
    if (c.occupancy && c.occupancy->count() > 0)
        apply_regulation(pred, x, occupied_centers(*c.occupancy), field, default_regulation(skeleton, window.dt()));
    return pred;
}

}  // namespace occu
