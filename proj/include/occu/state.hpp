// SPDX-FileCopyrightText: 2026 occu authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <optional>
#include <vector>

#include "occu/grid.hpp"
#include "occu/motion.hpp"

namespace occu {

/// Current pose state x^t, everything canonical to frame t.
struct PoseState {
    Vec3 root_position = Vec3::Zero();
    Rot6d root_orientation = identity_rot6d();
    std::vector<Vec3> joint_positions;
    std::vector<Rot6d> joint_rotations;
    Vec3 root_velocity = Vec3::Zero();
    std::vector<Vec3> joint_velocities;
    double yaw_rate = 0.0;
    std::array<bool, 2> foot_contact{false, false};
};

/// Hands then feet, in kEndEffectors order without the root.
using LimbPoints = std::array<Vec3, 4>;

/// History h^t over frames t-w .. t (oldest first), canonical to frame t.
struct HistoryState {
    std::vector<Vec3> root_positions;
    std::vector<LimbPoints> limb_positions;
    std::vector<Rot6d> root_orientations;
    std::vector<Vec3> root_velocities;
    std::vector<std::vector<Vec3>> joint_velocities;
    std::vector<double> yaw_rates;

    std::size_t length() const { return root_positions.size(); }
};

/// Five canonical target points (root, hands, feet); absent entries are nullopt.
using TargetPoints = std::array<std::optional<Vec3>, 5>;

/// Control signals c^t. Every signal is optional.
struct ControlSignals {
    std::optional<OccupancyGrid> occupancy;
    std::optional<TargetPoints> target;
    std::vector<TargetPoints> future_trajectory;
};

/// Future summary û^t over f frames, canonical to frame t+1.
struct FutureSummary {
    std::vector<Vec3> root_positions;
    std::vector<std::vector<Vec3>> joint_positions;
    std::vector<std::vector<Rot6d>> joint_rotations;
    std::vector<Vec3> root_velocities;
    std::vector<std::vector<Vec3>> joint_velocities;
    std::vector<double> yaw_rates;
};

/// Policy output ŷ^t: next state in frame-t canonical plus the future summary.
/// next.root_velocity and next.yaw_rate drive the transition from t to t+1.
struct Prediction {
    PoseState next;
    FutureSummary future;
};

}  // namespace occu
