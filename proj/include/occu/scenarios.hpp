// SPDX-FileCopyrightText: 2026 occu authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "occu/controller.hpp"

namespace occu {

/// Everything rollout needs besides the policy and options.
struct Episode {
    std::string name;
    std::shared_ptr<const Skeleton> skeleton;
    Pose initial;
    std::shared_ptr<const OccupancyProvider> provider;
    std::vector<TargetEvent> schedule;
    double duration = 10.0;
    std::uint64_t seed = 0;
};

/// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
inline double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }
inline double uniform_in(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * unit_uniform(rng); }

/// Rest pose at (x, y) facing `yaw`, as five target points.
TargetPoints rest_target(const Skeleton& skeleton, double x, double y, double yaw);

/// Empty world; start pose and a target 3 m away in a random direction.
Episode open_ground_episode(std::uint64_t seed, std::shared_ptr<const Skeleton> skeleton);

/// Floorless walls and L-shaped corridors with the target on the far side of
/// an obstacle. Episode i uses seed i.
std::vector<Episode> wall_corridor_suite(std::shared_ptr<const Skeleton> skeleton, int count = 20);

/// Revolving door at the origin; the human walks along y = lane from x = -4
/// to a target 2.5 m beyond the door. The seed sets the door phase.
struct DoorScenario {
    RevolvingDoorParams door;
    double lane = 0.75;
    double start_x = -4.0;
    double duration = 20.0;
};
Episode revolving_door_episode(std::uint64_t seed, std::shared_ptr<const Skeleton> skeleton,
                               const DoorScenario& scenario = {});

EpisodeResult run_episode(const Episode& episode, Policy& policy, const RolloutOptions& options);

}  // namespace occu
