// SPDX-FileCopyrightText: 2026 occu authors
// SPDX-License-Identifier: Apache-2.0

#include "occu/scenarios.hpp"

#include <cmath>

namespace occu {

namespace {

constexpr double kRootHeight = 0.93;
constexpr double kWallHeight = 2.4;

BoxSceneProvider::Box wall(const Vec3& center_xy, double length, double thickness, double yaw)
{
    return {Vec3(center_xy.x(), center_xy.y(), kWallHeight / 2), Vec3(length / 2, thickness / 2, kWallHeight / 2),
            yaw};
}

// Places a layout authored around the origin at `offset`, turned by `yaw`.
BoxSceneProvider::Box place(BoxSceneProvider::Box b, const Vec3& offset, double yaw)
{
    b.center = rot_z(yaw) * b.center + offset;
    b.yaw += yaw;
    return b;
}

}  // namespace

TargetPoints rest_target(const Skeleton& skeleton, double x, double y, double yaw)
{
    return target_points(Pose::rest(skeleton, Vec3(x, y, kRootHeight), yaw), skeleton);
}

Episode open_ground_episode(std::uint64_t seed, std::shared_ptr<const Skeleton> skeleton)
{
    std::mt19937_64 rng(seed);
    Episode e;
    e.name = "open-" + std::to_string(seed);
    e.skeleton = skeleton;
    const Vec3 start(uniform_in(rng, -2, 2), uniform_in(rng, -2, 2), kRootHeight);
    const double start_yaw = uniform_in(rng, -kPi, kPi);
    const double heading = uniform_in(rng, -kPi, kPi);
    const double end_yaw = uniform_in(rng, -kPi, kPi);
    e.initial = Pose::rest(*skeleton, start, start_yaw);
    e.provider = std::make_shared<EmptyProvider>();
    e.schedule = {{0.0, rest_target(*skeleton, start.x() + 3.0 * std::cos(heading),
                                    start.y() + 3.0 * std::sin(heading), end_yaw)}};
    e.duration = 10.0;
    e.seed = seed;
    return e;
}

std::vector<Episode> wall_corridor_suite(std::shared_ptr<const Skeleton> skeleton, int count)
{
    std::vector<Episode> out;
    for (int i = 0; i < count; ++i) {
        std::mt19937_64 rng(static_cast<std::uint64_t>(i));
        const Vec3 offset(uniform_in(rng, -3, 3), uniform_in(rng, -3, 3), 0.0);
        const double yaw = uniform_in(rng, -kPi, kPi);
        std::vector<BoxSceneProvider::Box> boxes;
        Vec3 target;
        Episode e;
        e.skeleton = skeleton;
        if (i % 2 == 0) {
            // Straight wall across the path.
            const double d = uniform_in(rng, 1.5, 2.5);
            boxes.push_back(wall(Vec3(d, uniform_in(rng, -0.5, 0.5), 0), 0.2, 3.0, 0.0));
            target = Vec3(d + 2.0, uniform_in(rng, -0.5, 0.5), 0);
            e.name = "wall-" + std::to_string(i);
        } else {
            // L-shaped corridor turning left; the straight line to the target
            // cuts through the inner corner.
            boxes.push_back({Vec3(2.0, 1.75, kWallHeight / 2), Vec3(1.0, 1.25, kWallHeight / 2), 0.0});
            boxes.push_back(wall(Vec3(2.0, -0.8, 0), 6.0, 0.2, 0.0));
            boxes.push_back(wall(Vec3(5.0, 1.5, 0), 0.2, 4.6, 0.0));
            target = Vec3(4.0, uniform_in(rng, 2.5, 3.0), 0);
            e.name = "corridor-" + std::to_string(i);
        }
        for (auto& b : boxes) b = place(b, offset, yaw);
        const Vec3 start = offset + Vec3(0, 0, kRootHeight);
        const Vec3 goal = rot_z(yaw) * target + offset;
        e.initial = Pose::rest(*skeleton, start, yaw);
        e.provider = std::make_shared<BoxSceneProvider>(std::move(boxes));
        e.schedule = {{0.0, rest_target(*skeleton, goal.x(), goal.y(), yaw)}};
        e.duration = 10.0;
        e.seed = static_cast<std::uint64_t>(i);
        out.push_back(std::move(e));
    }
    return out;
}

Episode revolving_door_episode(std::uint64_t seed, std::shared_ptr<const Skeleton> skeleton,
                               const DoorScenario& scenario)
{
    std::mt19937_64 rng(seed);
    RevolvingDoorParams door = scenario.door;
    door.phase = uniform_in(rng, 0.0, 2.0 * kPi / door.wings);
    Episode e;
    e.name = "door-" + std::to_string(seed);
    e.skeleton = skeleton;
    e.initial = Pose::rest(*skeleton, door.center + Vec3(scenario.start_x, scenario.lane, kRootHeight), 0.0);
    e.provider = std::make_shared<RevolvingDoorProvider>(door);
    const Vec3 goal = door.center + Vec3(door.radius + 2.5, scenario.lane, 0);
    e.schedule = {{0.0, rest_target(*skeleton, goal.x(), goal.y(), 0.0)}};
    e.duration = scenario.duration;
    e.seed = seed;
    return e;
}

EpisodeResult run_episode(const Episode& e, Policy& policy, const RolloutOptions& options)
{
    return rollout(policy, e.initial, e.skeleton, *e.provider, e.schedule, e.duration, e.seed, options);
}

}  // namespace occu
