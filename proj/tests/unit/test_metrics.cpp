// SPDX-FileCopyrightText: 2026 occu authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <random>
#include <set>

#include <json.hpp>

#include "occu/metrics.hpp"
#include "occu/scenarios.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace occu;
using occu::testing::erp_recursive;
using occu::testing::mask_oracle;
using occu::testing::reachable_oracle;

namespace {

const auto kSkeleton = Skeleton::humanoid();

// Episode whose frames are the given poses at `rate`; no schedule.
EpisodeResult episode_of(const std::vector<Pose>& poses, double rate = 10.0)
{
    EpisodeResult r;
    r.skeleton = kSkeleton;
    r.rate = rate;
    for (std::size_t i = 0; i < poses.size(); ++i) {
        FrameRecord f;
        f.time = static_cast<double>(i) / rate;
        f.pose = poses[i];
        f.joints = forward_kinematics(poses[i], *kSkeleton);
        r.frames.push_back(f);
    }
    return r;
}

// Frames with every joint at z = 1 except the feet, which follow `feet(i)`.
EpisodeResult foot_episode(int frames, double rate, const std::function<Vec3(int)>& feet)
{
    EpisodeResult r;
    r.skeleton = kSkeleton;
    r.rate = rate;
    for (int i = 0; i < frames; ++i) {
        FrameRecord f;
        f.joints.assign(kSkeleton->joint_count(), Vec3(0, 0, 1));
        f.joints[kSkeleton->landmark(Landmark::LeftFoot)] = feet(i);
        f.joints[kSkeleton->landmark(Landmark::RightFoot)] = feet(i) + Vec3(0, -0.2, 0);
        r.frames.push_back(f);
    }
    return r;
}

std::vector<Vec3> random_traj(std::mt19937_64& rng, std::size_t n)
{
    std::vector<Vec3> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(testing::random_vec(rng, -2, 2));
    return out;
}

// Dijkstra over the mask with the same move rules; infinity when unreachable.
double shortest_oracle(const std::vector<bool>& mask, int nx, int ny, int sx, int sy, int gx, int gy)
{
    std::vector<double> dist(mask.size(), std::numeric_limits<double>::infinity());
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> q;
    const auto at = [&](int x, int y) { return x + nx * y; };
    dist[at(sx, sy)] = 0.0;
    q.push({0.0, at(sx, sy)});
    while (!q.empty()) {
        const auto [d, id] = q.top();
        q.pop();
        if (d > dist[id]) continue;
        const int x = id % nx, y = id / nx;
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
                const int qx = x + dx, qy = y + dy;
                if ((!dx && !dy) || qx < 0 || qy < 0 || qx >= nx || qy >= ny || !mask[at(qx, qy)]) continue;
                if (dx && dy && (!mask[at(x + dx, y)] || !mask[at(x, y + dy)])) continue;
                const double nd = d + std::sqrt(static_cast<double>(dx * dx + dy * dy));
                if (nd < dist[at(qx, qy)]) {
                    dist[at(qx, qy)] = nd;
                    q.push({nd, at(qx, qy)});
                }
            }
    }
    return dist[at(gx, gy)];
}

}  // namespace

TEST_CASE("success examples")
{
    const Pose pose = Pose::rest(*kSkeleton, Vec3(0, 0, 0.93));
    auto r = episode_of({pose, pose});
    r.schedule = {{0.0, target_points(pose, *kSkeleton)}};
    auto s = success(r);
    CHECK(s.success);
    REQUIRE(s.time.has_value());
    CHECK(*s.time == 0.0);
    CHECK(s.min_distance == doctest::Approx(0.0).epsilon(1e-12));

    // Never within 0.2 m: fail, DT is the minimum.
    std::vector<Pose> walk;
    for (int i = 0; i < 5; ++i) walk.push_back(Pose::rest(*kSkeleton, Vec3(0.1 * i, 0, 0.93)));
    r = episode_of(walk);
    r.schedule = {{0.0, rest_target(*kSkeleton, 1.0, 0.0, 0.0)}};
    s = success(r);
    CHECK_FALSE(s.success);
    CHECK_FALSE(s.time.has_value());
    CHECK(s.min_distance == doctest::Approx(0.6).epsilon(1e-9));

    // Penetration boundary at the qualifying frame is exclusive.
    r = episode_of({pose, pose});
    r.schedule = {{0.0, target_points(pose, *kSkeleton)}};
    r.frames[0].penetrated = 50;
    r.frames[1].penetrated = 50;
    CHECK_FALSE(success(r).success);
    r.frames[1].penetrated = 49;
    s = success(r);
    CHECK(s.success);
    CHECK(*s.time == doctest::Approx(0.1));

    // Absent target points are left out of the mean.
    TargetPoints partial;
    partial[0] = pose.root_position + Vec3(0.15, 0, 0);
    r.schedule = {{0.0, partial}};
    CHECK(success(r).min_distance == doctest::Approx(0.15).epsilon(1e-12));

    CHECK_THROWS_AS(success(EpisodeResult{}), Error);
}

TEST_CASE("success is monotone in its thresholds")
{
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Pose> poses;
        for (int i = 0; i < 6; ++i)
            poses.push_back(Pose::rest(*kSkeleton, Vec3(testing::uniform(rng, -0.4, 0.4), 0, 0.93)));
        auto r = episode_of(poses);
        for (auto& f : r.frames) f.penetrated = rng() % 80;
        r.schedule = {{0.0, rest_target(*kSkeleton, 0, 0, 0)}};
        SuccessThresholds tight{testing::uniform(rng, 0.01, 0.3), rng() % 80};
        SuccessThresholds loose{tight.distance + testing::uniform(rng, 0, 0.2), tight.max_penetrated + rng() % 20};
        if (success(r, tight).success) CHECK(success(r, loose).success);
    }
}

TEST_CASE("foot_sliding examples")
{
    const auto still = foot_episode(10, 10.0, [](int) { return Vec3(0, 0.1, 0.02); });
    CHECK(foot_sliding(still) == 0.0);

    const auto sliding = foot_episode(10, 10.0, [](int i) { return Vec3(0.01 * i, 0.1, 0.02); });
    CHECK(foot_sliding(sliding) == 100.0);

    // Alternating 0 / 0.075 m at 1 Hz: exactly 0.075 m/s, not flagged.
    const auto boundary = foot_episode(6, 1.0, [](int i) { return Vec3(i % 2 ? 0.075 : 0.0, 0.1, 0.02); });
    CHECK(foot_sliding(boundary) == 0.0);

    // Lifted feet never count.
    const auto swing = foot_episode(10, 10.0, [](int i) { return Vec3(0.05 * i, 0.1, 0.3); });
    CHECK(foot_sliding(swing) == 0.0);

    // Half of the frames grounded.
    const auto half = foot_episode(10, 10.0, [](int i) { return Vec3(0.05 * i, 0.1, i < 5 ? 0.02 : 0.3); });
    CHECK(foot_sliding(half) == 50.0);
}

TEST_CASE("penetration counts match brute-force voxel containment")
{
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 10; ++trial) {
        const Pose pose = testing::random_pose(*kSkeleton, rng);
        const auto r = episode_of({pose});
        const auto joints = r.frames[0].joints;
        const auto samples = penetration_samples(joints, *kSkeleton, 0.08);

        // Static grid fully covering the body: count = distinct cells holding samples.
        GridLayout layout;
        layout.unit = 0.08;
        layout.origin = pose.root_position - Vec3(1.5, 1.5, 1.5);
        layout.dims = {38, 38, 38};
        auto solid = std::make_shared<OccupancyGrid>(layout, true);
        const StaticGridProvider provider(solid);
        std::size_t expected = 0;
        for (std::size_t c = 0; c < layout.cell_count(); ++c) {
            const Vec3 lo = layout.corner(layout.unlinear(c));
            for (const auto& p : samples)
                if ((p - lo).minCoeff() >= 0.0 && (lo + Vec3::Constant(0.08) - p).minCoeff() > 0.0) {
                    ++expected;
                    break;
                }
        }
        CHECK(penetration_counts(r, provider)[0] == expected);

        // World lattice through a box provider: distinct floor(p / u) cells.
        const BoxSceneProvider block({{pose.root_position, Vec3(3, 3, 3), 0.0}});
        std::set<std::array<long, 3>> cells;
        for (const auto& p : samples)
            cells.insert({static_cast<long>(std::floor(p.x() / 0.08)), static_cast<long>(std::floor(p.y() / 0.08)),
                          static_cast<long>(std::floor(p.z() / 0.08))});
        CHECK(penetration_counts(r, block)[0] == cells.size());
        CHECK(penetration_counts(r, EmptyProvider{})[0] == 0);
    }
}

TEST_CASE("a motion never penetrates its own pseudo-scene")
{
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<Pose> poses;
        Pose p = testing::random_pose(*kSkeleton, rng, 0.5);
        for (int i = 0; i < 12; ++i) {
            p.root_position += testing::random_vec(rng, -0.05, 0.05);
            for (auto& q : p.joint_rotations)
                q = matrix_to_rot6d(axis_angle(testing::random_vec(rng), 0.05) * rot6d_to_matrix(q));
            poses.push_back(p);
        }
        const MotionSequence seq(kSkeleton, poses, 30.0);
        const StaticGridProvider scene(std::make_shared<OccupancyGrid>(motion_scene(seq, 0.08)));
        for (auto n : penetration_counts(seq, scene)) CHECK(n == 0);
        const auto r = episode_from_motion(seq, "static");
        CHECK(penetration(r) == 0.0);
        CHECK(success(r).success);
    }
}

TEST_CASE("erp_distance examples")
{
    const std::vector<Vec3> a{Vec3(1, 0, 0), Vec3(2, 0, 0), Vec3(3, 1, 0)};
    const std::vector<Vec3> none;
    CHECK(erp_distance(a, a) == 0.0);
    CHECK(erp_distance(none, a) == doctest::Approx(1.0 + 2.0 + std::sqrt(10.0)).epsilon(1e-15));
    CHECK(erp_distance(a, none) == doctest::Approx(1.0 + 2.0 + std::sqrt(10.0)).epsilon(1e-15));
    const Vec3 g(1, 0, 0);
    CHECK(erp_distance(none, a, g) == doctest::Approx(0.0 + 1.0 + std::sqrt(5.0)).epsilon(1e-15));
    CHECK_THROWS_AS(erp_distance(none, none), Error);
}

TEST_CASE("erp_distance matches the recursive definition")
{
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        const auto a = random_traj(rng, rng() % 7);
        const auto b = random_traj(rng, 1 + rng() % 6);
        const Vec3 g = trial % 2 ? testing::random_vec(rng) : Vec3::Zero();
        CHECK(erp_distance(a, b, g) == erp_recursive(a, b, a.size(), b.size(), g));
    }
}

TEST_CASE("erp_distance is symmetric and satisfies the triangle inequality")
{
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 200; ++trial) {
        const auto a = random_traj(rng, 1 + rng() % 6);
        const auto b = random_traj(rng, 1 + rng() % 6);
        const auto c = random_traj(rng, 1 + rng() % 6);
        const double ab = erp_distance(a, b), ba = erp_distance(b, a);
        CHECK(ab == doctest::Approx(ba).epsilon(1e-12));
        CHECK(ab >= 0.0);
        CHECK(ab <= erp_distance(a, c) + erp_distance(c, b) + 1e-12);
    }
}

TEST_CASE("trajectory_erp is zero for the recorded root path")
{
    std::vector<Pose> poses;
    std::vector<Vec3> roots;
    for (int i = 0; i < 8; ++i) {
        poses.push_back(Pose::rest(*kSkeleton, Vec3(3 + 0.1 * i, -2, 0.93), 1.0));
        roots.push_back(poses.back().root_position);
    }
    const auto r = episode_of(poses);
    CHECK(trajectory_erp(r, roots) == doctest::Approx(0.0).epsilon(1e-12));
    // Gap reference is the first root on the ground: an empty reference costs
    // the sum of canonical root distances.
    double expected = 0.0;
    for (int i = 0; i < 8; ++i) expected += std::hypot(0.1 * i, 0.93);
    CHECK(trajectory_erp(r, {}) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("path_feasibility examples")
{
    GridLayout layout;
    layout.unit = 0.1;
    layout.dims = {40, 20, 20};
    OccupancyGrid empty(layout);
    auto res = path_feasibility(empty, Vec3(0.25, 0.55, 0.05), Vec3(3.85, 1.45, 0.05));
    REQUIRE(res.feasible);
    CHECK(res.reason == FeasibilityReason::Ok);
    // Octile path: 36 steps along x, 9 of them diagonal.
    CHECK(res.path.size() == 37);
    CHECK(res.path.front() == Index3{2, 5, 0});
    CHECK(res.path.back() == Index3{38, 14, 0});

    // Corridor 0.3 m wide between two walls: an arm fits, a 0.25 m cylinder does not.
    OccupancyGrid corridor(layout);
    for (int x = 10; x < 30; ++x)
        for (int z = 0; z < 20; ++z)
            for (int y = 0; y < 20; ++y)
                if (y < 8 || y > 10) corridor.set(Index3{x, y, z}, true);
    const Vec3 start(0.25, 0.95, 0.05), goal(3.85, 0.95, 0.05);
    CHECK_FALSE(path_feasibility(corridor, start, goal).feasible);
    CHECK(path_feasibility(corridor, start, goal).reason == FeasibilityReason::NoPath);
    CHECK(path_feasibility(corridor, start, goal, Cylinder{0.1, 1.7}).feasible);

    // Enclosed goal.
    OccupancyGrid sealed(layout);
    for (int x = 28; x < 40; ++x)
        for (int y = 8; y < 20; ++y)
            for (int z = 0; z < 20; ++z)
                if (x == 28 || y == 8) sealed.set(Index3{x, y, z}, true);
    res = path_feasibility(sealed, Vec3(0.25, 0.25, 0.05), Vec3(3.55, 1.55, 0.05));
    CHECK_FALSE(res.feasible);
    CHECK(res.reason == FeasibilityReason::NoPath);

    OccupancyGrid blocked(layout);
    blocked.set(Index3{2, 2, 5}, true);
    CHECK(path_feasibility(blocked, Vec3(0.25, 0.25, 0.05), Vec3(3, 1, 0.05)).reason ==
          FeasibilityReason::StartBlocked);
    CHECK(path_feasibility(blocked, Vec3(3, 1, 0.05), Vec3(0.25, 0.25, 0.05)).reason ==
          FeasibilityReason::GoalBlocked);
    CHECK(path_feasibility(empty, Vec3(-1, 0, 0), Vec3(1, 1, 0.05)).reason == FeasibilityReason::OutOfGrid);
}

TEST_CASE("path_feasibility agrees with exhaustive reachability")
{
    std::mt19937_64 rng(41);
    int feasible = 0;
    for (int trial = 0; trial < 100; ++trial) {
        GridLayout layout;
        layout.unit = 0.1;
        layout.origin = testing::random_vec(rng, -1, 1);
        layout.dims = {4 + static_cast<int>(rng() % 29), 4 + static_cast<int>(rng() % 29),
                       1 + static_cast<int>(rng() % 32)};
        OccupancyGrid g(layout);
        const double density = testing::uniform(rng, 0.0, 0.04);
        for (std::size_t c = 0; c < g.cell_count(); ++c) g.set(c, testing::uniform(rng, 0.0, 1.0) < density);
        const Cylinder cyl{0.1 * static_cast<double>(rng() % 3), testing::uniform(rng, 0.1, 2.0)};
        const auto cell = [&] {
            return Index3{static_cast<int>(rng() % layout.dims[0]), static_cast<int>(rng() % layout.dims[1]),
                          static_cast<int>(rng() % layout.dims[2])};
        };
        const Index3 s = cell();
        Index3 e = cell();
        e[2] = s[2];

        const auto mask = mask_oracle(g, s[2], cyl);
        CHECK(traversable_columns(g, s[2], cyl) == mask);
        const auto res = path_feasibility(g, layout.center(s), layout.center(e), cyl);
        const bool reach = reachable_oracle(mask, layout.dims[0], layout.dims[1], s[0], s[1], e[0], e[1]);
        CHECK(res.feasible == reach);
        if (!res.feasible) continue;
        ++feasible;

        // Valid moves, and A* cost equals the Dijkstra optimum.
        double cost = 0.0;
        const int nx = layout.dims[0];
        for (std::size_t k = 1; k < res.path.size(); ++k) {
            const auto& a = res.path[k - 1];
            const auto& b = res.path[k];
            const int dx = b[0] - a[0], dy = b[1] - a[1];
            REQUIRE(std::max(std::abs(dx), std::abs(dy)) == 1);
            CHECK(mask[b[0] + nx * b[1]]);
            if (dx && dy) CHECK((mask[a[0] + dx + nx * a[1]] && mask[a[0] + nx * (a[1] + dy)]));
            cost += (dx && dy) ? std::sqrt(2.0) : 1.0;
        }
        CHECK(cost == doctest::Approx(shortest_oracle(mask, nx, layout.dims[1], s[0], s[1], e[0], e[1])));
    }
    CHECK(feasible > 20);
}

TEST_CASE("aggregate and report consistency")
{
    std::vector<EpisodeMetrics> eps{{"a", true, 10.0, 2.0, 5.0, 1.0, 0.5},
                                    {"b", false, 30.0, std::nullopt, 15.0, 3.0, std::nullopt},
                                    {"c", true, 2.0, 4.0, 10.0, 2.0, 1.5}};
    const auto rep = aggregate(eps);
    CHECK(rep.episodes == 3);
    CHECK(rep.success_rate == doctest::Approx(200.0 / 3.0));
    CHECK(rep.dt_cm == doctest::Approx(14.0));
    CHECK(*rep.time == doctest::Approx(3.0));
    CHECK(rep.fs == doctest::Approx(10.0));
    CHECK(rep.pen == doctest::Approx(2.0));
    CHECK(*rep.erp == doctest::Approx(1.0));
    CHECK_THROWS_AS(aggregate({}), Error);

    const auto j = nlohmann::json::parse(report_json(rep));
    double pen = 0.0;
    for (const auto& e : j["per_episode"]) pen += e["pen"].get<double>();
    CHECK(j["pen"].get<double>() == doctest::Approx(pen / 3.0));
    CHECK(j["per_episode"][1]["time_s"].is_null());

    const auto table = report_table(rep);
    const auto pos = [&](const char* s) { return table.find(s); };
    CHECK(pos("Suc.") < pos("DT"));
    CHECK(pos("DT") < pos("Time"));
    CHECK(pos("Time") < pos("FS"));
    CHECK(pos("FS") < pos("PEN"));
    CHECK(pos("PEN") < pos("ERP"));
    CHECK(table.find("66.67") != std::string::npos);
}

TEST_CASE("evaluate_episode on a baseline rollout")
{
    BaselinePolicy policy(kSkeleton);
    const auto r = run_episode(open_ground_episode(3, kSkeleton), policy, {});
    const auto m = evaluate_episode("open-3", r);
    CHECK(m.success);
    CHECK(m.dt_cm < 20.0);
    CHECK(m.pen == 0.0);
    CHECK(m.fs >= 0.0);
    CHECK(m.fs <= 100.0);
    CHECK_FALSE(m.erp.has_value());
}
