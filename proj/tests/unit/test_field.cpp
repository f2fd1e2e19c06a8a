// SPDX-FileCopyrightText: 2026 occu authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <random>

#include "occu/field.hpp"
#include "occu/occupancy.hpp"
#include "test_util.hpp"

using namespace occu;
using occu::testing::random_rotation;
using occu::testing::random_vec;
using occu::testing::uniform;

namespace {

// Scalar re-evaluation of the per-voxel sum, written without vector helpers.
double oracle_sum(const Vec3& v, const Vec3& p, const std::vector<Vec3>& centers, double inner, double falloff)
{
    double s = 0.0;
    const double speed = std::sqrt(v.x() * v.x() + v.y() * v.y() + v.z() * v.z());
    for (const auto& c : centers) {
        const double dx = c.x() - p.x(), dy = c.y() - p.y(), dz = c.z() - p.z();
        const double d = std::sqrt(dx * dx + dy * dy + dz * dz);
        if (d <= inner) continue;
        const double cosine = (v.x() * dx + v.y() * dy + v.z() * dz) / (speed * d);
        s += std::max(0.0, cosine) * std::max(0.0, 1.0 / (d - inner) - falloff);
    }
    return s;
}

std::vector<Vec3> wall_centers(double distance)
{
    // Solid slab starting `distance` ahead of a root at the standard height.
    const BoxSceneProvider wall({{Vec3(distance + 2.0, 0.0, 1.0), Vec3(2.0, 10.0, 10.0), 0.0}});
    const CanonicalFrame frame{};
    return occupied_centers(sample_canonical_occupancy(wall, frame, 0.0, 0.93, CanonicalOccupancyConfig{}));
}

}  // namespace

TEST_CASE("field_correction reference cases")
{
    const FieldParams params;
    const Vec3 p = Vec3::Zero();
    const std::vector<Vec3> none;
    CHECK(field_correction(Vec3(1, 0, 0), p, none, params) == Vec3::Zero());

    const std::vector<Vec3> ahead{Vec3(0.5, 0, 0)};
    CHECK(field_correction(Vec3(-1, 0, 0), p, ahead, params) == Vec3::Zero());
    CHECK(field_correction(Vec3(0, 1, 0), p, ahead, params) == Vec3::Zero());
    CHECK(field_correction(Vec3::Zero(), p, ahead, params) == Vec3::Zero());

    const double expected = -params.stiffness * (1.0 / (0.5 - 0.2) - 1.25);
    const Vec3 dv = field_correction(Vec3(1, 0, 0), p, ahead, params);
    CHECK(dv.x() == doctest::Approx(expected).epsilon(1e-12));
    CHECK(dv.y() == 0.0);
    CHECK(dv.z() == 0.0);

    // Inside the inner threshold and beyond the reach the voxel is ignored.
    CHECK(field_correction(Vec3(1, 0, 0), p, std::vector<Vec3>{Vec3(0.2, 0, 0)}, params) == Vec3::Zero());
    CHECK(field_correction(Vec3(1, 0, 0), p, std::vector<Vec3>{Vec3(1.0, 0, 0)}, params) == Vec3::Zero());
    CHECK(field_correction(Vec3(1, 0, 0), p, std::vector<Vec3>{Vec3(0.999, 0, 0)}, params).x() < 0.0);
}

TEST_CASE("field_correction against the scalar oracle")
{
    std::mt19937_64 rng(21);
    FieldParams params;
    params.stiffness = 0.01;
    for (int trial = 0; trial < 500; ++trial) {
        const Vec3 v = random_vec(rng, -2, 2);
        const Vec3 p = random_vec(rng);
        std::vector<Vec3> centers;
        const int n = static_cast<int>(rng() % 40);
        for (int i = 0; i < n; ++i) centers.push_back(p + random_vec(rng, -1.1, 1.1));
        const double s = std::min(params.stiffness * oracle_sum(v, p, centers, 0.2, 1.25), 1.0);
        const Vec3 got = field_correction(v, p, centers, params);
        CHECK((got + s * v).norm() <= 1e-12 * (1.0 + v.norm()));
    }
}

TEST_CASE("field identities")
{
    std::mt19937_64 rng(22);
    for (NormOrder order : {NormOrder::L1, NormOrder::L2, NormOrder::LInf}) {
        FieldParams params;
        params.norm = order;
        params.stiffness = 0.02;
        for (int trial = 0; trial < 300; ++trial) {
            const Vec3 v = random_vec(rng, -2, 2);
            const Vec3 p = random_vec(rng);
            std::vector<Vec3> centers;
            for (int i = 0; i < 30; ++i) centers.push_back(p + random_vec(rng, -1.2, 1.2));
            const Vec3 dv = field_correction(v, p, centers, params);
            CHECK(dv.dot(v) <= 0.0);
            CHECK((v + dv).norm() <= v.norm() + 1e-12);

            // Locality: centers at or beyond the reach change nothing.
            std::vector<Vec3> extended = centers;
            for (int i = 0; i < 10; ++i) {
                Vec3 dir = random_vec(rng);
                dir /= norm_of(dir, order);
                extended.push_back(p + dir * uniform(rng, params.influence_radius(), 3.0));
            }
            CHECK((field_correction(v, p, extended, params) - dv).norm() <= 1e-15);

            if (order == NormOrder::L2) {
                const Mat3 R = random_rotation(rng);
                std::vector<Vec3> turned;
                for (const auto& c : centers) turned.push_back(R * c);
                CHECK((field_correction(R * v, R * p, turned, params) - R * dv).norm() <= 1e-9);
            }
        }
    }
}

TEST_CASE("cap bounds the correction")
{
    FieldParams params;
    params.stiffness = 100.0;
    params.max_fraction = 0.6;
    const Vec3 v(0.3, -0.4, 0.0);
    const std::vector<Vec3> centers{Vec3(0.15, -0.2, 0) * 2.0};
    CHECK(field_correction(v, Vec3::Zero(), centers, params).isApprox(-0.6 * v));
    params.max_fraction = 0.0;
    CHECK_THROWS(params.validate());
    params.max_fraction = 1.0;
    params.stiffness = -1.0;
    CHECK_THROWS(params.validate());
}

TEST_CASE("doubling k below the cap doubles the correction")
{
    FieldParams params;
    params.stiffness = 0.0002;
    const std::vector<Vec3> centers = wall_centers(0.6);
    const Vec3 v(1.4, 0, 0), p(0, 0, 0.93);
    const Vec3 a = field_correction(v, p, centers, params);
    params.stiffness *= 2;
    const Vec3 b = field_correction(v, p, centers, params);
    REQUIRE(a.norm() > 0.0);
    REQUIRE(b.norm() < v.norm());
    CHECK(b.norm() == doctest::Approx(2.0 * a.norm()).epsilon(1e-12));
}

TEST_CASE("default stiffness halves walking speed 0.4 m from a flat wall")
{
    const auto centers = wall_centers(0.4);
    REQUIRE(!centers.empty());
    const Vec3 v(1.4, 0, 0), p(0, 0, 0.93);
    const double k_oracle = 0.5 / oracle_sum(v, p, centers, 0.2, 1.25);
    const FieldParams params;
    CHECK(params.stiffness == doctest::Approx(k_oracle).epsilon(0.01));
    const Vec3 dv = field_correction(v, p, centers, params);
    CHECK((v + dv).norm() == doctest::Approx(0.7).epsilon(0.01));
}

TEST_CASE("apply_regulation")
{
    const auto sk = Skeleton::humanoid();
    const auto pose = Pose::rest(*sk, Vec3(0, 0, 0.93));
    PoseState current;
    current.root_position = pose.root_position;
    current.joint_positions = forward_kinematics(pose, *sk);
    Prediction pred;
    pred.next = current;
    pred.next.root_velocity = Vec3(1.4, 0, 0);
    pred.next.joint_velocities.assign(sk->joint_count(), Vec3(1.4, 0, 0));
    pred.next.root_position += pred.next.root_velocity * 0.1;

    const auto options = default_regulation(*sk, 0.1);
    CHECK(options.joints.size() == 4);

    SUBCASE("empty c_o leaves the prediction unchanged")
    {
        Prediction copy = pred;
        const auto r = apply_regulation(copy, current, std::vector<Vec3>{}, FieldParams{}, options);
        CHECK(copy.next.root_velocity == pred.next.root_velocity);
        CHECK(copy.next.root_position == pred.next.root_position);
        CHECK(copy.next.joint_velocities == pred.next.joint_velocities);
        CHECK(r.deltas.size() == 5);
        for (const auto& d : r.deltas) CHECK(d == Vec3::Zero());
    }
    SUBCASE("head-on wall slows but never reverses")
    {
        const auto centers = wall_centers(0.4);
        for (bool couple : {true, false}) {
            Prediction copy = pred;
            auto opts = options;
            opts.couple_to_root = couple;
            const auto r = apply_regulation(copy, current, centers, FieldParams{}, opts);
            const double forward = copy.next.root_velocity.x();
            CHECK(forward < 1.4);
            CHECK(forward >= 0.0);
            CHECK(copy.next.root_position.x() == doctest::Approx(0.14 + (forward - 1.4) * 0.1));
            CHECK(r.velocities[0] == Vec3(1.4, 0, 0));
            for (std::size_t i = 0; i < r.deltas.size(); ++i) CHECK(r.deltas[i].dot(r.velocities[i]) <= 0.0);
        }
    }
    SUBCASE("a braking hand brakes the root")
    {
        // Obstacle reachable by the hands only: a thin bar in front at hand height.
        const int hand = sk->landmark(Landmark::RightHand);
        const Vec3 h = current.joint_positions[hand];
        const std::vector<Vec3> centers{h + Vec3(0.35, 0, 0)};
        Prediction copy = pred;
        const auto r = apply_regulation(copy, current, centers, FieldParams{}, options);
        const double root_only = field_correction(Vec3(1.4, 0, 0), current.root_position, centers, FieldParams{}).norm();
        double strongest = 0.0;
        for (std::size_t i = 1; i < r.deltas.size(); ++i) strongest = std::max(strongest, r.deltas[i].norm());
        REQUIRE(strongest > root_only);
        CHECK(copy.next.root_velocity.x() == doctest::Approx(1.4 - strongest));
    }
    SUBCASE("bad joint index")
    {
        auto opts = options;
        opts.joints.push_back(99);
        Prediction copy = pred;
        CHECK_THROWS(apply_regulation(copy, current, std::vector<Vec3>{}, FieldParams{}, opts));
    }
}
