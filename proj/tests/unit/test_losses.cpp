// SPDX-FileCopyrightText: 2026 occu authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <random>

#include "occu/losses.hpp"
#include "test_util.hpp"

using namespace occu;
using occu::testing::random_vec;
using occu::testing::uniform;

namespace {

StateVector random_state(std::mt19937_64& rng, std::size_t n)
{
    StateVector s;
    for (std::size_t i = 0; i < n; ++i) {
        s.values.push_back(uniform(rng, -2, 2));
        s.is_rotation.push_back(rng() % 3 == 0);
    }
    return s;
}

double mix_oracle(const StateVector& a, const StateVector& b)
{
    double rot = 0.0, pos = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        const double r = a.values[i] - b.values[i];
        if (a.is_rotation[i])
            rot += r < 0 ? -r : r;
        else
            pos += r * r;
    }
    return rot + pos;
}

std::vector<double> pack(const std::vector<Vec3>& a, const std::vector<Vec3>& b)
{
    std::vector<double> x;
    for (const auto* set : {&a, &b})
        for (const auto& v : *set) x.insert(x.end(), {v.x(), v.y(), v.z()});
    return x;
}

void unpack(std::span<const double> x, std::vector<Vec3>& a, std::vector<Vec3>& b)
{
    const std::size_t n = x.size() / 6;
    a.resize(n);
    b.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        a[j] = Vec3(x[3 * j], x[3 * j + 1], x[3 * j + 2]);
        b[j] = Vec3(x[3 * (n + j)], x[3 * (n + j) + 1], x[3 * (n + j) + 2]);
    }
}

}  // namespace

TEST_CASE("loss_mix")
{
    StateVector a;
    a.values = {0.1, 0.2, 0.3};
    a.is_rotation = {true, false, false};
    CHECK(loss_mix(a, a) == 0.0);
    StateVector b = a;
    b.values[0] += 0.25;
    CHECK(loss_mix(a, b) == doctest::Approx(0.25));
    b = a;
    b.values[2] -= 0.25;
    CHECK(loss_mix(a, b) == doctest::Approx(0.0625));

    std::mt19937_64 rng(31);
    for (int i = 0; i < 50; ++i) {
        const auto x = random_state(rng, 40);
        auto y = x;
        for (auto& v : y.values) v += uniform(rng, -1, 1);
        CHECK(std::abs(loss_mix(x, y) - mix_oracle(x, y)) <= 1e-12);
        CHECK(loss_mix(x, y) >= 0.0);
        // Scaling residuals by c >= 1 never lowers the loss.
        auto z = x;
        const double c = uniform(rng, 1.0, 3.0);
        for (std::size_t k = 0; k < z.values.size(); ++k) z.values[k] = x.values[k] + c * (y.values[k] - x.values[k]);
        CHECK(loss_mix(x, z) >= loss_mix(x, y));
    }

    b = a;
    b.values.pop_back();
    b.is_rotation.pop_back();
    CHECK_THROWS(loss_mix(a, b));
    b = a;
    b.is_rotation[1] = true;
    CHECK_THROWS(loss_mix(a, b));
}

TEST_CASE("flatten tags rotation blocks")
{
    const auto sk = Skeleton::humanoid();
    Prediction p;
    p.next.joint_positions.assign(sk->joint_count(), Vec3::Zero());
    p.next.joint_rotations.assign(sk->joint_count(), identity_rot6d());
    p.next.joint_velocities.assign(sk->joint_count(), Vec3::Zero());
    const auto s = flatten(p);
    const std::size_t j = sk->joint_count();
    CHECK(s.values.size() == 3 + 6 + 3 * j + 6 * j + 3 + 3 * j + 1);
    std::size_t rot = 0;
    for (bool r : s.is_rotation) rot += r;
    CHECK(rot == 6 + 6 * j + 1);
}

TEST_CASE("loss_pen")
{
    GridLayout l;
    l.dims = {2, 1, 1};
    l.unit = 0.08;
    OccupancyGrid g(l);
    g.set(Index3{0, 0, 0}, true);
    const std::vector<Vec3> free_joint{l.center({1, 0, 0})};
    CHECK(loss_pen(free_joint, g) == 0.0);
    const std::vector<Vec3> stuck{l.center({0, 0, 0}), l.center({1, 0, 0})};
    CHECK(loss_pen(stuck, g) == doctest::Approx(0.08).epsilon(1e-12));
    CHECK_THROWS(loss_pen(stuck, complement(OccupancyGrid(l))));

    std::mt19937_64 rng(32);
    for (int trial = 0; trial < 200; ++trial) {
        GridLayout r;
        r.dims = {1 + static_cast<int>(rng() % 8), 1 + static_cast<int>(rng() % 8), 1 + static_cast<int>(rng() % 8)};
        r.unit = 0.08;
        OccupancyGrid h(r);
        for (std::size_t i = 0; i < h.cell_count(); ++i) h.set(i, rng() % 3 != 0);
        if (h.count() == h.cell_count()) h.set(0, false);
        std::vector<Vec3> joints;
        for (int k = 0; k < 6; ++k) joints.push_back(random_vec(rng, 0.0, 0.64));
        double expected = 0.0;
        for (const auto& p : joints) {
            if (!h.occupied_at(p)) continue;
            double best = 1e300;
            for (std::size_t i = 0; i < h.cell_count(); ++i)
                if (!h.get(i)) best = std::min(best, (p - r.center(r.unlinear(i))).norm());
            expected += best;
        }
        CHECK(loss_pen(joints, h) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("loss_field")
{
    const std::vector<Vec3> zero{Vec3::Zero()};
    CHECK(loss_field(zero, zero) == 0.0);
    CHECK(loss_field(zero, std::vector<Vec3>{Vec3(2, 0, 0)}) == doctest::Approx(4.0));
    CHECK(loss_field(std::vector<Vec3>{Vec3(-0.5, 0, 0)}, std::vector<Vec3>{Vec3(1, 0, 0)}) ==
          doctest::Approx(1.25));
    // Below the speed floor the ratio term is dropped.
    CHECK(loss_field(std::vector<Vec3>{Vec3(1, 0, 0)}, std::vector<Vec3>{Vec3(1e-7, 0, 0)}) ==
          doctest::Approx(1e-14));
    const std::vector<Vec3> d{Vec3(0.1, 0, 0), Vec3(0.3, 0, 0)};
    const std::vector<Vec3> v{Vec3(1, 0, 0), Vec3(0, 1, 0)};
    CHECK(loss_field(d, v, true) == doctest::Approx(0.01 + 1.0));
    CHECK(loss_field(d, v) == doctest::Approx(0.01 + 1.0 + 0.09 + 1.0));
    CHECK_THROWS(loss_field(d, zero));
}

TEST_CASE("loss_total")
{
    CHECK(loss_total({}) == 0.0);
    CHECK(loss_total({1, 1, 1}) == doctest::Approx(4.0));
    CHECK(loss_total({1.5, 7, 9}, {0, 0}) == doctest::Approx(1.5));
    CHECK_THROWS(loss_total({1, 1, 1}, {-1, 0}));
}

TEST_CASE("gradient checks")
{
    SUBCASE("quadratic")
    {
        const auto f = [](std::span<const double> x) {
            double s = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) s += (i + 1.0) * x[i] * x[i] + x[i];
            return s;
        };
        const auto g = [](std::span<const double> x) {
            std::vector<double> out(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) out[i] = 2.0 * (i + 1.0) * x[i] + 1.0;
            return out;
        };
        const std::vector<double> x0{0.3, -1.2, 2.5, 0.0};
        CHECK(gradient_check(f, g, x0) < 1e-7);
    }
    SUBCASE("loss_mix and loss_field at random smooth points")
    {
        std::mt19937_64 rng(33);
        for (int trial = 0; trial < 20; ++trial) {
            const auto gt = random_state(rng, 30);
            auto pred = gt;
            // Keep rotation residuals away from the |r| kink.
            for (std::size_t i = 0; i < pred.values.size(); ++i) {
                const double r = uniform(rng, 0.01, 1.0) * ((rng() & 1) ? 1 : -1);
                pred.values[i] += r;
            }
            const auto fm = [&](std::span<const double> x) {
                StateVector p = pred;
                p.values.assign(x.begin(), x.end());
                return loss_mix(p, gt);
            };
            const auto gm = [&](std::span<const double> x) {
                StateVector p = pred;
                p.values.assign(x.begin(), x.end());
                return loss_mix_gradient(p, gt);
            };
            CHECK(gradient_check(fm, gm, pred.values) < 1e-4);

            std::vector<Vec3> deltas, vels;
            for (int j = 0; j < 5; ++j) {
                deltas.push_back(random_vec(rng));
                vels.push_back(random_vec(rng, 0.3, 1.5));
            }
            const auto x0 = pack(deltas, vels);
            const auto ff = [](std::span<const double> x) {
                std::vector<Vec3> a, b;
                unpack(x, a, b);
                return loss_field(a, b);
            };
            const auto gf = [](std::span<const double> x) {
                std::vector<Vec3> a, b;
                unpack(x, a, b);
                const auto g = loss_field_gradient(a, b);
                return pack(g.d_deltas, g.d_velocities);
            };
            CHECK(gradient_check(ff, gf, x0) < 1e-4);
        }
    }
    SUBCASE("non-finite evaluation")
    {
        const auto f = [](std::span<const double> x) { return std::log(x[0]); };
        const auto g = [](std::span<const double> x) { return std::vector<double>{1.0 / x[0]}; };
        const std::vector<double> x0{0.0};
        CHECK_THROWS(gradient_check(f, g, x0));
    }
}
