// SPDX-FileCopyrightText: 2026 occu authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <random>

#include "occu/occupancy.hpp"

namespace occu {

namespace {
// Bit-exact across standard libraries, unlike uniform_real_distribution.
double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }
}  // namespace

BpsBasis BpsBasis::generate(int n, std::uint64_t seed)
{
    if (n < 1) throw Error("bps: basis needs at least one point");
    BpsBasis b;
    b.seed = seed;
    std::mt19937_64 rng(seed);
    while (static_cast<int>(b.points.size()) < n) {
        const Vec3 p(2.0 * unit_uniform(rng) - 1.0, 2.0 * unit_uniform(rng) - 1.0, 2.0 * unit_uniform(rng) - 1.0);
        if (p.squaredNorm() <= 1.0) b.points.push_back(p);
    }
    return b;
}

std::vector<double> bps_encode(const OccupancyProvider& provider, const CanonicalFrame& frame, double t,
                               double pelvis_height, const BpsBasis& basis, double radius, double unit)
{
    if (!(radius > 0.0) || !(unit > 0.0)) throw Error("bps: radius and unit must be positive");
    const double cap = 2.0 * radius;
    const Vec3 pelvis = frame.to_world_point(Vec3(0.0, 0.0, pelvis_height));

    // Only centers within radius + cap of the pelvis can fall under the cap.
    const double reach = radius + cap;
    GridLayout region;
    region.unit = unit;
    for (int a = 0; a < 3; ++a) {
        const double first = std::floor((pelvis[a] - reach) / unit);
        const double last = std::floor((pelvis[a] + reach) / unit);
        region.origin[a] = first * unit;
        region.dims[a] = static_cast<int>(last - first) + 1;
    }
    const auto snap = provider.snapshot(t, region);
    const auto centers = occupied_centers(snap);

    std::vector<double> out;
    out.reserve(basis.points.size());
    for (const auto& b : basis.points) {
        const Vec3 q = frame.to_world_point(Vec3(b.x() * radius, b.y() * radius, pelvis_height + b.z() * radius));
        double best = cap * cap;
        for (const auto& c : centers) best = std::min(best, (q - c).squaredNorm());
        out.push_back(std::sqrt(best));
    }
    return out;
}

}  // namespace occu
