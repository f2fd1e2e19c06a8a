// SPDX-FileCopyrightText: 2026 occu authors
// SPDX-License-Identifier: Apache-2.0

// Brute-force reference implementations shared by the unit tests and the
// acceptance run.

#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <vector>

#include "occu/grid.hpp"
#include "occu/metrics.hpp"

namespace occu::testing {

// ERP straight from its recursive definition.
inline double erp_recursive(const std::vector<Vec3>& a, const std::vector<Vec3>& b, std::size_t i, std::size_t j,
                            const Vec3& g)
{
    if (i == 0 && j == 0) return 0.0;
    if (i == 0) return erp_recursive(a, b, 0, j - 1, g) + (b[j - 1] - g).norm();
    if (j == 0) return erp_recursive(a, b, i - 1, 0, g) + (a[i - 1] - g).norm();
    return std::min({erp_recursive(a, b, i - 1, j - 1, g) + (a[i - 1] - b[j - 1]).norm(),
                     erp_recursive(a, b, i - 1, j, g) + (a[i - 1] - g).norm(),
                     erp_recursive(a, b, i, j - 1, g) + (b[j - 1] - g).norm()});
}

// Column mask by scanning every voxel of the grid.
inline std::vector<bool> mask_oracle(const OccupancyGrid& g, int layer, const Cylinder& cyl)
{
    const auto& l = g.layout();
    const int layers = static_cast<int>(std::ceil(cyl.height / l.unit - 1e-9));
    std::vector<bool> out(static_cast<std::size_t>(l.dims[0]) * l.dims[1], true);
    for (int y = 0; y < l.dims[1]; ++y)
        for (int x = 0; x < l.dims[0]; ++x)
            for (int k = layer; k < layer + layers && k < l.dims[2]; ++k)
                for (int j = 0; j < l.dims[1]; ++j)
                    for (int i = 0; i < l.dims[0]; ++i) {
                        const double dx = (i - x) * l.unit, dy = (j - y) * l.unit;
                        if (std::sqrt(dx * dx + dy * dy) <= cyl.radius + 1e-12 && g.get(Index3{i, j, k}))
                            out[x + static_cast<std::size_t>(l.dims[0]) * y] = false;
                    }
    return out;
}

// Plain breadth-first reachability, 8-connected without corner cutting.
inline bool reachable_oracle(const std::vector<bool>& mask, int nx, int ny, int sx, int sy, int gx, int gy)
{
    if (!mask[sx + nx * sy] || !mask[gx + nx * gy]) return false;
    std::vector<char> seen(mask.size(), 0);
    std::deque<std::pair<int, int>> q{{sx, sy}};
    seen[sx + nx * sy] = 1;
    while (!q.empty()) {
        const auto [x, y] = q.front();
        q.pop_front();
        if (x == gx && y == gy) return true;
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
                const int qx = x + dx, qy = y + dy;
                if (qx < 0 || qy < 0 || qx >= nx || qy >= ny || !mask[qx + nx * qy] || seen[qx + nx * qy]) continue;
                if (dx && dy && (!mask[x + dx + nx * y] || !mask[x + nx * (y + dy)])) continue;
                seen[qx + nx * qy] = 1;
                q.push_back({qx, qy});
            }
    }
    return false;
}

// Nearest free cell by scanning every cell; lowest linear index wins ties.
inline std::size_t nearest_free_scan(const OccupancyGrid& g, const Vec3& p)
{
    const auto& l = g.layout();
    std::size_t best = 0;
    double best_d = 1e300;
    for (std::size_t i = 0; i < g.cell_count(); ++i) {
        if (g.get(i)) continue;
        const double d = (p - l.center(l.unlinear(i))).squaredNorm();
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

}  // namespace occu::testing
