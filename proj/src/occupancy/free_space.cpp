// SPDX-FileCopyrightText: 2026 occu authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <limits>

#include "occu/occupancy.hpp"

namespace occu {

namespace {

constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

// Exact 1-D squared distance transform (lower envelope of parabolas).
void edt_1d(const std::vector<std::int64_t>& f, std::vector<std::int64_t>& d, std::vector<int>& v,
            std::vector<double>& z)
{
    const int n = static_cast<int>(f.size());
    int k = -1;
    for (int q = 0; q < n; ++q) {
        if (f[q] >= kInf) continue;
        double s = 0.0;
        while (k >= 0) {
            const int p = v[k];
            s = (static_cast<double>(f[q] + static_cast<std::int64_t>(q) * q) -
                 static_cast<double>(f[p] + static_cast<std::int64_t>(p) * p)) /
                (2.0 * (q - p));
            if (s <= z[k]) {
                --k;
                continue;
            }
            break;
        }
        ++k;
        v[k] = q;
        z[k] = k == 0 ? -std::numeric_limits<double>::infinity() : s;
        z[k + 1] = std::numeric_limits<double>::infinity();
    }
    if (k < 0) {
        std::fill(d.begin(), d.end(), kInf);
        return;
    }
    int j = 0;
    for (int q = 0; q < n; ++q) {
        while (z[j + 1] < q) ++j;
        const std::int64_t diff = q - v[j];
        d[q] = diff * diff + f[v[j]];
    }
}

}  // namespace

FreeSpaceIndex::FreeSpaceIndex(const OccupancyGrid& grid) : grid_(grid)
{
    const auto& l = grid_.layout();
    const auto n = l.cell_count();
    if (grid_.count() == n) throw Error("nearest_free_voxel: grid has no free voxel");
    dist2_.assign(n, kInf);
    for (std::size_t i = 0; i < n; ++i)
        if (!grid_.get(i)) dist2_[i] = 0;

    const int maxdim = std::max({l.dims[0], l.dims[1], l.dims[2]});
    std::vector<std::int64_t> f(maxdim), d(maxdim);
    std::vector<int> v(maxdim);
    std::vector<double> z(maxdim + 1);
    for (int axis = 0; axis < 3; ++axis) {
        const int len = l.dims[axis];
        const int a1 = (axis + 1) % 3, a2 = (axis + 2) % 3;
        f.resize(len);
        d.resize(len);
        for (int i2 = 0; i2 < l.dims[a2]; ++i2)
            for (int i1 = 0; i1 < l.dims[a1]; ++i1) {
                Index3 c{};
                c[a1] = i1;
                c[a2] = i2;
                for (int q = 0; q < len; ++q) {
                    c[axis] = q;
                    f[q] = dist2_[l.linear(c)];
                }
                edt_1d(f, d, v, z);
                for (int q = 0; q < len; ++q) {
                    c[axis] = q;
                    dist2_[l.linear(c)] = d[q];
                }
            }
    }
}

std::size_t FreeSpaceIndex::nearest_free_cell(const Vec3& p) const
{
    const auto& l = grid_.layout();
    Index3 c0 = l.cell_of(p);
    for (int a = 0; a < 3; ++a) c0[a] = std::clamp(c0[a], 0, l.dims[a] - 1);

    // Triangle inequality through c0's own nearest free center bounds the search.
    const double bound = std::sqrt(static_cast<double>(dist2_[l.linear(c0)])) * l.unit + (p - l.center(c0)).norm();
    double best_d2 = std::numeric_limits<double>::infinity();
    std::size_t best = 0;
    const int max_ring = std::max({l.dims[0], l.dims[1], l.dims[2]});
    for (int r = 0; r <= max_ring; ++r) {
        const double lower = (r - 0.5) * l.unit;
        if (lower > bound + 1e-9) break;
        if (r > 0 && lower > 0.0 && lower * lower > best_d2 + 1e-12) break;
        Index3 lo{}, hi{};
        for (int a = 0; a < 3; ++a) {
            lo[a] = std::max(c0[a] - r, 0);
            hi[a] = std::min(c0[a] + r, l.dims[a] - 1);
        }
        for (int z = lo[2]; z <= hi[2]; ++z)
            for (int y = lo[1]; y <= hi[1]; ++y)
                for (int x = lo[0]; x <= hi[0]; ++x) {
                    const int cheb = std::max({std::abs(x - c0[0]), std::abs(y - c0[1]), std::abs(z - c0[2])});
                    if (cheb != r) continue;
                    const Index3 cell{x, y, z};
                    const auto li = l.linear(cell);
                    if (grid_.get(li)) continue;
                    const double d2 = (p - l.center(cell)).squaredNorm();
                    if (d2 < best_d2 || (d2 == best_d2 && li < best)) {
                        best_d2 = d2;
                        best = li;
                    }
                }
    }
    return best;
}

Vec3 FreeSpaceIndex::nearest_free_center(const Vec3& p) const
{
    const auto& l = grid_.layout();
    return l.center(l.unlinear(nearest_free_cell(p)));
}

Vec3 nearest_free_voxel(const Vec3& p, const OccupancyGrid& grid) { return FreeSpaceIndex(grid).nearest_free_center(p); }

}  // namespace occu
