// SPDX-FileCopyrightText: 2026 occu authors
// SPDX-License-Identifier: Apache-2.0

#include "occu/grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

namespace occu {

void GridLayout::validate() const
{
    for (int d : dims)
        if (d < 1) throw Error("grid: every dimension must be >= 1");
    if (!(unit > 0.0) || !std::isfinite(unit)) throw Error("grid: unit must be positive");
    if (!origin.allFinite()) throw Error("grid: origin must be finite");
}

Index3 GridLayout::unlinear(std::size_t i) const
{
    const auto dx = static_cast<std::size_t>(dims[0]);
    const auto dy = static_cast<std::size_t>(dims[1]);
    return {static_cast<int>(i % dx), static_cast<int>((i / dx) % dy), static_cast<int>(i / (dx * dy))};
}

Index3 GridLayout::cell_of(const Vec3& p) const
{
    Index3 c{};
    for (int a = 0; a < 3; ++a) {
        const double f = std::floor((p[a] - origin[a]) / unit);
        // Clamp before the cast so far-away points stay well-defined.
        c[a] = static_cast<int>(std::clamp(f, -1.0e9, 1.0e9));
    }
    return c;
}

Vec3 GridLayout::center(const Index3& c) const
{
    return origin + unit * Vec3(c[0] + 0.5, c[1] + 0.5, c[2] + 0.5);
}

Vec3 GridLayout::corner(const Index3& c) const { return origin + unit * Vec3(c[0], c[1], c[2]); }

OccupancyGrid::OccupancyGrid(const GridLayout& layout, bool fill) : layout_(layout)
{
    layout_.validate();
    bits_.assign((layout_.cell_count() + 7) / 8, fill ? 0xFF : 0x00);
    clear_padding();
}

void OccupancyGrid::clear_padding()
{
    const auto n = layout_.cell_count();
    if (n % 8 != 0 && !bits_.empty()) bits_.back() &= static_cast<std::uint8_t>((1u << (n % 8)) - 1u);
}

bool OccupancyGrid::occupied_at(const Vec3& p) const
{
    const auto c = layout_.cell_of(p);
    return layout_.in_bounds(c) && get(c);
}

std::size_t OccupancyGrid::count() const
{
    return std::accumulate(bits_.begin(), bits_.end(), std::size_t{0},
                           [](std::size_t acc, std::uint8_t b) { return acc + std::popcount(b); });
}

OccupancyGrid& OccupancyGrid::operator|=(const OccupancyGrid& other)
{
    if (!(layout_ == other.layout_)) throw Error("grid: OR of grids with different layouts");
    for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] |= other.bits_[i];
    return *this;
}

OccupancyGrid complement(const OccupancyGrid& grid)
{
    OccupancyGrid out = grid;
    for (auto& b : out.bytes()) b = static_cast<std::uint8_t>(~b);
    const auto n = grid.cell_count();
    if (n % 8 != 0) out.bytes().back() &= static_cast<std::uint8_t>((1u << (n % 8)) - 1u);
    return out;
}

OccupancyGrid crop(const OccupancyGrid& grid, const Index3& lo, const Index3& dims)
{
    GridLayout l;
    l.dims = dims;
    l.unit = grid.unit();
    l.origin = grid.layout().corner(lo);
    OccupancyGrid out(l);
    for (int z = 0; z < dims[2]; ++z)
        for (int y = 0; y < dims[1]; ++y)
            for (int x = 0; x < dims[0]; ++x) {
                const Index3 src{lo[0] + x, lo[1] + y, lo[2] + z};
                if (grid.layout().in_bounds(src) && grid.get(src)) out.set(Index3{x, y, z}, true);
            }
    return out;
}

void ScalarGrid::validate() const
{
    layout.validate();
    if (values.size() != layout.cell_count())
        throw FormatError("sdf: value count " + std::to_string(values.size()) + " does not match dims (" +
                          std::to_string(layout.cell_count()) + " cells)");
}

OccupancyGrid sdf_to_occupancy(const ScalarGrid& sdf, double iso)
{
    sdf.validate();
    OccupancyGrid out(sdf.layout);
    for (std::size_t i = 0; i < sdf.values.size(); ++i)
        if (static_cast<double>(sdf.values[i]) <= iso) out.set(i, true);
    return out;
}

}  // namespace occu
