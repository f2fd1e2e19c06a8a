// SPDX-FileCopyrightText: 2026 occu authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <array>
#include <cmath>

#include "occu/io_util.hpp"
#include "occu/occupancy.hpp"

namespace occu {

OccupancyGrid OccupancyProvider::snapshot(double t, const GridLayout& region) const
{
    OccupancyGrid g(region);
    for (std::size_t i = 0; i < g.cell_count(); ++i)
        if (is_occupied(region.center(region.unlinear(i)), t)) g.set(i, true);
    return g;
}

std::size_t OccupancyProvider::penetrated_cells(std::span<const Vec3> samples, double t, double unit) const
{
    if (!(unit > 0.0)) throw Error("penetrated_cells: unit must be positive");
    std::vector<std::array<std::int64_t, 3>> cells;
    cells.reserve(samples.size());
    for (const auto& p : samples)
        cells.push_back({static_cast<std::int64_t>(std::floor(p.x() / unit)),
                         static_cast<std::int64_t>(std::floor(p.y() / unit)),
                         static_cast<std::int64_t>(std::floor(p.z() / unit))});
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
    std::size_t n = 0;
    for (const auto& c : cells) {
        const Vec3 center((c[0] + 0.5) * unit, (c[1] + 0.5) * unit, (c[2] + 0.5) * unit);
        if (is_occupied(center, t)) ++n;
    }
    return n;
}

std::size_t StaticGridProvider::penetrated_cells(std::span<const Vec3> samples, double, double) const
{
    const auto& l = grid_->layout();
    std::vector<std::size_t> hit;
    for (const auto& p : samples) {
        const auto c = l.cell_of(p);
        if (l.in_bounds(c) && grid_->get(c)) hit.push_back(l.linear(c));
    }
    std::sort(hit.begin(), hit.end());
    return static_cast<std::size_t>(std::unique(hit.begin(), hit.end()) - hit.begin());
}

StaticGridProvider::StaticGridProvider(std::shared_ptr<const OccupancyGrid> grid, std::string label)
    : grid_(std::move(grid)), label_(std::move(label))
{
    if (!grid_) throw Error("static provider: null grid");
}

bool BoxSceneProvider::is_occupied(const Vec3& p, double) const
{
    for (const auto& b : boxes_) {
        const Vec3 d = rot_z(-b.yaw) * (p - b.center);
        if (std::abs(d.x()) <= b.half_extents.x() && std::abs(d.y()) <= b.half_extents.y() &&
            std::abs(d.z()) <= b.half_extents.z())
            return true;
    }
    return false;
}

bool RevolvingDoorProvider::is_occupied(const Vec3& p, double t) const
{
    const auto& d = params_;
    if (p.z() < d.center.z() || p.z() > d.center.z() + d.height) return false;
    const double rx = p.x() - d.center.x();
    const double ry = p.y() - d.center.y();
    if (rx * rx + ry * ry > d.radius * d.radius) return false;
    const double half = 0.5 * d.thickness;
    for (int k = 0; k < d.wings; ++k) {
        const double phi = d.phase + d.angular_speed * t + 2.0 * kPi * k / d.wings;
        const double c = std::cos(phi), s = std::sin(phi);
        const double along = rx * c + ry * s;
        const double across = -rx * s + ry * c;
        // Wings are slabs from the axis out to the rim; the axis post is their union.
        if (along >= -half && along <= d.radius && std::abs(across) <= half) return true;
    }
    return false;
}

ScheduledSwapProvider::ScheduledSwapProvider(std::shared_ptr<const OccupancyProvider> before,
                                             std::shared_ptr<const OccupancyProvider> after, double switch_time)
    : before_(std::move(before)), after_(std::move(after)), switch_time_(switch_time)
{
    if (!before_ || !after_) throw Error("swap provider: null scene");
}

bool ScheduledSwapProvider::is_occupied(const Vec3& p, double t) const
{
    return t < switch_time_ ? before_->is_occupied(p, t) : after_->is_occupied(p, t);
}

void CanonicalOccupancyConfig::validate() const
{
    if (size < 1) throw Error("canonical occupancy: size must be >= 1");
    if (!(unit > 0.0)) throw Error("canonical occupancy: unit must be positive");
}

GridLayout canonical_layout(const CanonicalOccupancyConfig& cfg, double root_height)
{
    cfg.validate();
    const double half = 0.5 * cfg.size * cfg.unit;
    GridLayout l;
    l.dims = {cfg.size, cfg.size, cfg.size};
    l.unit = cfg.unit;
    l.origin = Vec3(cfg.offset() - half, -half, root_height - half);
    return l;
}

OccupancyGrid sample_canonical_occupancy(const OccupancyProvider& provider, const CanonicalFrame& frame, double t,
                                         double root_height, const CanonicalOccupancyConfig& cfg)
{
    const auto layout = canonical_layout(cfg, root_height);
    OccupancyGrid g(layout);
    for (std::size_t i = 0; i < g.cell_count(); ++i) {
        const auto cell = layout.unlinear(i);
        bool hit = provider.is_occupied(frame.to_world_point(layout.center(cell)), t);
        if (!hit && cfg.conservative) {
            for (int k = 0; k < 8 && !hit; ++k) {
                const Index3 corner{cell[0] + (k & 1), cell[1] + ((k >> 1) & 1), cell[2] + ((k >> 2) & 1)};
                hit = provider.is_occupied(frame.to_world_point(layout.corner(corner)), t);
            }
        }
        if (hit) g.set(i, true);
    }
    return g;
}

std::vector<Vec3> occupied_centers(const OccupancyGrid& grid)
{
    std::vector<Vec3> out;
    out.reserve(grid.count());
    for (std::size_t i = 0; i < grid.cell_count(); ++i)
        if (grid.get(i)) out.push_back(grid.layout().center(grid.layout().unlinear(i)));
    return out;
}

std::uint64_t occupancy_hash(const OccupancyGrid& grid)
{
    const auto& b = grid.bytes();
    return fnv1a64(std::string_view(reinterpret_cast<const char*>(b.data()), b.size()));
}

}  // namespace occu
