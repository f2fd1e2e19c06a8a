// SPDX-FileCopyrightText: 2026 occu authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "occu/geometry.hpp"

namespace occu {

using Index3 = std::array<int, 3>;

/// Axis-aligned lattice: cell (x, y, z) spans origin + [x, x+1) * unit per axis.
struct GridLayout {
    Index3 dims{1, 1, 1};
    Vec3 origin = Vec3::Zero();
    double unit = 1.0;

    void validate() const;
    std::size_t cell_count() const
    {
        return static_cast<std::size_t>(dims[0]) * static_cast<std::size_t>(dims[1]) *
               static_cast<std::size_t>(dims[2]);
    }
    std::size_t linear(const Index3& c) const
    {
        return static_cast<std::size_t>(c[0]) +
               static_cast<std::size_t>(dims[0]) *
                   (static_cast<std::size_t>(c[1]) + static_cast<std::size_t>(dims[1]) * static_cast<std::size_t>(c[2]));
    }
    Index3 unlinear(std::size_t i) const;
    bool in_bounds(const Index3& c) const
    {
        return c[0] >= 0 && c[1] >= 0 && c[2] >= 0 && c[0] < dims[0] && c[1] < dims[1] && c[2] < dims[2];
    }
    /// floor((p - origin) / unit); may be out of bounds.
    Index3 cell_of(const Vec3& p) const;
    Vec3 center(const Index3& c) const;
    Vec3 corner(const Index3& c) const;
    bool operator==(const GridLayout& o) const { return dims == o.dims && origin == o.origin && unit == o.unit; }
};

/// Binary voxel volume, bit-packed LSB-first by linear index.
class OccupancyGrid {
public:
    OccupancyGrid() = default;
    explicit OccupancyGrid(const GridLayout& layout, bool fill = false);

    const GridLayout& layout() const { return layout_; }
    const Index3& dims() const { return layout_.dims; }
    const Vec3& origin() const { return layout_.origin; }
    double unit() const { return layout_.unit; }
    std::size_t cell_count() const { return layout_.cell_count(); }

    bool get(std::size_t linear) const { return (bits_[linear >> 3] >> (linear & 7)) & 1u; }
    bool get(const Index3& c) const { return get(layout_.linear(c)); }
    void set(std::size_t linear, bool v)
    {
        const auto mask = static_cast<std::uint8_t>(1u << (linear & 7));
        if (v)
            bits_[linear >> 3] |= mask;
        else
            bits_[linear >> 3] &= static_cast<std::uint8_t>(~mask);
    }
    void set(const Index3& c, bool v) { set(layout_.linear(c), v); }

    /// Occupancy at a world point; points outside the volume are free.
    bool occupied_at(const Vec3& p) const;

    std::size_t count() const;
    OccupancyGrid& operator|=(const OccupancyGrid& other);
    bool operator==(const OccupancyGrid& o) const { return layout_ == o.layout_ && bits_ == o.bits_; }

    const std::vector<std::uint8_t>& bytes() const { return bits_; }
    std::vector<std::uint8_t>& bytes() { return bits_; }

private:
    void clear_padding();

    GridLayout layout_;
    std::vector<std::uint8_t> bits_;
};

/// O = 1 - Ô, same layout.
OccupancyGrid complement(const OccupancyGrid& grid);

/// Sub-volume [lo, lo + dims) copied into a new grid; cells outside the source are free.
OccupancyGrid crop(const OccupancyGrid& grid, const Index3& lo, const Index3& dims);

/// Scalar field sampled at cell centers, same lattice conventions as OccupancyGrid.
struct ScalarGrid {
    GridLayout layout;
    std::vector<float> values;

    void validate() const;
    float at(const Index3& c) const { return values[layout.linear(c)]; }
};

OccupancyGrid sdf_to_occupancy(const ScalarGrid& sdf, double iso = 0.0);

// Binary formats: "MOBG" / "MSDF", u16 version, 3 x u32 dims, 3 x f64 origin,
// f64 unit, then the payload; all little-endian.
inline constexpr std::uint16_t kGridFormatVersion = 1;

void write_grid(std::ostream& out, const OccupancyGrid& grid);
OccupancyGrid read_grid(std::istream& in);
void write_grid(const std::filesystem::path& path, const OccupancyGrid& grid);
OccupancyGrid read_grid(const std::filesystem::path& path);
std::string grid_to_bytes(const OccupancyGrid& grid);

void write_sdf(std::ostream& out, const ScalarGrid& sdf);
ScalarGrid read_sdf(std::istream& in);
ScalarGrid read_sdf(const std::filesystem::path& path);

/// One cube (8 vertices, 12 triangles) per occupied voxel, ASCII PLY.
std::string grid_to_ply(const OccupancyGrid& grid);
std::string grid_to_obj(const OccupancyGrid& grid);

}  // namespace occu
