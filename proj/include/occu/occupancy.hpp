// SPDX-FileCopyrightText: 2026 occu authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "occu/grid.hpp"
#include "occu/motion.hpp"

namespace occu {

// ---------------------------------------------------------------------------
// Motion occupancy (MOB construction)

struct VoxelizeOptions {
    int margin_cells = 1;
    /// Surface sample spacing as a fraction of the unit.
    double sample_fraction = 0.5;
    int threads = 1;
};

/// Swept body volume Ô of a motion. The lattice is anchored at integer
/// multiples of `unit`, so grids built from related motions align cell-for-cell.
OccupancyGrid voxelize_motion(const MotionSequence& seq, const std::vector<CapsuleBody>& bodies, double unit,
                              const VoxelizeOptions& options = {});
OccupancyGrid voxelize_motion(const MotionSequence& seq, double unit, const VoxelizeOptions& options = {});

/// Pseudo-scene O = complement(Ô) of a motion.
OccupancyGrid motion_scene(const MotionSequence& seq, double unit, const VoxelizeOptions& options = {});

// ---------------------------------------------------------------------------
// Scene providers

class OccupancyProvider {
public:
    virtual ~OccupancyProvider() = default;
    virtual bool is_occupied(const Vec3& p, double t) const = 0;
    /// Center-sampled voxelization of the region at time t.
    virtual OccupancyGrid snapshot(double t, const GridLayout& region) const;
    virtual std::string describe() const = 0;
    /// Distinct occupied scene voxels containing at least one sample. The
    /// default resolves voxels on the world lattice of cell size `unit`.
    virtual std::size_t penetrated_cells(std::span<const Vec3> samples, double t, double unit) const;
};

class EmptyProvider final : public OccupancyProvider {
public:
    bool is_occupied(const Vec3&, double) const override { return false; }
    std::string describe() const override { return "empty"; }
};

class StaticGridProvider final : public OccupancyProvider {
public:
    explicit StaticGridProvider(std::shared_ptr<const OccupancyGrid> grid, std::string label = "static");
    bool is_occupied(const Vec3& p, double) const override { return grid_->occupied_at(p); }
    std::string describe() const override { return label_; }
    /// Uses the grid's own voxels; `unit` is ignored.
    std::size_t penetrated_cells(std::span<const Vec3> samples, double t, double unit) const override;
    const OccupancyGrid& grid() const { return *grid_; }

private:
    std::shared_ptr<const OccupancyGrid> grid_;
    std::string label_;
};

/// Union of yaw-rotated boxes (walls, pillars, slabs).
class BoxSceneProvider final : public OccupancyProvider {
public:
    struct Box {
        Vec3 center;
        Vec3 half_extents;
        double yaw = 0.0;
    };
    explicit BoxSceneProvider(std::vector<Box> boxes) : boxes_(std::move(boxes)) {}
    bool is_occupied(const Vec3& p, double t) const override;
    std::string describe() const override { return "boxes:" + std::to_string(boxes_.size()); }
    const std::vector<Box>& boxes() const { return boxes_; }

private:
    std::vector<Box> boxes_;
};

/// Wings spanning from a vertical axis out to `radius`, rotating about +Z.
struct RevolvingDoorParams {
    Vec3 center = Vec3::Zero();
    double radius = 1.5;
    double thickness = 0.35;
    double height = 2.4;
    int wings = 3;
    /// Signed angular speed in rad/s; negative turns clockwise seen from above.
    double angular_speed = -deg2rad(15.0);
    double phase = 0.0;
};

class RevolvingDoorProvider final : public OccupancyProvider {
public:
    explicit RevolvingDoorProvider(const RevolvingDoorParams& params = {}) : params_(params) {}
    bool is_occupied(const Vec3& p, double t) const override;
    std::string describe() const override { return "door"; }
    const RevolvingDoorParams& params() const { return params_; }

private:
    RevolvingDoorParams params_;
};

/// Abrupt scene change: `before` until switch_time, `after` from then on.
class ScheduledSwapProvider final : public OccupancyProvider {
public:
    ScheduledSwapProvider(std::shared_ptr<const OccupancyProvider> before, std::shared_ptr<const OccupancyProvider> after,
                          double switch_time);
    bool is_occupied(const Vec3& p, double t) const override;
    std::string describe() const override { return "swap:" + std::to_string(switch_time_); }

private:
    std::shared_ptr<const OccupancyProvider> before_;
    std::shared_ptr<const OccupancyProvider> after_;
    double switch_time_;
};

/// A time-varying provider evaluated at a fixed time.
class FrozenProvider final : public OccupancyProvider {
public:
    FrozenProvider(std::shared_ptr<const OccupancyProvider> inner, double time) : inner_(std::move(inner)), time_(time) {}
    bool is_occupied(const Vec3& p, double) const override { return inner_->is_occupied(p, time_); }
    std::string describe() const override { return "frozen:" + inner_->describe(); }

private:
    std::shared_ptr<const OccupancyProvider> inner_;
    double time_;
};

// ---------------------------------------------------------------------------
// Canonical occupancy c_o

struct CanonicalOccupancyConfig {
    int size = 25;
    double unit = 0.08;
    /// Grid center distance ahead of the root; negative selects size * unit / 4.
    double forward_offset = -1.0;
    /// Test the 8 cell corners in addition to the center.
    bool conservative = false;

    double offset() const { return forward_offset < 0.0 ? size * unit / 4.0 : forward_offset; }
    void validate() const;
};

/// Layout of c_o in canonical coordinates: centered `offset` ahead of the
/// root along +X and vertically on the root height.
GridLayout canonical_layout(const CanonicalOccupancyConfig& cfg, double root_height);

/// c_o as a grid in canonical coordinates (layout from canonical_layout).
OccupancyGrid sample_canonical_occupancy(const OccupancyProvider& provider, const CanonicalFrame& frame, double t,
                                         double root_height, const CanonicalOccupancyConfig& cfg);

/// Centers of set cells, in the grid's own coordinates.
std::vector<Vec3> occupied_centers(const OccupancyGrid& grid);

std::uint64_t occupancy_hash(const OccupancyGrid& grid);

// ---------------------------------------------------------------------------
// Nearest free voxel

/// Nearest-free-center queries backed by an exact Euclidean distance
/// transform. Ties resolve to the smallest linear index.
class FreeSpaceIndex {
public:
    explicit FreeSpaceIndex(const OccupancyGrid& grid);

    const OccupancyGrid& grid() const { return grid_; }
    /// Squared distance (in cells) from a cell center to the nearest free center.
    std::int64_t cell_distance2(std::size_t linear) const { return dist2_[linear]; }
    /// Linear index of the nearest free cell to p.
    std::size_t nearest_free_cell(const Vec3& p) const;
    Vec3 nearest_free_center(const Vec3& p) const;

private:
    OccupancyGrid grid_;
    std::vector<std::int64_t> dist2_;
};

Vec3 nearest_free_voxel(const Vec3& p, const OccupancyGrid& grid);

// ---------------------------------------------------------------------------
// Basis point set

struct BpsBasis {
    std::vector<Vec3> points;
    std::uint64_t seed = 0;

    /// n points uniform in the unit ball.
    static BpsBasis generate(int n = 1024, std::uint64_t seed = 0);
};

/// Distance from each basis point (scaled by radius, placed at the pelvis in
/// the canonical frame) to the nearest occupied voxel center of the scene
/// voxelized at `unit` on the world lattice; capped at 2 * radius.
std::vector<double> bps_encode(const OccupancyProvider& provider, const CanonicalFrame& frame, double t,
                               double pelvis_height, const BpsBasis& basis, double radius = 1.0,
                               double unit = 0.08);

}  // namespace occu
