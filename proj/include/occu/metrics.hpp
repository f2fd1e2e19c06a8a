// SPDX-FileCopyrightText: 2026 occu authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "occu/controller.hpp"

namespace occu {

struct SuccessThresholds {
    /// Mean distance over the present target points, meters (exclusive).
    double distance = 0.20;
    /// Penetrated voxels at the qualifying frame (exclusive).
    std::size_t max_penetrated = 50;
};

struct SuccessResult {
    bool success = false;
    /// Minimum over frames of the mean target distance (m); infinity without targets.
    double min_distance = 0.0;
    /// First qualifying frame index / rate.
    std::optional<double> time;
};

/// Mean distance from the end-effectors to the present target points.
double target_distance(const std::vector<Vec3>& joints, const Skeleton& skeleton, const TargetPoints& target);

SuccessResult success(const EpisodeResult& result, const SuccessThresholds& thresholds = {});

/// Percentage of frames where some foot is below contact_height and moves
/// horizontally faster than speed_threshold (strict). Speeds are backward
/// differences of recorded joint positions; frame 0 uses frame 1's.
double foot_sliding(const EpisodeResult& result, double contact_height = kContactHeight,
                    double speed_threshold = 0.075);

/// Mean recorded penetrated-voxel count per frame.
double penetration(const EpisodeResult& result);
/// Recomputes per-frame counts against a provider, evaluated at each frame's time.
std::vector<std::size_t> penetration_counts(const EpisodeResult& result, const OccupancyProvider& provider,
                                            double unit = 0.08);
/// Per-frame counts for a recorded motion, frame i at time i / fps.
std::vector<std::size_t> penetration_counts(const MotionSequence& seq, const OccupancyProvider& provider,
                                            double unit = 0.08);

/// Edit distance with real penalty. Throws only when both inputs are empty.
double erp_distance(std::span<const Vec3> a, std::span<const Vec3> b, const Vec3& gap = Vec3::Zero());

/// Root trajectories of the result and a reference, both expressed in the
/// canonical frame of the result's first pose, compared with erp_distance.
double trajectory_erp(const EpisodeResult& result, const std::vector<Vec3>& reference);

struct Cylinder {
    double radius = 0.25;
    double height = 1.7;
};

enum class FeasibilityReason { Ok, OutOfGrid, StartBlocked, GoalBlocked, NoPath };
const char* to_string(FeasibilityReason r);

struct FeasibilityResult {
    bool feasible = false;
    FeasibilityReason reason = FeasibilityReason::NoPath;
    /// Column cells (x, y) from start to goal at the start layer.
    std::vector<Index3> path;
};

/// Column (i, j) is traversable when every voxel whose center lies within
/// `radius` horizontally of the column center, in layers layer .. layer +
/// ceil(height / u) - 1, is free. Voxels outside the grid count as free.
std::vector<bool> traversable_columns(const OccupancyGrid& grid, int layer, const Cylinder& cylinder);

/// A* over traversable columns at the start's layer; 8-connected, no corner cutting.
FeasibilityResult path_feasibility(const OccupancyGrid& grid, const Vec3& start, const Vec3& goal,
                                   const Cylinder& cylinder = {});

struct EpisodeMetrics {
    std::string name;
    bool success = false;
    double dt_cm = 0.0;
    std::optional<double> time;
    double fs = 0.0;
    double pen = 0.0;
    std::optional<double> erp;
};

struct MetricReport {
    std::size_t episodes = 0;
    double success_rate = 0.0;
    double dt_cm = 0.0;
    std::optional<double> time;
    double fs = 0.0;
    double pen = 0.0;
    std::optional<double> erp;
    std::vector<EpisodeMetrics> per_episode;
};

EpisodeMetrics evaluate_episode(const std::string& name, const EpisodeResult& result,
                                const std::vector<Vec3>* reference = nullptr,
                                const SuccessThresholds& thresholds = {});

/// Averages per-episode metrics; Time and ERP over the episodes that have them.
MetricReport aggregate(std::vector<EpisodeMetrics> episodes);

std::string report_json(const MetricReport& report);
/// Aligned table: Suc., DT, Time, FS, PEN, ERP.
std::string report_table(const MetricReport& report);

/// Wraps a recorded motion as an episode (rate = fps) whose target is the
/// final frame's end-effectors.
EpisodeResult episode_from_motion(const MotionSequence& seq, const std::string& provider_label);

}  // namespace occu
