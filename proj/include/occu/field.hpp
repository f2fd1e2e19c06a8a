// SPDX-FileCopyrightText: 2026 occu authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <limits>
#include <span>
#include <vector>

#include "occu/state.hpp"

namespace occu {

enum class NormOrder { L1, L2, LInf };

/// Occupancy field knobs. Influence of a voxel center at a-norm distance d
/// is max(0, 1/(d - inner) - falloff) for d > inner, zero otherwise; it
/// vanishes from d = inner + 1/falloff outward.
struct FieldParams {
    // Calibrated so 1.4 m/s halves 0.4 m in front of a flat wall seen through a default c_o.
    double stiffness = 7.17e-4;
    NormOrder norm = NormOrder::L2;
    double inner = 0.20;
    double falloff = 1.0 / 0.8;
    /// Largest correction as a fraction of the input speed.
    double max_fraction = 1.0;

    void validate() const;
    double influence_radius() const
    {
        return falloff > 0.0 ? inner + 1.0 / falloff : std::numeric_limits<double>::infinity();
    }
};

double norm_of(const Vec3& v, NormOrder order);

/// Velocity correction for one joint moving at `velocity` from `position`
/// among occupied voxel centers. Always a non-negative multiple of -velocity.
Vec3 field_correction(const Vec3& velocity, const Vec3& position, std::span<const Vec3> centers,
                      const FieldParams& params);

struct RegulationOptions {
    /// Joints corrected besides the root; default hands and feet.
    std::vector<int> joints;
    /// Slow the root by the strongest relative deceleration among regulated
    /// joints, so a braking limb brakes the body that carries it.
    bool couple_to_root = true;
    double dt = 0.1;
};

RegulationOptions default_regulation(const Skeleton& skeleton, double dt = 0.1);

struct RegulationResult {
    /// Raw corrections, root first then RegulationOptions::joints.
    std::vector<Vec3> deltas;
    /// Velocities the corrections were computed for, same order.
    std::vector<Vec3> velocities;
};

/// Adds field corrections to the predicted root and joint velocities and
/// moves the predicted positions by correction * dt. Corrections use the
/// current joint positions and c_o's occupied centers (both canonical to t).
RegulationResult apply_regulation(Prediction& prediction, const PoseState& current, std::span<const Vec3> centers,
                                  const FieldParams& params, const RegulationOptions& options);

}  // namespace occu
