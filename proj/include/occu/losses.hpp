// SPDX-FileCopyrightText: 2026 occu authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <span>
#include <vector>

#include "occu/occupancy.hpp"
#include "occu/state.hpp"

namespace occu {

struct LossWeights {
    double penetration = 2.0;
    double field = 1.0;

    void validate() const;
};

/// Flat future-state vector with a per-entry rotation tag.
struct StateVector {
    std::vector<double> values;
    std::vector<bool> is_rotation;
};

/// Flattens a prediction; rotation entries are the 6D blocks.
StateVector flatten(const Prediction& p);

/// L1 over rotation entries plus squared L2 over the rest, summed.
double loss_mix(const StateVector& pred, const StateVector& gt);
/// d loss_mix / d pred.
std::vector<double> loss_mix_gradient(const StateVector& pred, const StateVector& gt);

/// Sum over occupied joints of the distance to the nearest free voxel center.
double loss_pen(std::span<const Vec3> joints, const FreeSpaceIndex& scene);
double loss_pen(std::span<const Vec3> joints, const OccupancyGrid& scene);

/// Speeds below this floor drop the ratio term.
inline constexpr double kMinFieldSpeed = 1e-6;

/// Sum over joints of (|dv| / |v|)^2 + |v|^2. With root_only, only the first
/// entry (the root) is counted.
double loss_field(std::span<const Vec3> deltas, std::span<const Vec3> velocities, bool root_only = false);

struct FieldLossGradient {
    std::vector<Vec3> d_deltas;
    std::vector<Vec3> d_velocities;
};
FieldLossGradient loss_field_gradient(std::span<const Vec3> deltas, std::span<const Vec3> velocities,
                                      bool root_only = false);

struct LossComponents {
    double mix = 0.0;
    double pen = 0.0;
    double field = 0.0;
};

double loss_total(const LossComponents& c, const LossWeights& w = {});

using ScalarFunction = std::function<double(std::span<const double>)>;
using GradientFunction = std::function<std::vector<double>(std::span<const double>)>;

/// Central-difference check; returns max_i |g_fd - g_an| / max(1, |g_fd|).
double gradient_check(const ScalarFunction& f, const GradientFunction& analytic, std::span<const double> x0,
                      double h = 1e-5);

}  // namespace occu
