// SPDX-FileCopyrightText: 2026 occu authors
// SPDX-License-Identifier: Apache-2.0

#include "occu/field.hpp"

#include <algorithm>
#include <cmath>

namespace occu {

void FieldParams::validate() const
{
    if (!(stiffness >= 0.0)) throw Error("field: stiffness must be >= 0");
    if (!(inner >= 0.0)) throw Error("field: inner threshold must be >= 0");
    if (!(falloff >= 0.0)) throw Error("field: falloff must be >= 0");
    if (!(max_fraction > 0.0 && max_fraction <= 1.0)) throw Error("field: max_fraction must be in (0, 1]");
}

double norm_of(const Vec3& v, NormOrder order)
{
    switch (order) {
    case NormOrder::L1: return v.lpNorm<1>();
    case NormOrder::L2: return v.norm();
    case NormOrder::LInf: return v.lpNorm<Eigen::Infinity>();
    }
    return v.norm();
}

Vec3 field_correction(const Vec3& velocity, const Vec3& position, std::span<const Vec3> centers,
                      const FieldParams& params)
{
    const double speed = velocity.norm();
    if (speed == 0.0 || centers.empty()) return Vec3::Zero();
    const double reach = params.influence_radius();

    // Every term is -k * velocity * cos * gate, so accumulate the scalar.
    double scale = 0.0;
    for (const auto& c : centers) {
        const Vec3 v = c - position;
        const double d = norm_of(v, params.norm);
        if (d <= params.inner || d >= reach) continue;
        const double vn = v.norm();
        const double cosine = velocity.dot(v) / (speed * vn);
        if (cosine <= 0.0) continue;
        const double gate = 1.0 / (d - params.inner) - params.falloff;
        if (gate <= 0.0) continue;
        scale += cosine * gate;
    }
    scale *= params.stiffness;
    scale = std::min(scale, params.max_fraction);
    return -scale * velocity;
}

RegulationOptions default_regulation(const Skeleton& skeleton, double dt)
{
    RegulationOptions o;
    o.dt = dt;
    for (std::size_t i = 1; i < kEndEffectors.size(); ++i) o.joints.push_back(skeleton.landmark(kEndEffectors[i]));
    return o;
}

RegulationResult apply_regulation(Prediction& prediction, const PoseState& current, std::span<const Vec3> centers,
                                  const FieldParams& params, const RegulationOptions& options)
{
    params.validate();
    auto& next = prediction.next;
    RegulationResult result;
    result.deltas.reserve(options.joints.size() + 1);
    result.velocities.reserve(options.joints.size() + 1);

    const Vec3 root_velocity = next.root_velocity;
    const Vec3 root_delta = field_correction(root_velocity, current.root_position, centers, params);
    result.deltas.push_back(root_delta);
    result.velocities.push_back(root_velocity);

    double keep = 1.0;
    const auto ratio = [](const Vec3& v, const Vec3& dv) {
        const double s = v.norm();
        return s > 0.0 ? (v + dv).norm() / s : 1.0;
    };
    if (root_delta != Vec3::Zero()) keep = std::min(keep, ratio(root_velocity, root_delta));

    for (int j : options.joints) {
        if (j < 0 || j >= static_cast<int>(next.joint_velocities.size()) ||
            j >= static_cast<int>(current.joint_positions.size()))
            throw Error("apply_regulation: joint index out of range");
        const Vec3 v = next.joint_velocities[j];
        const Vec3 dv = field_correction(v, current.joint_positions[j], centers, params);
        result.deltas.push_back(dv);
        result.velocities.push_back(v);
        if (dv == Vec3::Zero()) continue;
        next.joint_velocities[j] = v + dv;
        if (j < static_cast<int>(next.joint_positions.size())) next.joint_positions[j] += dv * options.dt;
        keep = std::min(keep, ratio(v, dv));
    }

    if (!options.couple_to_root) {
        next.root_velocity += root_delta;
        next.root_position += root_delta * options.dt;
    } else if (keep < 1.0) {
        const Vec3 change = root_velocity * (keep - 1.0);
        next.root_velocity += change;
        next.root_position += change * options.dt;
    }
    return result;
}

}  // namespace occu
