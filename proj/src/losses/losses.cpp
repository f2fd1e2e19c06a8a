// SPDX-FileCopyrightText: 2026 occu authors
// SPDX-License-Identifier: Apache-2.0

#include "occu/losses.hpp"

#include <cmath>

namespace occu {

void LossWeights::validate() const
{
    if (!(penetration >= 0.0) || !(field >= 0.0)) throw Error("loss weights must be >= 0");
}

namespace {

void push_vec(StateVector& s, const Vec3& v)
{
    for (int a = 0; a < 3; ++a) {
        s.values.push_back(v[a]);
        s.is_rotation.push_back(false);
    }
}

void push_rot(StateVector& s, const Rot6d& r)
{
    for (double x : r) {
        s.values.push_back(x);
        s.is_rotation.push_back(true);
    }
}

void push_scalar(StateVector& s, double x, bool rotation)
{
    s.values.push_back(x);
    s.is_rotation.push_back(rotation);
}

void check_shapes(const StateVector& pred, const StateVector& gt)
{
    if (pred.values.size() != gt.values.size() || pred.values.size() != pred.is_rotation.size() ||
        gt.values.size() != gt.is_rotation.size() || pred.is_rotation != gt.is_rotation)
        throw Error("loss_mix: shape mismatch between prediction and ground truth");
}

}  // namespace

StateVector flatten(const Prediction& p)
{
    StateVector s;
    const auto& n = p.next;
    push_vec(s, n.root_position);
    push_rot(s, n.root_orientation);
    for (const auto& v : n.joint_positions) push_vec(s, v);
    for (const auto& r : n.joint_rotations) push_rot(s, r);
    push_vec(s, n.root_velocity);
    for (const auto& v : n.joint_velocities) push_vec(s, v);
    push_scalar(s, n.yaw_rate, true);
    const auto& f = p.future;
    for (const auto& v : f.root_positions) push_vec(s, v);
    for (const auto& frame : f.joint_positions)
        for (const auto& v : frame) push_vec(s, v);
    for (const auto& frame : f.joint_rotations)
        for (const auto& r : frame) push_rot(s, r);
    for (const auto& v : f.root_velocities) push_vec(s, v);
    for (const auto& frame : f.joint_velocities)
        for (const auto& v : frame) push_vec(s, v);
    for (double y : f.yaw_rates) push_scalar(s, y, true);
    return s;
}

double loss_mix(const StateVector& pred, const StateVector& gt)
{
    check_shapes(pred, gt);
    double sum = 0.0;
    for (std::size_t i = 0; i < pred.values.size(); ++i) {
        const double r = pred.values[i] - gt.values[i];
        sum += pred.is_rotation[i] ? std::abs(r) : r * r;
    }
    return sum;
}

std::vector<double> loss_mix_gradient(const StateVector& pred, const StateVector& gt)
{
    check_shapes(pred, gt);
    std::vector<double> g(pred.values.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double r = pred.values[i] - gt.values[i];
        g[i] = pred.is_rotation[i] ? static_cast<double>((r > 0.0) - (r < 0.0)) : 2.0 * r;
    }
    return g;
}

double loss_pen(std::span<const Vec3> joints, const FreeSpaceIndex& scene)
{
    double sum = 0.0;
    for (const auto& p : joints)
        if (scene.grid().occupied_at(p)) sum += (p - scene.nearest_free_center(p)).norm();
    return sum;
}

double loss_pen(std::span<const Vec3> joints, const OccupancyGrid& scene)
{
    return loss_pen(joints, FreeSpaceIndex(scene));
}

double loss_field(std::span<const Vec3> deltas, std::span<const Vec3> velocities, bool root_only)
{
    if (deltas.size() != velocities.size()) throw Error("loss_field: joint set mismatch");
    const std::size_t n = root_only ? std::min<std::size_t>(1, deltas.size()) : deltas.size();
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double speed2 = velocities[j].squaredNorm();
        if (std::sqrt(speed2) >= kMinFieldSpeed) sum += deltas[j].squaredNorm() / speed2;
        sum += speed2;
    }
    return sum;
}

FieldLossGradient loss_field_gradient(std::span<const Vec3> deltas, std::span<const Vec3> velocities, bool root_only)
{
    if (deltas.size() != velocities.size()) throw Error("loss_field: joint set mismatch");
    const std::size_t n = root_only ? std::min<std::size_t>(1, deltas.size()) : deltas.size();
    FieldLossGradient g;
    g.d_deltas.assign(deltas.size(), Vec3::Zero());
    g.d_velocities.assign(deltas.size(), Vec3::Zero());
    for (std::size_t j = 0; j < n; ++j) {
        const Vec3& v = velocities[j];
        const double speed2 = v.squaredNorm();
        g.d_velocities[j] = 2.0 * v;
        if (std::sqrt(speed2) >= kMinFieldSpeed) {
            g.d_deltas[j] = 2.0 * deltas[j] / speed2;
            g.d_velocities[j] -= 2.0 * deltas[j].squaredNorm() / (speed2 * speed2) * v;
        }
    }
    return g;
}

double loss_total(const LossComponents& c, const LossWeights& w)
{
    w.validate();
    return c.mix + w.penetration * c.pen + w.field * c.field;
}

double gradient_check(const ScalarFunction& f, const GradientFunction& analytic, std::span<const double> x0, double h)
{
    if (!(h > 0.0)) throw Error("gradient_check: step must be positive");
    const auto g = analytic(x0);
    if (g.size() != x0.size()) throw Error("gradient_check: analytic gradient has the wrong size");
    std::vector<double> x(x0.begin(), x0.end());
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double orig = x[i];
        x[i] = orig + h;
        const double fp = f(x);
        x[i] = orig - h;
        const double fm = f(x);
        x[i] = orig;
        if (!std::isfinite(fp) || !std::isfinite(fm) || !std::isfinite(g[i]))
            throw Error("gradient_check: non-finite evaluation at coordinate " + std::to_string(i));
        const double fd = (fp - fm) / (2.0 * h);
        worst = std::max(worst, std::abs(fd - g[i]) / std::max(1.0, std::abs(fd)));
    }
    return worst;
}

}  // namespace occu
