// SPDX-FileCopyrightText: 2026 occu authors
// SPDX-License-Identifier: Apache-2.0

#include "occu/synthetic.hpp"

#include <cmath>
#include <random>

#include "occu/scenarios.hpp"

namespace occu {

namespace {

constexpr double kStandHeight = 0.93;
constexpr double kThigh = 0.42;

enum Joint { kNeck = 3, kLeftShoulder = 5, kLeftElbow = 6, kRightShoulder = 8, kRightElbow = 9,
             kLeftHip = 11, kLeftKnee = 12, kRightHip = 14, kRightKnee = 15 };

// Rotation about the local Y axis; positive swings a downward limb backward.
Rot6d pitch(double angle) { return matrix_to_rot6d(axis_angle(Vec3::UnitY(), angle)); }

double smooth_bump(double s) { return std::pow(std::sin(kPi * s), 2); }

struct Draw {
    double heading;
    Vec3 start;
    double amplitude;
    double turn_radius;
    double turn_sign;
};

Draw draw(std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    Draw d;
    d.heading = uniform_in(rng, -kPi, kPi);
    d.start = Vec3(uniform_in(rng, -1, 1), uniform_in(rng, -1, 1), 0.0);
    d.amplitude = uniform_in(rng, 0.8, 1.2);
    d.turn_radius = uniform_in(rng, 1.0, 2.0);
    d.turn_sign = unit_uniform(rng) < 0.5 ? -1.0 : 1.0;
    return d;
}

// Alternating leg and arm swing of a gait cycle at phase phi.
void gait(Pose& p, double phi, double amplitude)
{
    const double s = std::sin(phi);
    p.joint_rotations[kLeftHip] = pitch(-0.35 * amplitude * s);
    p.joint_rotations[kRightHip] = pitch(0.35 * amplitude * s);
    p.joint_rotations[kLeftKnee] = pitch(0.5 * amplitude * std::max(0.0, -std::cos(phi)));
    p.joint_rotations[kRightKnee] = pitch(0.5 * amplitude * std::max(0.0, std::cos(phi)));
    p.joint_rotations[kLeftShoulder] = pitch(0.3 * amplitude * s);
    p.joint_rotations[kRightShoulder] = pitch(-0.3 * amplitude * s);
    p.joint_rotations[kLeftElbow] = pitch(-0.2 * amplitude);
    p.joint_rotations[kRightElbow] = pitch(-0.2 * amplitude);
}

}  // namespace

const char* to_string(MotionKind kind)
{
    switch (kind) {
    case MotionKind::Walk: return "walk";
    case MotionKind::Turn: return "turn";
    case MotionKind::Sit: return "sit";
    case MotionKind::Crawl: return "crawl";
    case MotionKind::Reach: return "reach";
    }
    return "unknown";
}

std::optional<MotionKind> motion_kind_from_string(const std::string& name)
{
    for (auto k : {MotionKind::Walk, MotionKind::Turn, MotionKind::Sit, MotionKind::Crawl, MotionKind::Reach})
        if (name == to_string(k)) return k;
    return std::nullopt;
}

void SyntheticMotionSpec::validate() const
{
    if (!(duration > 0.0) || !std::isfinite(duration)) throw Error("synthetic motion: duration must be positive");
    if (!(speed >= 0.0) || !std::isfinite(speed)) throw Error("synthetic motion: speed must be >= 0");
    if (!(fps > 0.0) || !std::isfinite(fps)) throw Error("synthetic motion: fps must be positive");
    if (std::llround(duration * fps) < 2) throw Error("synthetic motion: fewer than 2 frames");
}

MotionKind mob_kind_for_seed(std::uint64_t seed)
{
    static constexpr MotionKind kCycle[] = {MotionKind::Walk, MotionKind::Turn, MotionKind::Crawl, MotionKind::Sit};
    return kCycle[seed % 4];
}

MotionSequence generate_motion(const SyntheticMotionSpec& spec, std::shared_ptr<const Skeleton> skeleton)
{
    spec.validate();
    if (!skeleton || skeleton->joint_count() != Skeleton::humanoid()->joint_count())
        throw Error("synthetic motion: generators need the humanoid skeleton");
    const auto d = draw(spec.seed);
    const auto n = static_cast<std::size_t>(std::llround(spec.duration * spec.fps));
    const double dt = 1.0 / spec.fps;
    // One gait cycle covers two 0.7 m steps.
    const double cycle_rate = 2.0 * kPi * spec.speed / 1.4;

    std::vector<Pose> frames;
    frames.reserve(n);
    Vec3 position = d.start;
    double heading = d.heading;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) * dt;
        const double s = t / spec.duration;
        const Vec3 forward(std::cos(heading), std::sin(heading), 0.0);
        Pose p = Pose::rest(*skeleton, Vec3::Zero(), heading);
        switch (spec.kind) {
        case MotionKind::Walk:
            p.root_position = d.start + Vec3(std::cos(d.heading), std::sin(d.heading), 0.0) * spec.speed * t;
            p.root_position.z() = kStandHeight;
            gait(p, cycle_rate * t, d.amplitude);
            break;
        case MotionKind::Turn:
            p.root_position = position + Vec3(0, 0, kStandHeight);
            gait(p, cycle_rate * t, d.amplitude);
            heading += d.turn_sign * spec.speed / d.turn_radius * dt;
            position += Vec3(std::cos(heading), std::sin(heading), 0.0) * spec.speed * dt;
            break;
        case MotionKind::Sit: {
            // Thighs swing to horizontal while the root drops and backs off
            // so the feet stay put.
            const double a = kPi / 2 * smooth_bump(s);
            const double b = smooth_bump(s);
            p.root_position = d.start - forward * (kThigh * std::sin(a)) +
                              Vec3(0, 0, kStandHeight - kThigh * (1.0 - std::cos(a)));
            p.joint_rotations[kLeftHip] = pitch(-a);
            p.joint_rotations[kRightHip] = pitch(-a);
            p.joint_rotations[kLeftKnee] = pitch(a);
            p.joint_rotations[kRightKnee] = pitch(a);
            p.joint_rotations[kLeftShoulder] = pitch(-0.4 * d.amplitude * b);
            p.joint_rotations[kRightShoulder] = pitch(-0.4 * d.amplitude * b);
            break;
        }
        case MotionKind::Crawl: {
            // Torso horizontal, thighs and upper arms vertical, shins trailing.
            const double phi = cycle_rate * t;
            const double o = 0.25 * d.amplitude * std::sin(phi);
            p.root_position = d.start + forward * (0.4 * spec.speed * t) + Vec3(0, 0, 0.52);
            p.root_orientation = matrix_to_rot6d(rot_z(heading) * axis_angle(Vec3::UnitY(), kPi / 2));
            p.joint_rotations[kLeftHip] = pitch(-kPi / 2 + o);
            p.joint_rotations[kRightHip] = pitch(-kPi / 2 - o);
            p.joint_rotations[kLeftKnee] = pitch(kPi / 2);
            p.joint_rotations[kRightKnee] = pitch(kPi / 2);
            p.joint_rotations[kLeftShoulder] = pitch(-kPi / 2 - o);
            p.joint_rotations[kRightShoulder] = pitch(-kPi / 2 + o);
            p.joint_rotations[kNeck] = pitch(-kPi / 4);
            break;
        }
        case MotionKind::Reach: {
            const double b = smooth_bump(s);
            p.root_position = d.start + Vec3(0, 0, kStandHeight);
            p.root_orientation = matrix_to_rot6d(rot_z(heading + 0.3 * d.turn_sign * b));
            p.joint_rotations[kRightShoulder] = pitch(-(kPi / 2 + 0.4 * d.amplitude) * b);
            p.joint_rotations[kRightElbow] = pitch(-0.3 * b);
            break;
        }
        }
        update_contacts(p, *skeleton);
        frames.push_back(std::move(p));
    }
    return MotionSequence(std::move(skeleton), std::move(frames), spec.fps);
}

}  // namespace occu
