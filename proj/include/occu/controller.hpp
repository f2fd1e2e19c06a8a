// SPDX-FileCopyrightText: 2026 occu authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "occu/field.hpp"
#include "occu/occupancy.hpp"
#include "occu/state.hpp"

namespace occu {

struct WindowConfig {
    int history = 1;
    int future = 1;
    double rate = 10.0;

    void validate() const;
    double dt() const { return 1.0 / rate; }
};

// ---------------------------------------------------------------------------
// Encoders

/// x^t for frame t of a recorded sequence; velocities from finite_velocities.
PoseState encode_pose_state(const MotionSequence& seq, std::size_t t);

/// h^t over frames t-w .. t, canonical to frame t. Frames before 0 repeat frame 0.
HistoryState encode_history(const MotionSequence& seq, std::size_t t, int w);

/// World positions of root, hands and feet (kEndEffectors order).
TargetPoints target_points(const Pose& pose, const Skeleton& skeleton);

/// Canonicalizes world target points; absent entries stay absent.
TargetPoints encode_target(const TargetPoints& world, const CanonicalFrame& frame);
TargetPoints decode_target(const TargetPoints& canonical, const CanonicalFrame& frame);

/// Facing of a target from its hand and foot points; nullopt unless all four
/// are present and not degenerate.
std::optional<double> target_facing(const TargetPoints& points);

// ---------------------------------------------------------------------------
// Policies

class Policy {
public:
    virtual ~Policy() = default;
    virtual Prediction predict(const HistoryState& h, const PoseState& x, const ControlSignals& c) = 0;
    /// Called once before each episode.
    virtual void reset(std::uint64_t /*seed*/) {}
    virtual std::string name() const = 0;
};

struct BaselineLimits {
    double max_speed = 1.4;
    double max_turn_rate = deg2rad(120.0);
    /// Within this root-goal distance the heading blends toward the target's facing.
    double blend_radius = 1.0;

    void validate() const;
};

/// Rigid holonomic stand-in for a learned controller: the root heads straight
/// for the root target, joint rotations are held.
class BaselinePolicy final : public Policy {
public:
    BaselinePolicy(std::shared_ptr<const Skeleton> skeleton, BaselineLimits limits = {}, WindowConfig window = {});
    Prediction predict(const HistoryState& h, const PoseState& x, const ControlSignals& c) override;
    std::string name() const override { return "baseline"; }

private:
    std::shared_ptr<const Skeleton> skeleton_;
    BaselineLimits limits_;
    WindowConfig window_;
};

/// Holds the current state forever.
class ZeroPolicy final : public Policy {
public:
    explicit ZeroPolicy(WindowConfig window = {}) : window_(window) {}
    Prediction predict(const HistoryState& h, const PoseState& x, const ControlSignals& c) override;
    std::string name() const override { return "zero"; }

private:
    WindowConfig window_;
};

/// Baseline prediction followed by field regulation from c_o when present.
Prediction baseline_policy(const HistoryState& h, const PoseState& x, const ControlSignals& c,
                           const Skeleton& skeleton, const BaselineLimits& limits = {},
                           const FieldParams& field = {}, const WindowConfig& window = {});

// ---------------------------------------------------------------------------
// Rollout

struct WorldState {
    Vec3 position = Vec3::Zero();
    double facing = 0.0;
};

struct TargetEvent {
    double time = 0.0;
    TargetPoints points;
};

/// Target active at time t: the last event with time <= t.
const TargetEvent* active_target(const std::vector<TargetEvent>& schedule, double t);

struct FrameRecord {
    double time = 0.0;
    Pose pose;
    std::vector<Vec3> joints;
    WorldState world;
    Vec3 root_velocity = Vec3::Zero();
    double yaw_rate = 0.0;
    std::vector<Vec3> joint_velocities;
    /// |dp| per regulated joint for the step leaving this frame, root first.
    std::vector<double> corrections;
    std::uint64_t occupancy_hash = 0;
    std::size_t penetrated = 0;
};

struct EpisodeResult {
    std::shared_ptr<const Skeleton> skeleton;
    double rate = 10.0;
    std::uint64_t seed = 0;
    std::string provider;
    std::string policy;
    bool regulation = true;
    std::vector<TargetEvent> schedule;
    std::vector<FrameRecord> frames;
};

struct RolloutOptions {
    WindowConfig window;
    CanonicalOccupancyConfig occupancy;
    FieldParams field;
    bool regulate = true;
    /// Regulate every joint instead of root, hands and feet.
    bool regulate_all_joints = false;
    /// Lattice size for per-frame penetration counts.
    double penetration_unit = 0.08;
};

EpisodeResult rollout(Policy& policy, const Pose& initial, std::shared_ptr<const Skeleton> skeleton,
                      const OccupancyProvider& provider, const std::vector<TargetEvent>& schedule, double duration,
                      std::uint64_t seed, const RolloutOptions& options = {});

/// Joints plus capsule surface samples at half the lattice size.
std::vector<Vec3> penetration_samples(const std::vector<Vec3>& joints, const Skeleton& skeleton, double unit);

// ---------------------------------------------------------------------------
// Episode files

/// JSON-lines: one header object, then one object per frame.
std::string episode_to_jsonl(const EpisodeResult& result);
EpisodeResult episode_from_jsonl(const std::string& text);

}  // namespace occu
