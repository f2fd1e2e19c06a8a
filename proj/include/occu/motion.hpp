// SPDX-FileCopyrightText: 2026 occu authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "occu/geometry.hpp"

namespace occu {

enum class Landmark : int {
    Root = 0,
    LeftShoulder,
    RightShoulder,
    LeftHip,
    RightHip,
    LeftFoot,
    RightFoot,
    LeftHand,
    RightHand,
};

inline constexpr int kLandmarkCount = 9;
const char* landmark_name(Landmark l);
std::optional<Landmark> landmark_from_name(const std::string& name);

/// End-effector order used by targets and histories: root, hands, feet.
inline constexpr std::array<Landmark, 5> kEndEffectors = {
    Landmark::Root, Landmark::LeftHand, Landmark::RightHand, Landmark::LeftFoot, Landmark::RightFoot};

/// Kinematic tree with capsule radii. Joint 0 is the root; every other joint
/// has a parent with a smaller index, so a forward sweep visits parents first.
/// radii[i] is the radius of the bone ending at joint i (radii[0] is unused).
class Skeleton {
public:
    Skeleton(std::vector<int> parents, std::vector<Vec3> offsets, std::vector<double> radii,
             std::array<int, kLandmarkCount> landmarks);

    /// 17-joint capsule humanoid, Z-up, facing +X, root 0.93 m above ground.
    static std::shared_ptr<const Skeleton> humanoid();

    int joint_count() const { return static_cast<int>(parents_.size()); }
    int parent(int joint) const { return parents_[joint]; }
    const Vec3& offset(int joint) const { return offsets_[joint]; }
    double radius(int joint) const { return radii_[joint]; }
    int landmark(Landmark l) const { return landmarks_[static_cast<int>(l)]; }

    const std::vector<int>& parents() const { return parents_; }
    const std::vector<Vec3>& offsets() const { return offsets_; }
    const std::vector<double>& radii() const { return radii_; }
    const std::array<int, kLandmarkCount>& landmarks() const { return landmarks_; }

    bool operator==(const Skeleton& other) const;

private:
    std::vector<int> parents_;
    std::vector<Vec3> offsets_;
    std::vector<double> radii_;
    std::array<int, kLandmarkCount> landmarks_;
};

struct Pose {
    Vec3 root_position = Vec3::Zero();
    Rot6d root_orientation = identity_rot6d();
    std::vector<Rot6d> joint_rotations;
    std::array<bool, 2> foot_contact{false, false};

    static Pose rest(const Skeleton& skeleton, const Vec3& root_position = Vec3::Zero(), double yaw = 0.0);
};

/// Height under which a foot joint counts as grounded.
inline constexpr double kContactHeight = 0.05;

/// Recomputes foot contact flags from forward kinematics.
void update_contacts(Pose& pose, const Skeleton& skeleton, double contact_height = kContactHeight);

class MotionSequence {
public:
    MotionSequence(std::shared_ptr<const Skeleton> skeleton, std::vector<Pose> frames, double fps = 30.0);

    const Skeleton& skeleton() const { return *skeleton_; }
    const std::shared_ptr<const Skeleton>& skeleton_ptr() const { return skeleton_; }
    const std::vector<Pose>& frames() const { return frames_; }
    std::size_t size() const { return frames_.size(); }
    double fps() const { return fps_; }

private:
    std::shared_ptr<const Skeleton> skeleton_;
    std::vector<Pose> frames_;
    double fps_;
};

// ---------------------------------------------------------------------------
// Kinematics

std::vector<Vec3> forward_kinematics(const Pose& pose, const Skeleton& skeleton);

/// World rotation of every joint frame; joint positions use the parent's.
std::vector<Mat3> world_rotations(const Pose& pose, const Skeleton& skeleton);

/// Root-anchored, heading-aligned frame. Canonical coordinates place the
/// root at the XY origin looking down +X; heights are left untouched.
struct CanonicalFrame {
    Vec3 origin = Vec3::Zero();
    double yaw = 0.0;

    Vec3 to_canonical_point(const Vec3& p) const;
    Vec3 to_world_point(const Vec3& p) const;
    Vec3 to_canonical_direction(const Vec3& d) const;
    Vec3 to_world_direction(const Vec3& d) const;
    Mat3 to_canonical_rotation(const Mat3& r) const;
    Mat3 to_world_rotation(const Mat3& r) const;
    double to_canonical_yaw(double yaw_world) const;
};

/// Heading from shoulder and hip landmarks. When the projected right vector
/// is degenerate, falls back to previous_yaw; throws if none is given.
double facing_yaw(const std::vector<Vec3>& joints, const Skeleton& skeleton,
                  std::optional<double> previous_yaw = std::nullopt);

CanonicalFrame canonical_frame(const Pose& pose, const Skeleton& skeleton,
                               std::optional<double> previous_yaw = std::nullopt);

enum class ValueKind { Point, Direction };

/// Canonicalizes a batch of tagged 3-vectors in place.
void canonicalize(std::span<Vec3> values, ValueKind kind, const CanonicalFrame& frame);
void decanonicalize(std::span<Vec3> values, ValueKind kind, const CanonicalFrame& frame);

struct FrameVelocities {
    Vec3 root = Vec3::Zero();
    std::vector<Vec3> joints;
    double yaw_rate = 0.0;
};

/// Backward differences scaled by fps; frame 0 copies frame 1.
std::vector<FrameVelocities> finite_velocities(const MotionSequence& seq);

// ---------------------------------------------------------------------------
// Body volume

struct Capsule {
    Vec3 a;
    Vec3 b;
    double radius;

    double distance_to_axis(const Vec3& p) const;
    bool contains(const Vec3& p) const { return distance_to_axis(p) <= radius; }
    double volume() const;
};

struct CapsuleBody {
    std::vector<Capsule> capsules;

    bool contains(const Vec3& p) const;
    /// Axis-aligned bounds of all capsules, including their radii.
    std::pair<Vec3, Vec3> bounds() const;
};

CapsuleBody body_geometry(const Pose& pose, const Skeleton& skeleton);
CapsuleBody body_geometry(const std::vector<Vec3>& joints, const Skeleton& skeleton);

bool point_in_body(const Vec3& point, const CapsuleBody& body);

/// Points on every capsule surface with neighbour spacing at most `spacing`.
void sample_capsule_surface(const Capsule& c, double spacing, std::vector<Vec3>& out);

/// Surface samples of all capsules plus the joint positions themselves.
std::vector<Vec3> body_samples(const std::vector<Vec3>& joints, const CapsuleBody& body, double spacing);

}  // namespace occu
