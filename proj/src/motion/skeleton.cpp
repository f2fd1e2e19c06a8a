// SPDX-FileCopyrightText: 2026 occu authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <string>

#include "occu/motion.hpp"

namespace occu {

namespace {
constexpr std::array<const char*, kLandmarkCount> kLandmarkNames = {
    "root", "left_shoulder", "right_shoulder", "left_hip", "right_hip",
    "left_foot", "right_foot", "left_hand", "right_hand"};
}

const char* landmark_name(Landmark l) { return kLandmarkNames[static_cast<int>(l)]; }

std::optional<Landmark> landmark_from_name(const std::string& name)
{
    for (int i = 0; i < kLandmarkCount; ++i)
        if (name == kLandmarkNames[i]) return static_cast<Landmark>(i);
    return std::nullopt;
}

Skeleton::Skeleton(std::vector<int> parents, std::vector<Vec3> offsets, std::vector<double> radii,
                   std::array<int, kLandmarkCount> landmarks)
    : parents_(std::move(parents)), offsets_(std::move(offsets)), radii_(std::move(radii)), landmarks_(landmarks)
{
    const auto n = parents_.size();
    if (n == 0) throw Error("skeleton: no joints");
    if (offsets_.size() != n || radii_.size() != n)
        throw Error("skeleton: parents/offsets/radii length mismatch");
    if (parents_[0] != -1) throw Error("skeleton: joint 0 must be the root (parent -1)");
    for (std::size_t i = 1; i < n; ++i) {
        if (parents_[i] < 0 || parents_[i] >= static_cast<int>(i))
            throw Error("skeleton: joint " + std::to_string(i) + " parent must precede it");
        if (!(radii_[i] > 0.0) || !std::isfinite(radii_[i]))
            throw Error("skeleton: bone radius must be positive at joint " + std::to_string(i));
    }
    for (const auto& o : offsets_)
        if (!o.allFinite()) throw Error("skeleton: non-finite offset");
    for (int l : landmarks_)
        if (l < 0 || l >= static_cast<int>(n)) throw Error("skeleton: landmark index out of range");
}

std::shared_ptr<const Skeleton> Skeleton::humanoid()
{
    constexpr double kTorso = 0.14, kLimb = 0.05, kHead = 0.10;
    // clang-format off
    std::vector<int> parents = {
        -1,  // 0 pelvis
        0,   // 1 spine
        1,   // 2 chest
        2,   // 3 neck
        3,   // 4 head
        2,   // 5 left shoulder
        5,   // 6 left elbow
        6,   // 7 left hand
        2,   // 8 right shoulder
        8,   // 9 right elbow
        9,   // 10 right hand
        0,   // 11 left hip
        11,  // 12 left knee
        12,  // 13 left foot
        0,   // 14 right hip
        14,  // 15 right knee
        15,  // 16 right foot
    };
    std::vector<Vec3> offsets = {
        {0, 0, 0},
        {0, 0, 0.25},   {0, 0, 0.25},   {0, 0, 0.15},  {0, 0, 0.12},
        {0, 0.18, 0.08},  {0, 0.02, -0.28},  {0, 0, -0.25},
        {0, -0.18, 0.08}, {0, -0.02, -0.28}, {0, 0, -0.25},
        {0, 0.10, -0.05},  {0, 0, -0.42}, {0, 0, -0.42},
        {0, -0.10, -0.05}, {0, 0, -0.42}, {0, 0, -0.42},
    };
    std::vector<double> radii = {
        kTorso,
        kTorso, kTorso, kLimb, kHead,
        kLimb, kLimb, kLimb,
        kLimb, kLimb, kLimb,
        kLimb, kLimb, kLimb,
        kLimb, kLimb, kLimb,
    };
    // clang-format on
    std::array<int, kLandmarkCount> landmarks{};
    landmarks[static_cast<int>(Landmark::Root)] = 0;
    landmarks[static_cast<int>(Landmark::LeftShoulder)] = 5;
    landmarks[static_cast<int>(Landmark::RightShoulder)] = 8;
    landmarks[static_cast<int>(Landmark::LeftHip)] = 11;
    landmarks[static_cast<int>(Landmark::RightHip)] = 14;
    landmarks[static_cast<int>(Landmark::LeftFoot)] = 13;
    landmarks[static_cast<int>(Landmark::RightFoot)] = 16;
    landmarks[static_cast<int>(Landmark::LeftHand)] = 7;
    landmarks[static_cast<int>(Landmark::RightHand)] = 10;
    static const auto instance =
        std::make_shared<const Skeleton>(std::move(parents), std::move(offsets), std::move(radii), landmarks);
    return instance;
}

bool Skeleton::operator==(const Skeleton& other) const
{
    return parents_ == other.parents_ && offsets_ == other.offsets_ && radii_ == other.radii_ &&
           landmarks_ == other.landmarks_;
}

Pose Pose::rest(const Skeleton& skeleton, const Vec3& root_position, double yaw)
{
    Pose p;
    p.root_position = root_position;
    p.root_orientation = matrix_to_rot6d(rot_z(yaw));
    p.joint_rotations.assign(skeleton.joint_count(), identity_rot6d());
    update_contacts(p, skeleton);
    return p;
}

void update_contacts(Pose& pose, const Skeleton& skeleton, double contact_height)
{
    const auto joints = forward_kinematics(pose, skeleton);
    pose.foot_contact[0] = joints[skeleton.landmark(Landmark::LeftFoot)].z() < contact_height;
    pose.foot_contact[1] = joints[skeleton.landmark(Landmark::RightFoot)].z() < contact_height;
}

MotionSequence::MotionSequence(std::shared_ptr<const Skeleton> skeleton, std::vector<Pose> frames, double fps)
    : skeleton_(std::move(skeleton)), frames_(std::move(frames)), fps_(fps)
{
    if (!skeleton_) throw Error("motion: missing skeleton");
    if (frames_.size() < 2) throw Error("motion: at least 2 frames required");
    if (!(fps_ > 0.0) || !std::isfinite(fps_)) throw Error("motion: fps must be positive");
    const auto j = static_cast<std::size_t>(skeleton_->joint_count());
    for (std::size_t i = 0; i < frames_.size(); ++i)
        if (frames_[i].joint_rotations.size() != j)
            throw Error("motion: frame " + std::to_string(i) + " joint count does not match skeleton");
}

}  // namespace occu
