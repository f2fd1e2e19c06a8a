// SPDX-FileCopyrightText: 2026 occu authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "occu/motion.hpp"

namespace occu {

/// Motion document:
///   {"skeleton": {"parents", "offsets", "radii", "landmarks": {name: index}},
///    "fps", "frames": [{"root_pos": [3], "root_rot6d": [6], "joint_rot6d": [j][6]}]}
/// Contact flags are derived on load.
std::string motion_to_json(const MotionSequence& seq, int indent = -1);
MotionSequence motion_from_json(const std::string& text);

// JSON helpers shared by the file formats; malformed input throws FormatError.
nlohmann::json vec_to_json(const Vec3& v);
Vec3 vec_from_json(const nlohmann::json& j, const std::string& what);
Rot6d rot_from_json(const nlohmann::json& j, const std::string& what);
nlohmann::json skeleton_to_json(const Skeleton& skeleton);
std::shared_ptr<const Skeleton> skeleton_from_json(const nlohmann::json& j);

void write_motion(const std::filesystem::path& path, const MotionSequence& seq);
MotionSequence read_motion(const std::filesystem::path& path);

}  // namespace occu
