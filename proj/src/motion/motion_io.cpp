// SPDX-FileCopyrightText: 2026 occu authors
// SPDX-License-Identifier: Apache-2.0

#include "occu/motion_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "occu/io_util.hpp"

namespace occu {

using nlohmann::json;

json vec_to_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

Vec3 vec_from_json(const json& j, const std::string& what)
{
    if (!j.is_array() || j.size() != 3) throw FormatError(what + ": expected 3 numbers");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

Rot6d rot_from_json(const json& j, const std::string& what)
{
    if (!j.is_array() || j.size() != 6) throw FormatError(what + ": expected 6 numbers");
    Rot6d r{};
    for (int i = 0; i < 6; ++i) r[i] = j[i].get<double>();
    return r;
}

json skeleton_to_json(const Skeleton& sk)
{
    json skel;
    skel["parents"] = sk.parents();
    json offsets = json::array();
    for (const auto& o : sk.offsets()) offsets.push_back(vec_to_json(o));
    skel["offsets"] = offsets;
    skel["radii"] = sk.radii();
    json lm = json::object();
    for (int i = 0; i < kLandmarkCount; ++i) lm[landmark_name(static_cast<Landmark>(i))] = sk.landmarks()[i];
    skel["landmarks"] = lm;
    return skel;
}

std::shared_ptr<const Skeleton> skeleton_from_json(const json& js)
{
    try {
        auto parents = js.at("parents").get<std::vector<int>>();
        std::vector<Vec3> offsets;
        for (const auto& o : js.at("offsets")) offsets.push_back(vec_from_json(o, "skeleton offset"));
        auto radii = js.at("radii").get<std::vector<double>>();
        std::array<int, kLandmarkCount> landmarks{};
        const auto& jl = js.at("landmarks");
        for (int i = 0; i < kLandmarkCount; ++i) {
            const char* name = landmark_name(static_cast<Landmark>(i));
            if (!jl.contains(name)) throw FormatError(std::string("skeleton: missing landmark ") + name);
            landmarks[i] = jl.at(name).get<int>();
        }
        return std::make_shared<const Skeleton>(std::move(parents), std::move(offsets), std::move(radii), landmarks);
    } catch (const json::exception& e) {
        throw FormatError(std::string("skeleton: ") + e.what());
    }
}

std::string motion_to_json(const MotionSequence& seq, int indent)
{
    json frames = json::array();
    for (const auto& f : seq.frames()) {
        json jf;
        jf["root_pos"] = vec_to_json(f.root_position);
        jf["root_rot6d"] = f.root_orientation;
        jf["joint_rot6d"] = f.joint_rotations;
        frames.push_back(std::move(jf));
    }
    json doc;
    doc["skeleton"] = skeleton_to_json(seq.skeleton());
    doc["fps"] = seq.fps();
    doc["frames"] = frames;
    return doc.dump(indent);
}

MotionSequence motion_from_json(const std::string& text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("motion: ") + e.what());
    }
    try {
        auto skeleton = skeleton_from_json(doc.at("skeleton"));
        const double fps = doc.at("fps").get<double>();
        const auto& jframes = doc.at("frames");
        if (!jframes.is_array()) throw FormatError("motion: frames must be an array");
        std::vector<Pose> frames;
        frames.reserve(jframes.size());
        const auto n = static_cast<std::size_t>(skeleton->joint_count());
        for (std::size_t i = 0; i < jframes.size(); ++i) {
            const auto& jf = jframes[i];
            const auto tag = "frame " + std::to_string(i);
            Pose p;
            p.root_position = vec_from_json(jf.at("root_pos"), tag + " root_pos");
            p.root_orientation = rot_from_json(jf.at("root_rot6d"), tag + " root_rot6d");
            const auto& jr = jf.at("joint_rot6d");
            if (!jr.is_array() || jr.size() != n)
                throw FormatError(tag + ": joint_rot6d length " + std::to_string(jr.size()) + " != " +
                                  std::to_string(n));
            for (const auto& r : jr) p.joint_rotations.push_back(rot_from_json(r, tag + " joint_rot6d"));
            update_contacts(p, *skeleton);
            frames.push_back(std::move(p));
        }
        return MotionSequence(std::move(skeleton), std::move(frames), fps);
    } catch (const json::exception& e) {
        throw FormatError(std::string("motion: ") + e.what());
    }
}

void write_motion(const std::filesystem::path& path, const MotionSequence& seq)
{
    write_file_atomic(path, motion_to_json(seq));
}

MotionSequence read_motion(const std::filesystem::path& path) { return motion_from_json(read_file(path)); }

}  // namespace occu
