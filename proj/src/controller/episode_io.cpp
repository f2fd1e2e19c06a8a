// SPDX-FileCopyrightText: 2026 occu authors
// SPDX-License-Identifier: Apache-2.0

#include <sstream>

#include <json.hpp>

#include "occu/controller.hpp"
#include "occu/io_util.hpp"
#include "occu/motion_io.hpp"

namespace occu {

using nlohmann::json;

namespace {

constexpr const char* kEpisodeFormat = "occu-episode";
constexpr int kEpisodeVersion = 1;

json points_json(const TargetPoints& p)
{
    json out = json::array();
    for (const auto& v : p) out.push_back(v ? vec_to_json(*v) : json(nullptr));
    return out;
}

TargetPoints points_from_json(const json& j)
{
    if (!j.is_array() || j.size() != 5) throw FormatError("episode: target needs 5 entries");
    TargetPoints out;
    for (std::size_t i = 0; i < 5; ++i)
        if (!j[i].is_null()) out[i] = vec_from_json(j[i], "episode target");
    return out;
}

json vecs_json(const std::vector<Vec3>& vs)
{
    json out = json::array();
    for (const auto& v : vs) out.push_back(vec_to_json(v));
    return out;
}

std::vector<Vec3> vecs_from_json(const json& j, const std::string& what)
{
    std::vector<Vec3> out;
    for (const auto& v : j) out.push_back(vec_from_json(v, what));
    return out;
}

}  // namespace

std::string episode_to_jsonl(const EpisodeResult& r)
{
    if (!r.skeleton) throw Error("episode: missing skeleton");
    std::string out;
    json head;
    head["format"] = kEpisodeFormat;
    head["version"] = kEpisodeVersion;
    head["skeleton"] = skeleton_to_json(*r.skeleton);
    head["rate"] = r.rate;
    head["seed"] = r.seed;
    head["provider"] = r.provider;
    head["policy"] = r.policy;
    head["regulation"] = r.regulation;
    json sched = json::array();
    for (const auto& e : r.schedule) sched.push_back({{"time", e.time}, {"points", points_json(e.points)}});
    head["schedule"] = sched;
    head["frames"] = r.frames.size();
    out += head.dump();
    out += '\n';

    for (const auto& f : r.frames) {
        json j;
        j["t"] = f.time;
        j["root_pos"] = vec_to_json(f.pose.root_position);
        j["root_rot6d"] = f.pose.root_orientation;
        j["joint_rot6d"] = f.pose.joint_rotations;
        j["contact"] = {f.pose.foot_contact[0], f.pose.foot_contact[1]};
        j["joints"] = vecs_json(f.joints);
        j["world"] = {f.world.position.x(), f.world.position.y(), f.world.position.z(), f.world.facing};
        j["root_vel"] = vec_to_json(f.root_velocity);
        j["yaw_rate"] = f.yaw_rate;
        j["joint_vel"] = vecs_json(f.joint_velocities);
        j["dv"] = f.corrections;
        j["co_hash"] = hex64(f.occupancy_hash);
        j["pen"] = f.penetrated;
        out += j.dump();
        out += '\n';
    }
    return out;
}

EpisodeResult episode_from_jsonl(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    EpisodeResult r;
    std::size_t expected = 0;
    try {
        if (!std::getline(in, line)) throw FormatError("episode: empty file");
        ++line_no;
        const auto head = json::parse(line);
        if (head.value("format", "") != kEpisodeFormat) throw FormatError("episode: not an episode file");
        if (head.at("version").get<int>() != kEpisodeVersion) throw FormatError("episode: unsupported version");
        r.skeleton = skeleton_from_json(head.at("skeleton"));
        r.rate = head.at("rate").get<double>();
        r.seed = head.at("seed").get<std::uint64_t>();
        r.provider = head.at("provider").get<std::string>();
        r.policy = head.at("policy").get<std::string>();
        r.regulation = head.at("regulation").get<bool>();
        for (const auto& e : head.at("schedule"))
            r.schedule.push_back({e.at("time").get<double>(), points_from_json(e.at("points"))});
        expected = head.at("frames").get<std::size_t>();

        const auto n = static_cast<std::size_t>(r.skeleton->joint_count());
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            const auto j = json::parse(line);
            FrameRecord f;
            f.time = j.at("t").get<double>();
            f.pose.root_position = vec_from_json(j.at("root_pos"), "root_pos");
            f.pose.root_orientation = rot_from_json(j.at("root_rot6d"), "root_rot6d");
            for (const auto& q : j.at("joint_rot6d")) f.pose.joint_rotations.push_back(rot_from_json(q, "joint_rot6d"));
            f.pose.foot_contact = {j.at("contact").at(0).get<bool>(), j.at("contact").at(1).get<bool>()};
            f.joints = vecs_from_json(j.at("joints"), "joints");
            const auto& w = j.at("world");
            f.world.position = Vec3(w.at(0).get<double>(), w.at(1).get<double>(), w.at(2).get<double>());
            f.world.facing = w.at(3).get<double>();
            f.root_velocity = vec_from_json(j.at("root_vel"), "root_vel");
            f.yaw_rate = j.at("yaw_rate").get<double>();
            f.joint_velocities = vecs_from_json(j.at("joint_vel"), "joint_vel");
            f.corrections = j.at("dv").get<std::vector<double>>();
            f.occupancy_hash = std::stoull(j.at("co_hash").get<std::string>(), nullptr, 16);
            f.penetrated = j.at("pen").get<std::size_t>();
            if (f.pose.joint_rotations.size() != n || f.joints.size() != n || f.joint_velocities.size() != n)
                throw FormatError("episode: joint count mismatch");
            r.frames.push_back(std::move(f));
        }
    } catch (const json::exception& e) {
        throw FormatError("episode line " + std::to_string(line_no) + ": " + e.what());
    } catch (const FormatError& e) {
        throw FormatError("episode line " + std::to_string(line_no) + ": " + e.what());
    }
    if (r.frames.size() != expected)
        throw FormatError("episode: expected " + std::to_string(expected) + " frames, found " +
                          std::to_string(r.frames.size()));
    return r;
}

}  // namespace occu
