// SPDX-FileCopyrightText: 2026 occu authors
// SPDX-License-Identifier: Apache-2.0

#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "occu/io_util.hpp"
#include "occu/motion_io.hpp"
#include "occu/parallel.hpp"
#include "occu/pipeline.hpp"

namespace occu {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> words(const std::string& s)
{
    std::istringstream in(s);
    std::vector<std::string> out;
    for (std::string w; in >> w;) out.push_back(w);
    return out;
}

double to_double(const std::string& s)
{
    double v = 0.0;
    const auto* end = s.data() + s.size();
    const auto [p, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || p != end || !std::isfinite(v)) throw Error("not a number: '" + s + "'");
    return v;
}

long long to_int(const std::string& s)
{
    long long v = 0;
    const auto* end = s.data() + s.size();
    const auto [p, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || p != end) throw Error("not an integer: '" + s + "'");
    return v;
}

std::uint64_t to_u64(const std::string& s)
{
    std::uint64_t v = 0;
    const auto* end = s.data() + s.size();
    const auto [p, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || p != end) throw Error("not a non-negative integer: '" + s + "'");
    return v;
}

bool to_bool(const std::string& s)
{
    if (s == "true" || s == "1" || s == "on" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "off" || s == "no") return false;
    throw Error("not a boolean: '" + s + "'");
}

NormOrder to_norm(const std::string& s)
{
    if (s == "l1") return NormOrder::L1;
    if (s == "l2") return NormOrder::L2;
    if (s == "linf") return NormOrder::LInf;
    throw Error("norm must be l1, l2 or linf");
}

struct Line {
    std::size_t number;
    std::string key;
    std::string value;
};

// Splits text into key/value lines, skipping blanks and comments.
std::vector<Line> key_values(const std::string& text, const char* what)
{
    std::vector<Line> out;
    std::istringstream in(text);
    std::string raw;
    for (std::size_t n = 1; std::getline(in, raw); ++n) {
        const auto hash = raw.find('#');
        const auto line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(std::string(what) + " line " + std::to_string(n) + ": expected key = value");
        out.push_back({n, trim(line.substr(0, eq)), trim(line.substr(eq + 1))});
        if (out.back().key.empty())
            throw ConfigError(std::string(what) + " line " + std::to_string(n) + ": empty key");
    }
    return out;
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

const std::vector<std::pair<std::string, Setter>>& run_setters()
{
    static const std::vector<std::pair<std::string, Setter>> table = {
        {"motion_dir", [](RunConfig& c, const std::string& v) { c.motion_dir = v; }},
        {"grid_dir", [](RunConfig& c, const std::string& v) { c.grid_dir = v; }},
        {"output_dir", [](RunConfig& c, const std::string& v) { c.output_dir = v; }},
        {"unit", [](RunConfig& c, const std::string& v) { c.unit = to_double(v); }},
        {"occupancy.size", [](RunConfig& c, const std::string& v) { c.occupancy.size = static_cast<int>(to_int(v)); }},
        {"occupancy.unit", [](RunConfig& c, const std::string& v) { c.occupancy.unit = to_double(v); }},
        {"occupancy.forward_offset", [](RunConfig& c, const std::string& v) { c.occupancy.forward_offset = to_double(v); }},
        {"occupancy.conservative", [](RunConfig& c, const std::string& v) { c.occupancy.conservative = to_bool(v); }},
        {"field.stiffness", [](RunConfig& c, const std::string& v) { c.field.stiffness = to_double(v); }},
        {"field.norm", [](RunConfig& c, const std::string& v) { c.field.norm = to_norm(v); }},
        {"field.inner", [](RunConfig& c, const std::string& v) { c.field.inner = to_double(v); }},
        {"field.falloff", [](RunConfig& c, const std::string& v) { c.field.falloff = to_double(v); }},
        {"field.max_fraction", [](RunConfig& c, const std::string& v) { c.field.max_fraction = to_double(v); }},
        {"loss.penetration", [](RunConfig& c, const std::string& v) { c.losses.penetration = to_double(v); }},
        {"loss.field", [](RunConfig& c, const std::string& v) { c.losses.field = to_double(v); }},
        {"window.history", [](RunConfig& c, const std::string& v) { c.window.history = static_cast<int>(to_int(v)); }},
        {"window.future", [](RunConfig& c, const std::string& v) { c.window.future = static_cast<int>(to_int(v)); }},
        {"window.rate", [](RunConfig& c, const std::string& v) { c.window.rate = to_double(v); }},
        {"baseline.max_speed", [](RunConfig& c, const std::string& v) { c.limits.max_speed = to_double(v); }},
        {"baseline.max_turn_deg", [](RunConfig& c, const std::string& v) { c.limits.max_turn_rate = deg2rad(to_double(v)); }},
        {"baseline.blend_radius", [](RunConfig& c, const std::string& v) { c.limits.blend_radius = to_double(v); }},
        {"regulation", [](RunConfig& c, const std::string& v) { c.regulate = to_bool(v); }},
        {"threads", [](RunConfig& c, const std::string& v) { c.threads = static_cast<int>(to_int(v)); }},
        {"seed", [](RunConfig& c, const std::string& v) { c.seed = to_u64(v); }},
    };
    return table;
}

std::optional<Vec3> point_or_absent(const std::string& s)
{
    if (s == "-") return std::nullopt;
    std::vector<double> v;
    std::stringstream in(s);
    for (std::string part; std::getline(in, part, ',');) v.push_back(to_double(part));
    if (v.size() != 3) throw Error("target point must be x,y,z or -");
    return Vec3(v[0], v[1], v[2]);
}

fs::path resolve(const fs::path& base, const std::string& p)
{
    const fs::path path(p);
    return path.is_absolute() || base.empty() ? path : base / path;
}

BoxSceneProvider::Box parse_box(const std::vector<std::string>& w)
{
    if (w.size() != 7) throw Error("box needs cx cy cz hx hy hz yaw_deg");
    BoxSceneProvider::Box b{Vec3(to_double(w[0]), to_double(w[1]), to_double(w[2])),
                            Vec3(to_double(w[3]), to_double(w[4]), to_double(w[5])), deg2rad(to_double(w[6]))};
    if ((b.half_extents.array() <= 0.0).any()) throw Error("box half extents must be positive");
    return b;
}

}  // namespace

void RunConfig::validate() const
{
    if (!(unit > 0.0)) throw ConfigError("config: unit must be positive");
    if (threads < 0) throw ConfigError("config: threads must be >= 0");
    occupancy.validate();
    field.validate();
    losses.validate();
    window.validate();
    limits.validate();
}

RolloutOptions RunConfig::rollout_options() const
{
    RolloutOptions o;
    o.window = window;
    o.occupancy = occupancy;
    o.field = field;
    o.regulate = regulate;
    o.penetration_unit = unit;
    return o;
}

int RunConfig::thread_count() const { return threads > 0 ? threads : default_thread_count(); }

const std::vector<std::string>& run_config_keys()
{
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& [name, _] : run_setters()) k.push_back(name);
        return k;
    }();
    return keys;
}

RunConfig parse_run_config(const std::string& text)
{
    RunConfig c;
    std::set<std::string> seen;
    for (const auto& line : key_values(text, "config")) {
        const auto prefix = "config line " + std::to_string(line.number) + ": ";
        const auto& table = run_setters();
        const auto it = std::find_if(table.begin(), table.end(), [&](const auto& e) { return e.first == line.key; });
        if (it == table.end()) throw ConfigError(prefix + "unknown key '" + line.key + "'");
        if (!seen.insert(line.key).second) throw ConfigError(prefix + "duplicate key '" + line.key + "'");
        try {
            it->second(c, line.value);
        } catch (const ConfigError&) {
            throw;
        } catch (const Error& e) {
            throw ConfigError(prefix + line.key + ": " + e.what());
        }
    }
    try {
        c.validate();
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return c;
}

RunConfig load_run_config(const fs::path& path) { return parse_run_config(read_file(path)); }

std::shared_ptr<const OccupancyProvider> make_provider(const std::string& spec, const fs::path& base_dir)
{
    if (spec == "empty") return std::make_shared<EmptyProvider>();
    if (spec == "door") return std::make_shared<RevolvingDoorProvider>();
    if (spec.rfind("static:", 0) == 0) {
        const auto path = resolve(base_dir, spec.substr(7));
        return std::make_shared<StaticGridProvider>(std::make_shared<OccupancyGrid>(read_grid(path)),
                                                    "static:" + path.string());
    }
    if (spec.rfind("swap:", 0) == 0)
        return std::make_shared<ScheduledSwapProvider>(std::make_shared<RevolvingDoorProvider>(),
                                                       std::make_shared<EmptyProvider>(), to_double(spec.substr(5)));
    throw Error("unknown provider '" + spec + "' (expected empty, door, static:<path> or swap:<t>)");
}

std::unique_ptr<Policy> make_policy(const std::string& name, std::shared_ptr<const Skeleton> skeleton,
                                    const RunConfig& config)
{
    if (name == "baseline") return std::make_unique<BaselinePolicy>(std::move(skeleton), config.limits, config.window);
    if (name == "zero") return std::make_unique<ZeroPolicy>(config.window);
    throw Error("unknown policy '" + name + "' (expected baseline or zero)");
}

EpisodeSpec parse_episode_config(const std::string& text, const fs::path& base_dir,
                                 std::shared_ptr<const Skeleton> skeleton)
{
    static const std::set<std::string> single = {"name",        "policy",        "duration",        "seed",
                                                 "initial",     "provider",      "door.center",     "door.radius",
                                                 "door.thickness", "door.height", "door.wings",     "door.speed_deg",
                                                 "door.phase_deg"};
    static const std::set<std::string> repeated = {"box", "after_box", "target", "target_rest"};

    EpisodeSpec spec;
    auto& e = spec.episode;
    e.name = "episode";
    e.skeleton = skeleton;
    bool have_initial = false;
    std::string provider = "empty";
    RevolvingDoorParams door;
    std::vector<BoxSceneProvider::Box> boxes, after;
    std::set<std::string> seen;

    for (const auto& line : key_values(text, "episode")) {
        const auto prefix = "episode line " + std::to_string(line.number) + ": ";
        if (!single.count(line.key) && !repeated.count(line.key))
            throw ConfigError(prefix + "unknown key '" + line.key + "'");
        if (single.count(line.key) && !seen.insert(line.key).second)
            throw ConfigError(prefix + "duplicate key '" + line.key + "'");
        try {
            const auto w = words(line.value);
            const auto& k = line.key;
            if (k == "name") {
                if (w.size() != 1) throw Error("name must be one word");
                e.name = w[0];
            } else if (k == "policy") {
                if (line.value != "baseline" && line.value != "zero") throw Error("policy must be baseline or zero");
                spec.policy = line.value;
            } else if (k == "duration") {
                e.duration = to_double(line.value);
                if (!(e.duration > 0.0)) throw Error("duration must be positive");
            } else if (k == "seed") {
                e.seed = to_u64(line.value);
            } else if (k == "initial") {
                if (w.size() == 4 && w[0] == "rest") {
                    e.initial = Pose::rest(*skeleton, Vec3(to_double(w[1]), to_double(w[2]), 0.93),
                                           deg2rad(to_double(w[3])));
                } else if (w.size() == 3 && w[0] == "motion") {
                    const auto seq = read_motion(resolve(base_dir, w[1]));
                    if (!(*seq.skeleton_ptr() == *skeleton)) throw Error("motion skeleton differs from the humanoid");
                    const auto frame = static_cast<std::size_t>(to_int(w[2]));
                    if (frame >= seq.size()) throw Error("motion frame out of range");
                    e.initial = seq.frames()[frame];
                } else {
                    throw Error("initial must be 'rest x y yaw_deg' or 'motion path frame'");
                }
                have_initial = true;
            } else if (k == "provider") {
                if (line.value != "empty" && line.value != "boxes" && line.value != "door" &&
                    line.value.rfind("static:", 0) != 0 && line.value.rfind("swap:", 0) != 0)
                    throw Error("provider must be empty, boxes, door, static:<path> or swap:<t>");
                if (line.value.rfind("swap:", 0) == 0) to_double(line.value.substr(5));
                provider = line.value;
            } else if (k == "box") {
                boxes.push_back(parse_box(w));
            } else if (k == "after_box") {
                after.push_back(parse_box(w));
            } else if (k == "door.center") {
                if (w.size() != 2) throw Error("door.center needs x y");
                door.center = Vec3(to_double(w[0]), to_double(w[1]), 0.0);
            } else if (k == "door.radius") {
                door.radius = to_double(line.value);
            } else if (k == "door.thickness") {
                door.thickness = to_double(line.value);
            } else if (k == "door.height") {
                door.height = to_double(line.value);
            } else if (k == "door.wings") {
                door.wings = static_cast<int>(to_int(line.value));
                if (door.wings < 1) throw Error("door.wings must be >= 1");
            } else if (k == "door.speed_deg") {
                door.angular_speed = deg2rad(to_double(line.value));
            } else if (k == "door.phase_deg") {
                door.phase = deg2rad(to_double(line.value));
            } else if (k == "target") {
                if (w.size() != 6) throw Error("target needs a time and 5 points");
                TargetEvent ev;
                ev.time = to_double(w[0]);
                for (std::size_t i = 0; i < 5; ++i) ev.points[i] = point_or_absent(w[i + 1]);
                e.schedule.push_back(ev);
            } else if (k == "target_rest") {
                if (w.size() != 4) throw Error("target_rest needs t x y yaw_deg");
                e.schedule.push_back({to_double(w[0]), rest_target(*skeleton, to_double(w[1]), to_double(w[2]),
                                                                   deg2rad(to_double(w[3])))});
            }
        } catch (const ConfigError&) {
            throw;
        } catch (const Error& err) {
            throw ConfigError(prefix + line.key + ": " + err.what());
        }
    }
    if (!have_initial) throw ConfigError("episode: missing 'initial'");
    if (!boxes.empty() && provider != "boxes" && provider.rfind("swap:", 0) != 0)
        throw ConfigError("episode: 'box' needs provider = boxes or swap:<t>");
    if (!after.empty() && provider.rfind("swap:", 0) != 0)
        throw ConfigError("episode: 'after_box' needs provider = swap:<t>");

    try {
        if (provider == "boxes") {
            e.provider = std::make_shared<BoxSceneProvider>(boxes);
        } else if (provider == "door") {
            e.provider = std::make_shared<RevolvingDoorProvider>(door);
        } else if (provider.rfind("swap:", 0) == 0 && (!boxes.empty() || !after.empty())) {
            e.provider = std::make_shared<ScheduledSwapProvider>(std::make_shared<BoxSceneProvider>(boxes),
                                                                 std::make_shared<BoxSceneProvider>(after),
                                                                 to_double(provider.substr(5)));
        } else {
            e.provider = make_provider(provider, base_dir);
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& err) {
        throw ConfigError(std::string("episode: provider: ") + err.what());
    }
    return spec;
}

EpisodeSpec load_episode_config(const fs::path& path)
{
    return parse_episode_config(read_file(path), path.parent_path());
}

}  // namespace occu
