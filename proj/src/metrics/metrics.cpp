// SPDX-FileCopyrightText: 2026 occu authors
// SPDX-License-Identifier: Apache-2.0

#include "occu/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace occu {

double target_distance(const std::vector<Vec3>& joints, const Skeleton& skeleton, const TargetPoints& target)
{
    double sum = 0.0;
    int n = 0;
    for (std::size_t i = 0; i < target.size(); ++i) {
        if (!target[i]) continue;
        sum += (joints[skeleton.landmark(kEndEffectors[i])] - *target[i]).norm();
        ++n;
    }
    return n ? sum / n : std::numeric_limits<double>::infinity();
}

SuccessResult success(const EpisodeResult& r, const SuccessThresholds& th)
{
    if (r.frames.empty()) throw Error("success: episode has no frames");
    SuccessResult out;
    out.min_distance = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < r.frames.size(); ++i) {
        const auto& f = r.frames[i];
        const auto* target = active_target(r.schedule, f.time);
        if (!target) continue;
        const double d = target_distance(f.joints, *r.skeleton, target->points);
        out.min_distance = std::min(out.min_distance, d);
        if (!out.success && d < th.distance && f.penetrated < th.max_penetrated) {
            out.success = true;
            out.time = static_cast<double>(i) / r.rate;
        }
    }
    return out;
}

double foot_sliding(const EpisodeResult& r, double contact_height, double speed_threshold)
{
    if (r.frames.empty()) throw Error("foot_sliding: episode has no frames");
    if (r.frames.size() < 2) return 0.0;
    const auto& sk = *r.skeleton;
    const int feet[2] = {sk.landmark(Landmark::LeftFoot), sk.landmark(Landmark::RightFoot)};
    std::size_t flagged = 0;
    for (std::size_t i = 0; i < r.frames.size(); ++i) {
        const std::size_t cur = std::max<std::size_t>(i, 1);
        const auto& a = r.frames[cur - 1].joints;
        const auto& b = r.frames[cur].joints;
        bool slide = false;
        for (int foot : feet) {
            const Vec3 d = (b[foot] - a[foot]) * r.rate;
            const double horizontal = std::hypot(d.x(), d.y());
            if (r.frames[i].joints[foot].z() < contact_height && horizontal > speed_threshold) slide = true;
        }
        flagged += slide;
    }
    return 100.0 * static_cast<double>(flagged) / static_cast<double>(r.frames.size());
}

double penetration(const EpisodeResult& r)
{
    if (r.frames.empty()) throw Error("penetration: episode has no frames");
    double sum = 0.0;
    for (const auto& f : r.frames) sum += static_cast<double>(f.penetrated);
    return sum / static_cast<double>(r.frames.size());
}

std::vector<std::size_t> penetration_counts(const EpisodeResult& r, const OccupancyProvider& provider, double unit)
{
    std::vector<std::size_t> out;
    out.reserve(r.frames.size());
    for (const auto& f : r.frames)
        out.push_back(provider.penetrated_cells(penetration_samples(f.joints, *r.skeleton, unit), f.time, unit));
    return out;
}

std::vector<std::size_t> penetration_counts(const MotionSequence& seq, const OccupancyProvider& provider, double unit)
{
    std::vector<std::size_t> out;
    out.reserve(seq.size());
    for (std::size_t i = 0; i < seq.size(); ++i) {
        const auto joints = forward_kinematics(seq.frames()[i], seq.skeleton());
        out.push_back(provider.penetrated_cells(penetration_samples(joints, seq.skeleton(), unit),
                                                static_cast<double>(i) / seq.fps(), unit));
    }
    return out;
}

double erp_distance(std::span<const Vec3> a, std::span<const Vec3> b, const Vec3& gap)
{
    if (a.empty() && b.empty()) throw Error("erp_distance: both trajectories are empty");
    const std::size_t n = a.size(), m = b.size();
    // d[i][j]: distance between prefixes a[0..i) and b[0..j).
    std::vector<double> prev(m + 1), cur(m + 1);
    prev[0] = 0.0;
    for (std::size_t j = 1; j <= m; ++j) prev[j] = prev[j - 1] + (b[j - 1] - gap).norm();
    for (std::size_t i = 1; i <= n; ++i) {
        const double gap_a = (a[i - 1] - gap).norm();
        cur[0] = prev[0] + gap_a;
        for (std::size_t j = 1; j <= m; ++j) {
            const double match = prev[j - 1] + (a[i - 1] - b[j - 1]).norm();
            const double skip_a = prev[j] + gap_a;
            const double skip_b = cur[j - 1] + (b[j - 1] - gap).norm();
            cur[j] = std::min({match, skip_a, skip_b});
        }
        std::swap(prev, cur);
    }
    return prev[m];
}

double trajectory_erp(const EpisodeResult& r, const std::vector<Vec3>& reference)
{
    if (r.frames.empty()) throw Error("trajectory_erp: episode has no frames");
    const auto frame = canonical_frame(r.frames.front().pose, *r.skeleton);
    std::vector<Vec3> a, b;
    for (const auto& f : r.frames) a.push_back(frame.to_canonical_point(f.pose.root_position));
    for (const auto& p : reference) b.push_back(frame.to_canonical_point(p));
    return erp_distance(a, b);
}

const char* to_string(FeasibilityReason r)
{
    switch (r) {
    case FeasibilityReason::Ok: return "ok";
    case FeasibilityReason::OutOfGrid: return "out_of_grid";
    case FeasibilityReason::StartBlocked: return "start_blocked";
    case FeasibilityReason::GoalBlocked: return "goal_blocked";
    case FeasibilityReason::NoPath: return "no_path";
    }
    return "unknown";
}

std::vector<bool> traversable_columns(const OccupancyGrid& grid, int layer, const Cylinder& cylinder)
{
    if (!(cylinder.radius >= 0.0) || !(cylinder.height > 0.0)) throw Error("cylinder: invalid dimensions");
    const auto& l = grid.layout();
    const int nx = l.dims[0], ny = l.dims[1], nz = l.dims[2];
    const int layers = std::max(1, static_cast<int>(std::ceil(cylinder.height / l.unit - 1e-9)));
    const int z0 = std::max(layer, 0), z1 = std::min(layer + layers, nz);

    // Occupied flag per column over the swept layer range.
    std::vector<char> blocked(static_cast<std::size_t>(nx) * ny, 0);
    for (int z = z0; z < z1; ++z)
        for (int y = 0; y < ny; ++y)
            for (int x = 0; x < nx; ++x)
                if (grid.get(Index3{x, y, z})) blocked[x + static_cast<std::size_t>(nx) * y] = 1;

    // Footprint offsets whose centers lie within the radius.
    const int reach = static_cast<int>(std::floor(cylinder.radius / l.unit + 1e-9));
    std::vector<std::pair<int, int>> footprint;
    for (int dy = -reach; dy <= reach; ++dy)
        for (int dx = -reach; dx <= reach; ++dx)
            if (std::hypot(dx * l.unit, dy * l.unit) <= cylinder.radius + 1e-12) footprint.emplace_back(dx, dy);

    std::vector<bool> out(static_cast<std::size_t>(nx) * ny, false);
    for (int y = 0; y < ny; ++y)
        for (int x = 0; x < nx; ++x) {
            bool ok = true;
            for (const auto& [dx, dy] : footprint) {
                const int cx = x + dx, cy = y + dy;
                if (cx < 0 || cy < 0 || cx >= nx || cy >= ny) continue;
                if (blocked[cx + static_cast<std::size_t>(nx) * cy]) {
                    ok = false;
                    break;
                }
            }
            out[x + static_cast<std::size_t>(nx) * y] = ok;
        }
    return out;
}

FeasibilityResult path_feasibility(const OccupancyGrid& grid, const Vec3& start, const Vec3& goal,
                                   const Cylinder& cylinder)
{
    FeasibilityResult out;
    const auto& l = grid.layout();
    const Index3 s = l.cell_of(start);
    const Index3 g = l.cell_of(goal);
    if (!l.in_bounds(s) || !l.in_bounds(g)) {
        out.reason = FeasibilityReason::OutOfGrid;
        return out;
    }
    const int nx = l.dims[0], ny = l.dims[1];
    const auto free = traversable_columns(grid, s[2], cylinder);
    const auto col = [nx](int x, int y) { return static_cast<std::size_t>(x) + static_cast<std::size_t>(nx) * y; };
    if (!free[col(s[0], s[1])]) {
        out.reason = FeasibilityReason::StartBlocked;
        return out;
    }
    if (!free[col(g[0], g[1])]) {
        out.reason = FeasibilityReason::GoalBlocked;
        return out;
    }

    const double diag = std::sqrt(2.0);
    const auto heuristic = [&](int x, int y) {
        const int dx = std::abs(x - g[0]), dy = std::abs(y - g[1]);
        return (diag - 1.0) * std::min(dx, dy) + std::max(dx, dy);
    };
    const std::size_t n = free.size();
    std::vector<double> cost(n, std::numeric_limits<double>::infinity());
    std::vector<std::size_t> parent(n, n);
    std::vector<char> closed(n, 0);
    using Entry = std::pair<double, std::size_t>;
    std::vector<Entry> open;
    const auto cmp = [](const Entry& a, const Entry& b) { return a.first > b.first || (a.first == b.first && a.second > b.second); };
    const std::size_t start_id = col(s[0], s[1]), goal_id = col(g[0], g[1]);
    cost[start_id] = 0.0;
    open.push_back({heuristic(s[0], s[1]), start_id});

    while (!open.empty()) {
        std::pop_heap(open.begin(), open.end(), cmp);
        const auto [f, id] = open.back();
        open.pop_back();
        if (closed[id]) continue;
        closed[id] = 1;
        if (id == goal_id) break;
        const int x = static_cast<int>(id % nx), y = static_cast<int>(id / nx);
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
                if (!dx && !dy) continue;
                const int qx = x + dx, qy = y + dy;
                if (qx < 0 || qy < 0 || qx >= nx || qy >= ny || !free[col(qx, qy)]) continue;
                // No corner cutting: both orthogonal neighbours must be open.
                if (dx && dy && (!free[col(x + dx, y)] || !free[col(x, y + dy)])) continue;
                const std::size_t q = col(qx, qy);
                const double c = cost[id] + ((dx && dy) ? diag : 1.0);
                if (c < cost[q]) {
                    cost[q] = c;
                    parent[q] = id;
                    open.push_back({c + heuristic(qx, qy), q});
                    std::push_heap(open.begin(), open.end(), cmp);
                }
            }
    }
    if (!closed[goal_id]) {
        out.reason = FeasibilityReason::NoPath;
        return out;
    }
    for (std::size_t id = goal_id; id != n; id = parent[id])
        out.path.push_back({static_cast<int>(id % nx), static_cast<int>(id / nx), s[2]});
    std::reverse(out.path.begin(), out.path.end());
    out.feasible = true;
    out.reason = FeasibilityReason::Ok;
    return out;
}

EpisodeMetrics evaluate_episode(const std::string& name, const EpisodeResult& r, const std::vector<Vec3>* reference,
                                const SuccessThresholds& thresholds)
{
    EpisodeMetrics m;
    m.name = name;
    const auto s = success(r, thresholds);
    m.success = s.success;
    m.dt_cm = 100.0 * s.min_distance;
    m.time = s.time;
    m.fs = foot_sliding(r);
    m.pen = penetration(r);
    if (reference) m.erp = trajectory_erp(r, *reference);
    return m;
}

MetricReport aggregate(std::vector<EpisodeMetrics> episodes)
{
    if (episodes.empty()) throw Error("aggregate: no episodes");
    MetricReport rep;
    rep.episodes = episodes.size();
    double succ = 0, dt = 0, fs = 0, pen = 0, time = 0, erp = 0;
    std::size_t timed = 0, with_erp = 0;
    for (const auto& e : episodes) {
        succ += e.success;
        dt += e.dt_cm;
        fs += e.fs;
        pen += e.pen;
        if (e.success && e.time) {
            time += *e.time;
            ++timed;
        }
        if (e.erp) {
            erp += *e.erp;
            ++with_erp;
        }
    }
    const double n = static_cast<double>(episodes.size());
    rep.success_rate = 100.0 * succ / n;
    rep.dt_cm = dt / n;
    rep.fs = fs / n;
    rep.pen = pen / n;
    if (timed) rep.time = time / static_cast<double>(timed);
    if (with_erp) rep.erp = erp / static_cast<double>(with_erp);
    rep.per_episode = std::move(episodes);
    return rep;
}

namespace {

nlohmann::json optional_json(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

std::string fixed(const std::optional<double>& v, int precision = 2)
{
    if (!v) return "-";
    std::ostringstream s;
    s << std::fixed << std::setprecision(precision) << *v;
    return s.str();
}

}  // namespace

std::string report_json(const MetricReport& r)
{
    nlohmann::json j;
    j["episodes"] = r.episodes;
    j["success_rate"] = r.success_rate;
    j["dt_cm"] = r.dt_cm;
    j["time_s"] = optional_json(r.time);
    j["fs_percent"] = r.fs;
    j["pen"] = r.pen;
    j["erp"] = optional_json(r.erp);
    nlohmann::json per = nlohmann::json::array();
    for (const auto& e : r.per_episode)
        per.push_back({{"name", e.name},
                       {"success", e.success},
                       {"dt_cm", e.dt_cm},
                       {"time_s", optional_json(e.time)},
                       {"fs_percent", e.fs},
                       {"pen", e.pen},
                       {"erp", optional_json(e.erp)}});
    j["per_episode"] = per;
    return j.dump(2);
}

std::string report_table(const MetricReport& r)
{
    std::ostringstream s;
    s << std::left << std::setw(10) << "Suc." << std::setw(10) << "DT" << std::setw(10) << "Time" << std::setw(10)
      << "FS" << std::setw(10) << "PEN" << "ERP\n";
    s << std::setw(10) << fixed(r.success_rate) << std::setw(10) << fixed(r.dt_cm) << std::setw(10) << fixed(r.time)
      << std::setw(10) << fixed(r.fs) << std::setw(10) << fixed(r.pen) << fixed(r.erp) << "\n";
    return s.str();
}

EpisodeResult episode_from_motion(const MotionSequence& seq, const std::string& provider_label)
{
    EpisodeResult r;
    r.skeleton = seq.skeleton_ptr();
    r.rate = seq.fps();
    r.provider = provider_label;
    r.policy = "recorded";
    r.regulation = false;
    r.schedule = {{0.0, target_points(seq.frames().back(), seq.skeleton())}};
    const auto vel = finite_velocities(seq);
    for (std::size_t i = 0; i < seq.size(); ++i) {
        FrameRecord f;
        f.time = static_cast<double>(i) / seq.fps();
        f.pose = seq.frames()[i];
        f.joints = forward_kinematics(f.pose, seq.skeleton());
        const auto frame = canonical_frame(f.pose, seq.skeleton());
        f.world = {f.pose.root_position, frame.yaw};
        f.root_velocity = vel[i].root;
        f.yaw_rate = vel[i].yaw_rate;
        f.joint_velocities = vel[i].joints;
        r.frames.push_back(std::move(f));
    }
    return r;
}

}  // namespace occu
