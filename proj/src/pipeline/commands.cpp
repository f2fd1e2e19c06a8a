// SPDX-FileCopyrightText: 2026 occu authors
// SPDX-License-Identifier: Apache-2.0

#include <chrono>
#include <map>
#include <random>
#include <sstream>

#include <json.hpp>

#include "occu/io_util.hpp"
#include "occu/motion_io.hpp"
#include "occu/parallel.hpp"
#include "occu/pipeline.hpp"

namespace occu {

using nlohmann::json;

namespace {

json index_json(const Index3& i) { return json::array({i[0], i[1], i[2]}); }

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// Marks items whose output name collides with an earlier item.
void flag_duplicates(BatchReport& report)
{
    std::map<std::string, std::size_t> first;
    for (auto& item : report.items) {
        if (!item.error.empty()) continue;
        if (!first.emplace(item.output, 0).second) item.error = "duplicate output name " + item.output;
    }
}

json errors_json(const BatchReport& report)
{
    json out = json::array();
    for (const auto& i : report.items)
        if (!i.error.empty()) out.push_back({{"input", i.input}, {"error", i.error}});
    return out;
}

json mob_entry(const std::string& grid_name, const std::string& bytes, const OccupancyGrid& grid,
               const std::pair<Vec3, Vec3>& ends)
{
    return {{"grid", grid_name},
            {"hash", hex64(fnv1a64(bytes))},
            {"dims", index_json(grid.dims())},
            {"origin", vec_to_json(grid.origin())},
            {"unit", grid.unit()},
            {"occupied_fraction", static_cast<double>(grid.count()) / static_cast<double>(grid.cell_count())},
            {"start", vec_to_json(ends.first)},
            {"goal", vec_to_json(ends.second)}};
}

fs::path find_grid(const std::string& label_path, const std::optional<fs::path>& grid_dir)
{
    const fs::path p(label_path);
    if (fs::exists(p)) return p;
    if (grid_dir && fs::exists(*grid_dir / p.filename())) return *grid_dir / p.filename();
    throw Error("missing grid reference: " + label_path);
}

std::vector<Vec3> root_path(const fs::path& input)
{
    std::vector<Vec3> out;
    if (input.extension() == ".jsonl") {
        for (const auto& f : episode_from_jsonl(read_file(input)).frames) out.push_back(f.pose.root_position);
    } else if (input.extension() == ".json") {
        for (const auto& p : read_motion(input).frames()) out.push_back(p.root_position);
    } else {
        throw Error("export: unsupported input " + input.string());
    }
    return out;
}

}  // namespace

std::size_t BatchReport::failures() const
{
    std::size_t n = 0;
    for (const auto& i : items) n += !i.error.empty();
    return n;
}

int BatchReport::exit_code() const { return failures() ? 2 : 0; }

std::pair<Vec3, Vec3> motion_endpoints(const MotionSequence& seq)
{
    const auto probe = [&](const Pose& p) {
        const auto joints = forward_kinematics(p, seq.skeleton());
        double low = joints[0].z();
        for (const auto& j : joints) low = std::min(low, j.z());
        return Vec3(p.root_position.x(), p.root_position.y(), low);
    };
    return {probe(seq.frames().front()), probe(seq.frames().back())};
}

BatchReport cmd_build_mob(const std::vector<fs::path>& motions, const fs::path& out_dir, double unit, int threads)
{
    if (!(unit > 0.0)) throw Error("build-mob: unit must be positive");
    fs::create_directories(out_dir);
    BatchReport report;
    for (const auto& m : motions) report.items.push_back({m.string(), m.stem().string() + ".mobg", {}});
    flag_duplicates(report);

    std::vector<json> entries(motions.size());
    std::vector<double> seconds(motions.size(), 0.0);
    parallel_for(motions.size(), threads, [&](std::size_t i, int) {
        auto& item = report.items[i];
        if (!item.error.empty()) return;
        try {
            const auto t0 = std::chrono::steady_clock::now();
            const auto seq = read_motion(motions[i]);
            const auto grid = motion_scene(seq, unit);
            const auto bytes = grid_to_bytes(grid);
            write_file_atomic(out_dir / item.output, bytes);
            entries[i] = mob_entry(item.output, bytes, grid, motion_endpoints(seq));
            entries[i]["source"] = item.input;
            entries[i]["frames"] = seq.size();
            seconds[i] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        } catch (const std::exception& e) {
            item.error = e.what();
        }
    });

    json manifest{{"format", "occu-mob-manifest"}, {"version", 1}, {"unit", unit}};
    json list = json::array(), timings = json::array();
    for (std::size_t i = 0; i < motions.size(); ++i) {
        if (!report.items[i].error.empty()) continue;
        list.push_back(entries[i]);
        timings.push_back({{"grid", report.items[i].output}, {"seconds", seconds[i]}});
    }
    manifest["entries"] = list;
    manifest["errors"] = errors_json(report);
    write_file_atomic(out_dir / "manifest.json", dump(manifest));
    write_file_atomic(out_dir / "timings.json", dump(json{{"threads", threads}, {"entries", timings}}));
    return report;
}

std::vector<EpisodeSpec> suite_episodes(const std::string& suite, int count, std::uint64_t seed,
                                        std::shared_ptr<const Skeleton> skeleton)
{
    if (count < 1) throw Error("suite: count must be >= 1");
    std::vector<EpisodeSpec> out;
    if (suite == "open") {
        for (int i = 0; i < count; ++i) out.push_back({open_ground_episode(seed + i, skeleton), "baseline"});
    } else if (suite == "door") {
        for (int i = 0; i < count; ++i) out.push_back({revolving_door_episode(seed + i, skeleton), "baseline"});
    } else if (suite == "walls") {
        auto all = wall_corridor_suite(skeleton, static_cast<int>(seed) + count);
        for (int i = 0; i < count; ++i) out.push_back({std::move(all[seed + i]), "baseline"});
    } else {
        throw Error("unknown suite '" + suite + "' (expected open, walls or door)");
    }
    return out;
}

BatchReport cmd_run(const std::vector<EpisodeSpec>& episodes, const fs::path& out_dir, const RunConfig& config)
{
    config.validate();
    fs::create_directories(out_dir);
    BatchReport report;
    for (const auto& e : episodes) report.items.push_back({e.episode.name, e.episode.name + ".jsonl", {}});
    flag_duplicates(report);

    std::vector<json> entries(episodes.size());
    const auto options = config.rollout_options();
    parallel_for(episodes.size(), config.thread_count(), [&](std::size_t i, int) {
        auto& item = report.items[i];
        if (!item.error.empty()) return;
        try {
            const auto& e = episodes[i].episode;
            auto policy = make_policy(episodes[i].policy, e.skeleton, config);
            const auto text = episode_to_jsonl(run_episode(e, *policy, options));
            write_file_atomic(out_dir / item.output, text);
            entries[i] = {{"name", e.name}, {"file", item.output}, {"hash", hex64(fnv1a64(text))}};
        } catch (const std::exception& ex) {
            item.error = ex.what();
        }
    });

    json list = json::array();
    for (std::size_t i = 0; i < episodes.size(); ++i)
        if (report.items[i].error.empty()) list.push_back(entries[i]);
    write_file_atomic(out_dir / "manifest.json",
                      dump({{"format", "occu-run-manifest"}, {"version", 1}, {"entries", list},
                            {"errors", errors_json(report)}}));
    return report;
}

MetricReport cmd_eval(const std::vector<fs::path>& results, const std::optional<fs::path>& grid_dir,
                      const RunConfig& config)
{
    if (results.empty()) throw Error("eval: no results given");
    std::vector<EpisodeMetrics> metrics(results.size());
    parallel_for(results.size(), config.thread_count(), [&](std::size_t i, int) {
        const auto& path = results[i];
        EpisodeResult r;
        if (path.extension() == ".jsonl") {
            r = episode_from_jsonl(read_file(path));
            if (r.provider.rfind("static:", 0) == 0) {
                const StaticGridProvider provider(
                    std::make_shared<OccupancyGrid>(read_grid(find_grid(r.provider.substr(7), grid_dir))));
                const auto counts = penetration_counts(r, provider, config.unit);
                for (std::size_t k = 0; k < counts.size(); ++k) r.frames[k].penetrated = counts[k];
            }
        } else if (path.extension() == ".json") {
            if (!grid_dir) throw Error("missing grid reference: recorded motion " + path.string() + " needs --grids");
            const auto grid_path = *grid_dir / (path.stem().string() + ".mobg");
            if (!fs::exists(grid_path)) throw Error("missing grid reference: " + grid_path.string());
            const auto seq = read_motion(path);
            const StaticGridProvider provider(std::make_shared<OccupancyGrid>(read_grid(grid_path)));
            r = episode_from_motion(seq, "static:" + grid_path.string());
            const auto counts = penetration_counts(seq, provider, config.unit);
            for (std::size_t k = 0; k < counts.size(); ++k) r.frames[k].penetrated = counts[k];
        } else {
            throw Error("eval: unsupported result " + path.string());
        }
        metrics[i] = evaluate_episode(path.stem().string(), r);
    });
    return aggregate(std::move(metrics));
}

std::optional<ExportFormat> export_format_from_string(const std::string& name)
{
    if (name == "ply") return ExportFormat::Ply;
    if (name == "obj") return ExportFormat::Obj;
    if (name == "json") return ExportFormat::Json;
    if (name == "mobg") return ExportFormat::Mobg;
    return std::nullopt;
}

std::string trajectory_to_ply(const std::vector<Vec3>& points)
{
    std::ostringstream s;
    s.precision(17);
    s << "ply\nformat ascii 1.0\nelement vertex " << points.size()
      << "\nproperty double x\nproperty double y\nproperty double z\nelement edge "
      << (points.empty() ? 0 : points.size() - 1) << "\nproperty int vertex1\nproperty int vertex2\nend_header\n";
    for (const auto& p : points) s << p.x() << ' ' << p.y() << ' ' << p.z() << '\n';
    for (std::size_t i = 1; i < points.size(); ++i) s << i - 1 << ' ' << i << '\n';
    return s.str();
}

std::string trajectory_to_obj(const std::vector<Vec3>& points)
{
    std::ostringstream s;
    s.precision(17);
    for (const auto& p : points) s << "v " << p.x() << ' ' << p.y() << ' ' << p.z() << '\n';
    if (points.size() > 1) {
        s << 'l';
        for (std::size_t i = 1; i <= points.size(); ++i) s << ' ' << i;
        s << '\n';
    }
    return s.str();
}

std::string grid_to_json(const OccupancyGrid& grid)
{
    json cells = json::array();
    for (std::size_t i = 0; i < grid.cell_count(); ++i)
        if (grid.get(i)) cells.push_back(index_json(grid.layout().unlinear(i)));
    return dump({{"dims", index_json(grid.dims())},
                 {"origin", vec_to_json(grid.origin())},
                 {"unit", grid.unit()},
                 {"count", grid.count()},
                 {"cells", cells}});
}

std::string cmd_export(const fs::path& input, ExportFormat format, bool complement_grid,
                       const std::optional<CropBox>& crop_box)
{
    if (input.extension() == ".mobg") {
        auto grid = read_grid(input);
        if (crop_box) {
            for (int a = 0; a < 3; ++a)
                if (crop_box->second[a] < 1) throw Error("export: crop dimensions must be positive");
            grid = crop(grid, crop_box->first, crop_box->second);
        }
        if (complement_grid) grid = complement(grid);
        switch (format) {
        case ExportFormat::Ply: return grid_to_ply(grid);
        case ExportFormat::Obj: return grid_to_obj(grid);
        case ExportFormat::Json: return grid_to_json(grid);
        case ExportFormat::Mobg: return grid_to_bytes(grid);
        }
    }
    if (complement_grid || crop_box) throw Error("export: --complement and --crop apply to grids only");
    if (format == ExportFormat::Mobg) throw Error("export: mobg output needs a grid input");
    const auto points = root_path(input);
    switch (format) {
    case ExportFormat::Ply: return trajectory_to_ply(points);
    case ExportFormat::Obj: return trajectory_to_obj(points);
    case ExportFormat::Json: {
        json pts = json::array();
        for (const auto& p : points) pts.push_back(vec_to_json(p));
        return dump({{"points", pts}});
    }
    case ExportFormat::Mobg: break;
    }
    throw Error("export: unknown format");
}

std::string FeasibilityReport::to_json() const
{
    json list = json::array();
    std::size_t ok = 0, infeasible = 0, errors = 0;
    for (const auto& e : entries) {
        json j{{"grid", e.grid}};
        if (e.error.empty()) {
            j["feasible"] = e.feasible;
            j["reason"] = e.reason;
            j["path_cells"] = e.path_cells;
            ++ok;
            infeasible += !e.feasible;
        } else {
            j["error"] = e.error;
            ++errors;
        }
        list.push_back(j);
    }
    return dump({{"grids", entries.size()},
                 {"evaluated", ok},
                 {"infeasible", infeasible},
                 {"errors", errors},
                 {"infeasible_fraction", infeasible_fraction},
                 {"entries", list}});
}

int FeasibilityReport::exit_code() const
{
    for (const auto& e : entries)
        if (!e.error.empty()) return 2;
    return 0;
}

FeasibilityReport cmd_feasibility(const fs::path& manifest, const Cylinder& cylinder, int threads)
{
    json doc;
    try {
        doc = json::parse(read_file(manifest));
    } catch (const json::exception& e) {
        throw FormatError("feasibility manifest: " + std::string(e.what()));
    }
    if (!doc.contains("entries") || !doc["entries"].is_array())
        throw FormatError("feasibility manifest: missing 'entries' array");
    const auto& entries = doc["entries"];
    FeasibilityReport report;
    report.entries.resize(entries.size());
    parallel_for(entries.size(), threads, [&](std::size_t i, int) {
        auto& out = report.entries[i];
        try {
            const auto& e = entries[i];
            out.grid = e.at("grid").get<std::string>();
            const auto grid = read_grid(manifest.parent_path() / out.grid);
            const auto res = path_feasibility(grid, vec_from_json(e.at("start"), "start"),
                                              vec_from_json(e.at("goal"), "goal"), cylinder);
            out.feasible = res.feasible;
            out.reason = to_string(res.reason);
            out.path_cells = res.path.size();
        } catch (const std::exception& ex) {
            out.error = ex.what();
        }
    });
    std::size_t ok = 0, infeasible = 0;
    for (const auto& e : report.entries)
        if (e.error.empty()) {
            ++ok;
            infeasible += !e.feasible;
        }
    report.infeasible_fraction = ok ? static_cast<double>(infeasible) / static_cast<double>(ok) : 0.0;
    return report;
}

std::optional<CorpusKind> corpus_kind_from_string(const std::string& name)
{
    if (name == "open") return CorpusKind::Open;
    if (name == "cramped") return CorpusKind::Cramped;
    return std::nullopt;
}

void make_feasibility_corpus(CorpusKind kind, int count, std::uint64_t seed, const fs::path& out_dir, int threads)
{
    if (count < 1) throw Error("corpus: count must be >= 1");
    fs::create_directories(out_dir);
    std::vector<json> entries(count);
    parallel_for(static_cast<std::size_t>(count), threads, [&](std::size_t i, int) {
        const std::uint64_t s = seed + i;
        OccupancyGrid grid;
        std::pair<Vec3, Vec3> ends;
        std::string name;
        if (kind == CorpusKind::Open) {
            std::mt19937_64 rng(s);
            GridLayout layout;
            layout.unit = 0.1;
            layout.dims = {60, 60, 24};
            grid = OccupancyGrid(layout);
            const int pillars = 2 + static_cast<int>(rng() % 4);
            std::vector<BoxSceneProvider::Box> boxes;
            for (int k = 0; k < pillars; ++k) {
                const double half = uniform_in(rng, 0.15, 0.3);
                boxes.push_back({Vec3(uniform_in(rng, 1.5, 4.5), uniform_in(rng, 1.5, 4.5), 1.2),
                                 Vec3(half, half, 1.2), 0.0});
            }
            const BoxSceneProvider scene(boxes);
            for (std::size_t c = 0; c < grid.cell_count(); ++c) {
                const auto idx = layout.unlinear(c);
                const bool border = idx[0] == 0 || idx[1] == 0 || idx[0] == 59 || idx[1] == 59;
                grid.set(c, border || scene.is_occupied(layout.center(idx), 0.0));
            }
            ends = {Vec3(0.75, uniform_in(rng, 0.75, 5.25), 0.05), Vec3(5.25, uniform_in(rng, 0.75, 5.25), 0.05)};
            name = "room-" + std::to_string(s) + ".mobg";
        } else {
            const auto seq = generate_motion({MotionKind::Crawl, 3.0, 1.0, s, 30.0});
            grid = motion_scene(seq, 0.08);
            ends = motion_endpoints(seq);
            name = "crawl-" + std::to_string(s) + ".mobg";
        }
        const auto bytes = grid_to_bytes(grid);
        write_file_atomic(out_dir / name, bytes);
        entries[i] = mob_entry(name, bytes, grid, ends);
    });
    json list = json::array();
    for (auto& e : entries) list.push_back(std::move(e));
    write_file_atomic(out_dir / "manifest.json",
                      dump({{"format", "occu-mob-manifest"}, {"version", 1}, {"entries", list},
                            {"errors", json::array()}}));
}

BatchReport cmd_gen_motion(const SyntheticMotionSpec& base, int count, const fs::path& out_dir)
{
    if (count < 1) throw Error("gen-motion: count must be >= 1");
    base.validate();
    fs::create_directories(out_dir);
    BatchReport report;
    for (int i = 0; i < count; ++i) {
        auto spec = base;
        spec.seed = base.seed + static_cast<std::uint64_t>(i);
        const std::string name = std::string(to_string(spec.kind)) + "-" + std::to_string(spec.seed) + ".json";
        BatchItem item{std::to_string(spec.seed), name, {}};
        try {
            write_file_atomic(out_dir / name, motion_to_json(generate_motion(spec)));
        } catch (const std::exception& e) {
            item.error = e.what();
        }
        report.items.push_back(item);
    }
    return report;
}

}  // namespace occu
