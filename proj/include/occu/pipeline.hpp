// SPDX-FileCopyrightText: 2026 occu authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "occu/controller.hpp"
#include "occu/losses.hpp"
#include "occu/metrics.hpp"
#include "occu/scenarios.hpp"
#include "occu/synthetic.hpp"

namespace occu {

namespace fs = std::filesystem;

/// Bad configuration text; the message carries the line number.
class ConfigError : public Error {
public:
    using Error::Error;
};

// ---------------------------------------------------------------------------
// Configuration

struct RunConfig {
    fs::path motion_dir;
    fs::path grid_dir;
    fs::path output_dir;
    /// Voxel size for MOB grids and penetration counts.
    double unit = 0.08;
    CanonicalOccupancyConfig occupancy;
    FieldParams field;
    LossWeights losses;
    WindowConfig window;
    BaselineLimits limits;
    bool regulate = true;
    /// 0 selects default_thread_count().
    int threads = 0;
    std::uint64_t seed = 0;

    void validate() const;
    RolloutOptions rollout_options() const;
    int thread_count() const;
};

/// Parses `key = value` lines; '#' starts a comment. Unknown keys, repeated
/// keys and bad values throw ConfigError naming the line.
RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const fs::path& path);
/// Keys accepted by parse_run_config, in documentation order.
const std::vector<std::string>& run_config_keys();

/// Episode file, same syntax. Keys:
///   name, policy (baseline|zero), duration, seed,
///   initial = rest <x> <y> <yaw_deg> | motion <path> <frame>
///   provider = empty | boxes | door | static:<path> | swap:<t>
///   box = <cx> <cy> <cz> <hx> <hy> <hz> <yaw_deg>          (repeatable)
///   after_box = ...                                        (swap only)
///   door.center = <x> <y>, door.radius, door.thickness, door.height,
///   door.wings, door.speed_deg, door.phase_deg
///   target = <t> <root> <lhand> <rhand> <lfoot> <rfoot>     point: x,y,z or -
///   target_rest = <t> <x> <y> <yaw_deg>
/// Relative paths resolve against `base_dir`.
struct EpisodeSpec {
    Episode episode;
    std::string policy = "baseline";
};
EpisodeSpec parse_episode_config(const std::string& text, const fs::path& base_dir = {},
                                 std::shared_ptr<const Skeleton> skeleton = Skeleton::humanoid());
EpisodeSpec load_episode_config(const fs::path& path);

/// Provider from a spec string: empty | door | static:<path> | swap:<t>.
/// swap:<t> switches a default revolving door off at time t.
std::shared_ptr<const OccupancyProvider> make_provider(const std::string& spec, const fs::path& base_dir = {});

std::unique_ptr<Policy> make_policy(const std::string& name, std::shared_ptr<const Skeleton> skeleton,
                                    const RunConfig& config);

// ---------------------------------------------------------------------------
// Batch commands

/// Per-item outcome of a batch; `error` empty on success.
struct BatchItem {
    std::string input;
    std::string output;
    std::string error;
};

struct BatchReport {
    std::vector<BatchItem> items;

    std::size_t failures() const;
    /// 0 when every item succeeded, 2 otherwise.
    int exit_code() const;
};

/// Start and goal probes for feasibility: root of the first and last frame
/// dropped to the lowest joint height of that frame.
std::pair<Vec3, Vec3> motion_endpoints(const MotionSequence& seq);

/// One pseudo-scene grid (<stem>.mobg) per motion plus manifest.json in
/// out_dir. Wall-clock timings go to timings.json so the manifest and grids
/// stay byte-identical across runs and thread counts.
BatchReport cmd_build_mob(const std::vector<fs::path>& motions, const fs::path& out_dir, double unit, int threads);

/// Runs each episode to <out_dir>/<name>.jsonl and writes manifest.json.
BatchReport cmd_run(const std::vector<EpisodeSpec>& episodes, const fs::path& out_dir, const RunConfig& config);

/// Built-in episode suites: open (seeds seed .. seed+count-1), walls, door.
std::vector<EpisodeSpec> suite_episodes(const std::string& suite, int count, std::uint64_t seed,
                                        std::shared_ptr<const Skeleton> skeleton = Skeleton::humanoid());

/// Metrics over results (*.jsonl episodes or *.json motions). Penetration
/// is recomputed for static:<path> providers, and recorded motions are
/// scored against <grid_dir>/<stem>.mobg. A missing grid throws.
MetricReport cmd_eval(const std::vector<fs::path>& results, const std::optional<fs::path>& grid_dir,
                      const RunConfig& config);

enum class ExportFormat { Ply, Obj, Json, Mobg };
std::optional<ExportFormat> export_format_from_string(const std::string& name);

/// Cell box {lo, dims}; cells outside the source grid come out free.
using CropBox = std::pair<Index3, Index3>;

/// Grids (*.mobg) export occupied voxels as cubes, or as a grid again with
/// Mobg; a crop is applied before the complement. Episodes (*.jsonl) and
/// motions (*.json) export root trajectories as polylines.
std::string cmd_export(const fs::path& input, ExportFormat format, bool complement = false,
                       const std::optional<CropBox>& crop_box = std::nullopt);

std::string trajectory_to_ply(const std::vector<Vec3>& points);
std::string trajectory_to_obj(const std::vector<Vec3>& points);
std::string grid_to_json(const OccupancyGrid& grid);

struct FeasibilityEntry {
    std::string grid;
    bool feasible = false;
    std::string reason;
    std::size_t path_cells = 0;
    std::string error;
};

struct FeasibilityReport {
    std::vector<FeasibilityEntry> entries;
    /// Over entries without errors; 0 when there are none.
    double infeasible_fraction = 0.0;

    std::string to_json() const;
    int exit_code() const;
};

/// Runs path_feasibility over a manifest ({"entries": [{"grid", "start", "goal"}]}),
/// as written by cmd_build_mob or make_feasibility_corpus.
FeasibilityReport cmd_feasibility(const fs::path& manifest, const Cylinder& cylinder, int threads);

enum class CorpusKind { Open, Cramped };
std::optional<CorpusKind> corpus_kind_from_string(const std::string& name);

/// Open: 6 x 6 m floorless rooms with a few pillars, start and goal on
/// opposite sides. Cramped: pseudo-scenes of crawl motions, probed at the
/// crawl's endpoints. Writes grids and manifest.json into out_dir.
void make_feasibility_corpus(CorpusKind kind, int count, std::uint64_t seed, const fs::path& out_dir, int threads);

/// Writes <out_dir>/<kind>-<seed>.json for seeds seed .. seed+count-1.
BatchReport cmd_gen_motion(const SyntheticMotionSpec& base, int count, const fs::path& out_dir);

}  // namespace occu
