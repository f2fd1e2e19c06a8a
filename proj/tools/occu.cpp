// SPDX-FileCopyrightText: 2026 occu authors
// SPDX-License-Identifier: Apache-2.0

// occu: MOB construction, episode running, evaluation and export.

#include <algorithm>
#include <iostream>

#include <CLI11.hpp>

#include "occu/io_util.hpp"
#include "occu/parallel.hpp"
#include "occu/pipeline.hpp"

namespace fs = std::filesystem;
using namespace occu;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitFatal = 3;

// Files given directly plus files with one of `exts` inside given directories, sorted.
std::vector<fs::path> expand(const std::vector<std::string>& inputs, const std::vector<std::string>& exts)
{
    std::vector<fs::path> out;
    for (const auto& in : inputs) {
        if (fs::is_directory(in)) {
            std::vector<fs::path> found;
            for (const auto& e : fs::directory_iterator(in))
                if (e.is_regular_file() && std::find(exts.begin(), exts.end(), e.path().extension()) != exts.end() &&
                    e.path().filename() != "manifest.json" && e.path().filename() != "timings.json")
                    found.push_back(e.path());
            std::sort(found.begin(), found.end());
            out.insert(out.end(), found.begin(), found.end());
        } else {
            out.emplace_back(in);
        }
    }
    return out;
}

int report_batch(const BatchReport& r, bool verbose, const char* what)
{
    for (const auto& i : r.items) {
        if (!i.error.empty())
            std::cerr << what << ": " << i.input << ": " << i.error << "\n";
        else if (verbose)
            std::cerr << what << ": " << i.input << " -> " << i.output << "\n";
    }
    std::cout << what << ": " << r.items.size() - r.failures() << " ok, " << r.failures() << " failed\n";
    return r.exit_code();
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"occu: occupancy-conditioned motion pipeline"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    int threads = 0;
    std::optional<std::uint64_t> seed;
    bool verbose = false;
    app.add_option("--config", config_path, "Run configuration (key = value)")->check(CLI::ExistingFile);
    app.add_option("--threads", threads, "Worker threads (default: OCCU_THREADS or all cores)")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--seed", seed, "Base seed");
    app.add_flag("--verbose,-v", verbose, "Per-item progress on stderr");

    // build-mob
    auto* build = app.add_subcommand("build-mob", "Voxelize motions into pseudo-scene grids");
    std::vector<std::string> build_inputs;
    std::string build_out;
    std::optional<double> build_unit;
    build->add_option("motions", build_inputs, "Motion files or directories")->required();
    build->add_option("--out", build_out, "Output directory")->required();
    build->add_option("--unit", build_unit, "Voxel size in meters");

    // run
    auto* run = app.add_subcommand("run", "Roll out episodes");
    std::vector<std::string> run_inputs;
    std::string run_out, suite, provider_override;
    int suite_count = 20;
    bool no_regulation = false;
    run->add_option("episodes", run_inputs, "Episode configuration files");
    run->add_option("--suite", suite, "Built-in suite: open, walls or door");
    run->add_option("--count", suite_count, "Episodes in the suite")->check(CLI::PositiveNumber);
    run->add_option("--provider", provider_override, "Override provider: empty, door, static:<grid>, swap:<t>");
    run->add_flag("--no-regulation", no_regulation, "Disable field regulation");
    run->add_option("--out", run_out, "Output directory")->required();

    // eval
    auto* eval = app.add_subcommand("eval", "Metrics over episode results or recorded motions");
    std::vector<std::string> eval_inputs;
    std::string eval_grids, eval_json;
    eval->add_option("results", eval_inputs, "Result files or directories")->required();
    eval->add_option("--grids", eval_grids, "Directory of pseudo-scene grids");
    eval->add_option("--json", eval_json, "Write the JSON report here");

    // export
    auto* exp = app.add_subcommand("export", "Export a grid, episode or motion for viewing");
    std::string exp_input, exp_format = "ply", exp_out;
    bool exp_complement = false;
    std::vector<int> exp_crop;
    exp->add_option("input", exp_input, "Grid (.mobg), episode (.jsonl) or motion (.json)")->required();
    exp->add_option("--format", exp_format, "ply, obj, json or mobg (grids only)");
    exp->add_option("--out", exp_out, "Output file")->required();
    exp->add_flag("--complement", exp_complement, "Export the complement of a grid");
    exp->add_option("--crop", exp_crop, "Crop a grid to cells x0 y0 z0 nx ny nz first")->expected(6);

    // feasibility
    auto* feas = app.add_subcommand("feasibility", "Cylinder A* over a grid manifest");
    std::string feas_manifest, feas_out, corpus;
    Cylinder cylinder;
    int corpus_count = 50;
    feas->add_option("manifest", feas_manifest, "Grid manifest (manifest.json)");
    feas->add_option("--radius", cylinder.radius, "Cylinder radius (m)")->check(CLI::NonNegativeNumber);
    feas->add_option("--height", cylinder.height, "Cylinder height (m)")->check(CLI::PositiveNumber);
    feas->add_option("--make-corpus", corpus, "Generate an open or cramped corpus into the manifest's directory first");
    feas->add_option("--count", corpus_count, "Grids in a generated corpus")->check(CLI::PositiveNumber);
    feas->add_option("--out", feas_out, "Write the JSON report here");

    // gen-motion
    auto* gen = app.add_subcommand("gen-motion", "Generate synthetic motions");
    std::string gen_kind = "walk", gen_out;
    SyntheticMotionSpec gen_spec;
    int gen_count = 1;
    gen->add_option("--kind", gen_kind, "walk, turn, sit, crawl or reach");
    gen->add_option("--duration", gen_spec.duration, "Seconds");
    gen->add_option("--speed", gen_spec.speed, "m/s");
    gen->add_option("--fps", gen_spec.fps, "Frames per second");
    gen->add_option("--count", gen_count, "Consecutive seeds to generate")->check(CLI::PositiveNumber);
    gen->add_option("--out", gen_out, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        RunConfig config = config_path.empty() ? RunConfig{} : load_run_config(config_path);
        if (threads > 0) config.threads = threads;
        if (seed) config.seed = *seed;
        const int workers = config.thread_count();
        if (verbose) std::cerr << "threads: " << workers << "\n";

        if (*build) {
            const auto files = expand(build_inputs, {".json"});
            if (files.empty()) throw CLI::ValidationError("build-mob", "no motion files found");
            return report_batch(cmd_build_mob(files, build_out, build_unit.value_or(config.unit), workers), verbose,
                                "build-mob");
        }
        if (*run) {
            std::vector<EpisodeSpec> episodes;
            if (!suite.empty()) episodes = suite_episodes(suite, suite_count, config.seed);
            for (const auto& p : run_inputs) episodes.push_back(load_episode_config(p));
            if (episodes.empty()) throw CLI::ValidationError("run", "give episode files or --suite");
            if (!provider_override.empty()) {
                const auto provider = make_provider(provider_override);
                for (auto& e : episodes) e.episode.provider = provider;
            }
            if (no_regulation) config.regulate = false;
            config.threads = workers;
            return report_batch(cmd_run(episodes, run_out, config), verbose, "run");
        }
        if (*eval) {
            const auto files = expand(eval_inputs, {".jsonl", ".json"});
            std::optional<fs::path> grids;
            if (!eval_grids.empty()) grids = eval_grids;
            config.threads = workers;
            const auto report = cmd_eval(files, grids, config);
            std::cout << report_table(report);
            if (!eval_json.empty()) write_file_atomic(eval_json, report_json(report) + "\n");
            return 0;
        }
        if (*exp) {
            const auto format = export_format_from_string(exp_format);
            if (!format) throw CLI::ValidationError("--format", "expected ply, obj, json or mobg");
            std::optional<CropBox> box;
            if (!exp_crop.empty())
                box = CropBox{{exp_crop[0], exp_crop[1], exp_crop[2]}, {exp_crop[3], exp_crop[4], exp_crop[5]}};
            write_file_atomic(exp_out, cmd_export(exp_input, *format, exp_complement, box));
            return 0;
        }
        if (*feas) {
            if (feas_manifest.empty()) throw CLI::ValidationError("feasibility", "manifest path required");
            if (!corpus.empty()) {
                const auto kind = corpus_kind_from_string(corpus);
                if (!kind) throw CLI::ValidationError("--make-corpus", "expected open or cramped");
                make_feasibility_corpus(*kind, corpus_count, config.seed, fs::path(feas_manifest).parent_path(),
                                        workers);
            }
            const auto report = cmd_feasibility(feas_manifest, cylinder, workers);
            for (const auto& e : report.entries)
                if (!e.error.empty()) std::cerr << "feasibility: " << e.grid << ": " << e.error << "\n";
            std::cout << "infeasible fraction: " << report.infeasible_fraction << "\n";
            if (!feas_out.empty()) write_file_atomic(feas_out, report.to_json());
            return report.exit_code();
        }
        if (*gen) {
            const auto kind = motion_kind_from_string(gen_kind);
            if (!kind) throw CLI::ValidationError("--kind", "expected walk, turn, sit, crawl or reach");
            gen_spec.kind = *kind;
            gen_spec.seed = config.seed;
            return report_batch(cmd_gen_motion(gen_spec, gen_count, gen_out), verbose, "gen-motion");
        }
    } catch (const CLI::Error& e) {
        std::cerr << "occu: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "occu: " << e.what() << "\n";
        return kExitFatal;
    }
    return kExitUsage;
}
