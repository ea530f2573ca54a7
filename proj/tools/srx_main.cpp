// srx — benchmark harness for two-stage night-to-day translation +
// super-resolution pipelines: dataset preparation, stage orchestration,
// metric/FID evaluation and report generation.

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "srx/dataset.hpp"
#include "srx/fid.hpp"
#include "srx/image.hpp"
#include "srx/metrics.hpp"
#include "srx/pipeline.hpp"
#include "srx/report.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

bool log_enabled() {
    const char* v = std::getenv("SRX_LOG");
    return v && *v;
}

void log_line(const std::string& msg) {
    if (log_enabled())
        std::cerr << "[srx] " << msg << "\n";
}

srx::TopologyId parse_topology(const std::string& s) {
    return (s == "m2" || s == "M2") ? srx::TopologyId::M2 : srx::TopologyId::M1;
}

std::string topology_name(srx::TopologyId t) {
    return t == srx::TopologyId::M1 ? "M1" : "M2";
}

std::string phase_name(srx::PhaseId p) {
    switch (p) {
    case srx::PhaseId::Pre: return "Pre";
    case srx::PhaseId::Intermediate: return "Intermediate";
    case srx::PhaseId::Post: return "Post";
    }
    return {};
}

struct StageOptions {
    std::string sr_cmd = "builtin:nearest";
    std::string translate_cmd = "builtin:copy";

    srx::StageSpec sr() const {
        return {"sr", sr_cmd, srx::StageKind::super_resolution, 4};
    }
    srx::StageSpec translation() const {
        return {"translate", translate_cmd, srx::StageKind::translation, 1};
    }
};

// ---------------------------------------------------------------------------
// eval

struct EvalSeries {
    std::vector<srx::MetricSeries> metrics;
    double fid = 0.0;
    std::size_t sample_count = 0;
};

struct SampleMetrics {
    double rmse = 0.0, mae = 0.0, ssim = 0.0, ncc = 0.0;
    bool ncc_ok = true;
};

EvalSeries evaluate_phase(srx::PhaseId phase,
                          srx::TopologyId topology,
                          const fs::path& manifest,
                          bool enable_m2_intermediate,
                          int jobs,
                          const std::string& features_mode,
                          const fs::path& features_dir) {
    const std::vector<srx::PhasePair> pairs =
        srx::phase_pairs(phase, topology, manifest, enable_m2_intermediate);

    std::vector<SampleMetrics> results(pairs.size());
    std::vector<Eigen::VectorXd> cand_feats(pairs.size()), ref_feats(pairs.size());
    const bool builtin = features_mode == "builtin";

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < pairs.size(); i = next.fetch_add(1)) {
            const auto [candidate, reference] = srx::load_phase_pair(pairs[i]);
            SampleMetrics& m = results[i];
            m.rmse = srx::rmse(candidate, reference).value;
            m.mae = srx::mae(candidate, reference).value;
            m.ssim = srx::ssim(candidate, reference).value;
            try {
                m.ncc = srx::ncc(candidate, reference).value;
            } catch (const srx::DegenerateInput&) {
                m.ncc_ok = false;
            }
            if (builtin) {
                cand_feats[i] = srx::builtin_features(candidate);
                ref_feats[i] = srx::builtin_features(reference);
            }
        }
    };
    const int nthreads = std::max(1, jobs);
    std::vector<std::thread> threads;
    for (int t = 1; t < nthreads; ++t)
        threads.emplace_back(worker);
    worker();
    for (auto& t : threads)
        t.join();

    const std::string model = topology_name(topology);
    const std::string pname = phase_name(phase);
    EvalSeries out;
    out.sample_count = pairs.size();
    srx::MetricSeries rmse_s{"RMSE", srx::Direction::lower_better, pname, model, {}, 0};
    srx::MetricSeries mae_s{"MAE", srx::Direction::lower_better, pname, model, {}, 0};
    srx::MetricSeries ssim_s{"SSIM", srx::Direction::higher_better, pname, model, {}, 0};
    srx::MetricSeries ncc_s{"NCC", srx::Direction::higher_better, pname, model, {}, 0};
    for (const auto& m : results) { // manifest order regardless of --jobs
        rmse_s.values.push_back(m.rmse);
        mae_s.values.push_back(m.mae);
        ssim_s.values.push_back(m.ssim);
        if (m.ncc_ok)
            ncc_s.values.push_back(m.ncc);
        else
            ++ncc_s.skipped;
    }
    out.metrics = {rmse_s, mae_s, ssim_s, ncc_s};

    srx::FeatureSet cand_set, ref_set;
    if (builtin) {
        cand_set.rows.resize(pairs.size(), srx::kBuiltinFeatureDim);
        ref_set.rows.resize(pairs.size(), srx::kBuiltinFeatureDim);
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            cand_set.rows.row(i) = cand_feats[i];
            ref_set.rows.row(i) = ref_feats[i];
        }
    } else {
        auto pick = [&](const std::string& stem) {
            for (const char* ext : {".srxf", ".csv"}) {
                fs::path p = features_dir / (stem + ext);
                if (fs::exists(p))
                    return srx::read_features(p);
            }
            throw srx::FileNotFound("no feature file " + stem + ".{srxf,csv} in " +
                                    features_dir.string());
        };
        cand_set = pick(model + "_" + pname);
        ref_set = pick("reference");
    }
    out.fid = srx::frechet_distance(srx::feature_stats(cand_set), srx::feature_stats(ref_set));
    return out;
}

ordered_json eval_to_json(const EvalSeries& ev, const std::string& model,
                          const std::string& phase) {
    ordered_json j;
    j["model"] = model;
    j["phase"] = phase;
    j["sample_count"] = ev.sample_count;
    j["fid"] = ev.fid;
    ordered_json metrics = ordered_json::array();
    for (const auto& s : ev.metrics) {
        metrics.push_back(
            {{"name", s.metric},
             {"direction", s.direction == srx::Direction::lower_better ? "lower" : "higher"},
             {"skipped", s.skipped},
             {"values", s.values}});
    }
    j["metrics"] = std::move(metrics);
    return j;
}

srx::PhaseReport report_from_eval_json(const ordered_json& j, int bins) {
    std::vector<srx::MetricSeries> series;
    for (const auto& mj : j.at("metrics")) {
        srx::MetricSeries s;
        s.metric = mj.at("name").get<std::string>();
        s.direction = mj.at("direction").get<std::string>() == "lower"
                          ? srx::Direction::lower_better
                          : srx::Direction::higher_better;
        s.skipped = mj.at("skipped").get<std::size_t>();
        s.values = mj.at("values").get<std::vector<double>>();
        series.push_back(std::move(s));
    }
    return srx::build_phase_report(series, j.at("fid").get<double>(), bins);
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw srx::IoError("cannot write " + path.string());
    out << text;
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw srx::FileNotFound("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// ---------------------------------------------------------------------------
// report / compare

int do_report(const fs::path& out_dir, int bins) {
    std::map<std::string, std::map<std::string, srx::PhaseReport>> by_model_phase;
    for (const auto& de : fs::directory_iterator(out_dir)) {
        const std::string name = de.path().filename().string();
        if (name.rfind("eval_", 0) != 0 || de.path().extension() != ".json")
            continue;
        const ordered_json j = ordered_json::parse(read_text(de.path()));
        by_model_phase[j.at("model")][j.at("phase")] = report_from_eval_json(j, bins);
    }
    if (by_model_phase.empty()) {
        std::cerr << "error: no eval_*.json files in " << out_dir << "\n";
        return 1;
    }

    ordered_json report_json;
    for (const auto& [model, phases] : by_model_phase) {
        for (const char* p : {"Pre", "Intermediate", "Post"}) {
            auto it = phases.find(p);
            if (it == phases.end())
                continue;
            report_json["models"][model][p] = srx::phase_report_to_json(it->second);
            for (const auto& [metric, summary] : it->second.metrics)
                write_text(out_dir / ("hist_" + model + "_" + std::string(p) + "_" + metric +
                                      ".csv"),
                           srx::histogram_csv(summary.hist));
        }
    }
    write_text(out_dir / "report.json", report_json.dump(2) + "\n");
    write_text(out_dir / "report.md", srx::render_report_markdown(by_model_phase));
    std::cout << "wrote " << (out_dir / "report.json").string() << "\n";
    return 0;
}

int do_compare(const fs::path& out_dir) {
    const fs::path report_path = out_dir / "report.json";
    if (!fs::exists(report_path)) {
        std::cerr << "error: MissingReport: " << report_path << " not found (run `srx report` first)\n";
        return 1;
    }
    const ordered_json j = ordered_json::parse(read_text(report_path));
    const auto& models = j.at("models");
    if (!models.contains("M1") || !models["M1"].contains("Post") || !models.contains("M2") ||
        !models["M2"].contains("Post")) {
        std::cerr << "error: MissingReport: compare needs Post reports for both M1 and M2\n";
        return 1;
    }
    const srx::PhaseReport m1 = srx::phase_report_from_json(models["M1"]["Post"]);
    const srx::PhaseReport m2 = srx::phase_report_from_json(models["M2"]["Post"]);
    const std::vector<srx::ComparisonRow> rows = srx::compare(m1, m2);

    ordered_json cj = ordered_json::array();
    for (const auto& r : rows)
        cj.push_back({{"metric", r.metric},
                      {"direction",
                       r.direction == srx::Direction::lower_better ? "lower" : "higher"},
                      {"M1", r.m1},
                      {"M2", r.m2},
                      {"better", r.winner}});
    write_text(out_dir / "compare.json", cj.dump(2) + "\n");
    const std::string md = srx::render_comparison_markdown(rows);
    write_text(out_dir / "compare.md", md);
    std::cout << md;
    return 0;
}

// ---------------------------------------------------------------------------
// selftest

void synth_pairs(const fs::path& dir, int count, int hr_size, std::uint64_t seed) {
    fs::create_directories(dir);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int i = 0; i < count; ++i) {
        srx::Image pair(hr_size, 2 * hr_size, 3);
        for (double& v : pair.data)
            v = uni(rng);
        char name[32];
        std::snprintf(name, sizeof(name), "pair_%05d.png", i);
        srx::save_image(pair, dir / name);
    }
}

int do_selftest(fs::path work, int pairs_count) {
    if (work.empty())
        work = fs::temp_directory_path() / ("srx_selftest_" + std::to_string(::getpid()));
    fs::remove_all(work);
    log_line("selftest workspace: " + work.string());

    synth_pairs(work / "src", pairs_count, 16, 1234);
    srx::DatasetConfig cfg;
    cfg.zoom = 4;
    cfg.lr_size = 4;
    cfg.hr_size = 16;
    srx::prepare(work / "src", work / "data", cfg);

    bool ok = true;
    for (srx::TopologyId topology : {srx::TopologyId::M1, srx::TopologyId::M2}) {
        const std::string model = topology_name(topology);
        const fs::path run_dir = work / ("run_" + model);
        srx::run_topology(topology, work / "data" / "manifest.jsonl", srx::null_sr_stage(),
                          srx::null_translation_stage(), run_dir, "all");
        const EvalSeries pre = evaluate_phase(srx::PhaseId::Pre, topology,
                                              run_dir / "manifest.jsonl", false, 1, "builtin", {});
        const EvalSeries post = evaluate_phase(srx::PhaseId::Post, topology,
                                               run_dir / "manifest.jsonl", false, 1, "builtin", {});
        const std::string pre_bytes =
            srx::phase_report_to_json(srx::build_phase_report(pre.metrics, pre.fid)).dump(2);
        const std::string post_bytes =
            srx::phase_report_to_json(srx::build_phase_report(post.metrics, post.fid)).dump(2);
        if (pre_bytes == post_bytes) {
            std::cout << model << ": Pre == Post\n";
        } else {
            std::cout << model << ": Pre != Post (null-stage invariant violated)\n";
            ok = false;
        }
    }
    if (ok)
        std::cout << "selftest OK\n";
    return ok ? 0 : 1;
}

// stage protocol implementation used when the null stages are exercised as
// real subprocesses
int do_null_stage(const std::string& kind, const fs::path& in_dir, const fs::path& out_dir) {
    const srx::StageSpec spec =
        kind == "sr" ? srx::null_sr_stage() : srx::null_translation_stage();
    srx::run_stage(spec, in_dir, out_dir);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"srx: night-to-day translation + super-resolution benchmark harness"};
    app.require_subcommand(1);
    app.set_config("--config");

    // prepare -------------------------------------------------------------
    auto* prepare_cmd = app.add_subcommand("prepare", "Build the benchmark dataset layout");
    std::string prep_src, prep_out, day_side = "left";
    srx::DatasetConfig dcfg;
    prepare_cmd->add_option("--src", prep_src, "Directory of side-by-side day|night PNG pairs")
        ->required();
    prepare_cmd->add_option("--out", prep_out, "Output dataset directory")->required();
    prepare_cmd->add_option("--zoom", dcfg.zoom, "Zoom factor (default 4)");
    prepare_cmd->add_option("--lr-size", dcfg.lr_size, "LR image size (default 64)");
    prepare_cmd->add_option("--hr-size", dcfg.hr_size, "HR image size (default 256)");
    prepare_cmd->add_option("--seed", dcfg.seed, "Split shuffle seed (default 0)");
    prepare_cmd->add_option("--day-side", day_side, "Which half is the day image: left|right")
        ->check(CLI::IsMember({"left", "right"}));

    // run -----------------------------------------------------------------
    auto* run_cmd = app.add_subcommand("run", "Run a two-stage topology over a manifest");
    std::string run_manifest, run_topo = "m1", run_out, run_split = "test";
    StageOptions stages;
    run_cmd->add_option("--manifest", run_manifest, "Dataset manifest (JSON Lines)")->required();
    run_cmd->add_option("--topology", run_topo, "m1 (SR first) or m2 (translation first)")
        ->check(CLI::IsMember({"m1", "m2", "M1", "M2"}));
    run_cmd->add_option("--sr-cmd", stages.sr_cmd,
                        "Super-resolution stage command (default builtin:nearest)");
    run_cmd->add_option("--translate-cmd", stages.translate_cmd,
                        "Translation stage command (default builtin:copy)");
    run_cmd->add_option("--out", run_out, "Work directory for stage outputs")->required();
    run_cmd->add_option("--split", run_split, "Split to process: train|val|test|all");
    bool run_no_validate = false;
    run_cmd->add_flag("--no-validate", run_no_validate, "Skip manifest validation");

    // eval ----------------------------------------------------------------
    auto* eval_cmd = app.add_subcommand("eval", "Evaluate metrics + FID over phases");
    std::string eval_manifest, eval_topo = "m1", eval_out, eval_features = "builtin";
    std::vector<std::string> eval_phases;
    int jobs = 1;
    bool enable_m2_intermediate = false;
    eval_cmd->add_option("--manifest", eval_manifest, "Augmented manifest from `srx run`")
        ->required();
    eval_cmd->add_option("--topology", eval_topo, "m1 or m2")
        ->check(CLI::IsMember({"m1", "m2", "M1", "M2"}));
    eval_cmd->add_option("--phase", eval_phases,
                         "Phases to evaluate: pre|intermediate|post (default: all applicable)");
    eval_cmd->add_option("--out", eval_out, "Directory for eval_*.json results")->required();
    eval_cmd->add_option("--jobs", jobs, "Worker threads for per-image metrics (default 1)");
    eval_cmd->add_option("--features", eval_features,
                         "FID feature source: builtin or files:<dir>");
    eval_cmd->add_flag("--enable-m2-intermediate", enable_m2_intermediate,
                       "Enable the M2-Intermediate phase");

    // report --------------------------------------------------------------
    auto* report_cmd = app.add_subcommand("report", "Render tables and histograms");
    std::string report_out;
    int bins = 50;
    report_cmd->add_option("--out", report_out, "Directory holding eval_*.json")->required();
    report_cmd->add_option("--bins", bins, "Histogram bin count (default 50)");

    // compare -------------------------------------------------------------
    auto* compare_cmd = app.add_subcommand("compare", "Compare M1 vs M2 Post reports");
    std::string compare_out;
    compare_cmd->add_option("--out", compare_out, "Directory holding report.json")->required();

    // selftest ------------------------------------------------------------
    auto* selftest_cmd =
        app.add_subcommand("selftest", "Null-stage end-to-end invariant check");
    std::string selftest_out;
    int selftest_pairs = 20;
    selftest_cmd->add_option("--out", selftest_out, "Workspace (default: temp directory)");
    selftest_cmd->add_option("--pairs", selftest_pairs, "Synthetic pair count (default 20)");

    // null stages (stage-protocol executables) ----------------------------
    auto* null_sr = app.add_subcommand("null-sr", "Null SR stage: nearest x4 upsample");
    auto* null_tr = app.add_subcommand("null-translate", "Null translation stage: copy");
    std::string stage_in, stage_out;
    for (auto* c : {null_sr, null_tr}) {
        c->add_option("--input", stage_in, "Input directory")->required();
        c->add_option("--output", stage_out, "Output directory")->required();
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (prepare_cmd->parsed()) {
            dcfg.day_left = (day_side == "left");
            const auto entries = srx::prepare(prep_src, prep_out, dcfg);
            std::size_t n_train = 0, n_val = 0, n_test = 0;
            for (const auto& e : entries)
                (e.split == "train" ? n_train : e.split == "val" ? n_val : n_test)++;
            std::cout << "prepared " << entries.size() << " pairs (train " << n_train << ", val "
                      << n_val << ", test " << n_test << ") -> "
                      << (fs::path(prep_out) / "manifest.jsonl").string() << "\n";
        } else if (run_cmd->parsed()) {
            if (!run_no_validate) {
                const auto violations = srx::validate_manifest(run_manifest, 4);
                if (!violations.empty()) {
                    for (const auto& v : violations)
                        std::cerr << "violation [" << v.kind << "] " << v.id << ": " << v.detail
                                  << "\n";
                    return 1;
                }
            }
            const auto entries =
                srx::run_topology(parse_topology(run_topo), run_manifest, stages.sr(),
                                  stages.translation(), run_out, run_split);
            std::cout << "ran " << topology_name(parse_topology(run_topo)) << " over "
                      << entries.size() << " samples -> "
                      << (fs::path(run_out) / "manifest.jsonl").string() << "\n";
        } else if (eval_cmd->parsed()) {
            const srx::TopologyId topology = parse_topology(eval_topo);
            std::string features_mode = "builtin";
            fs::path features_dir;
            if (eval_features.rfind("files:", 0) == 0) {
                features_mode = "files";
                features_dir = eval_features.substr(6);
            } else if (eval_features != "builtin") {
                std::cerr << "error: --features must be 'builtin' or 'files:<dir>'\n";
                return 1;
            }
            if (eval_phases.empty()) {
                eval_phases = {"pre", "post"};
                if (topology == srx::TopologyId::M1 || enable_m2_intermediate)
                    eval_phases.insert(eval_phases.begin() + 1, "intermediate");
            }
            fs::create_directories(eval_out);
            for (const std::string& ps : eval_phases) {
                const srx::PhaseId phase = ps == "pre"            ? srx::PhaseId::Pre
                                           : ps == "intermediate" ? srx::PhaseId::Intermediate
                                                                  : srx::PhaseId::Post;
                log_line("evaluating " + topology_name(topology) + "-" + phase_name(phase));
                const EvalSeries ev =
                    evaluate_phase(phase, topology, eval_manifest, enable_m2_intermediate,
                                   jobs, features_mode, features_dir);
                const fs::path out = fs::path(eval_out) / ("eval_" + topology_name(topology) +
                                                           "_" + phase_name(phase) + ".json");
                write_text(out, eval_to_json(ev, topology_name(topology), phase_name(phase))
                                    .dump(2) +
                                    "\n");
                std::cout << "wrote " << out.string() << "\n";
            }
        } else if (report_cmd->parsed()) {
            return do_report(report_out, bins);
        } else if (compare_cmd->parsed()) {
            return do_compare(compare_out);
        } else if (selftest_cmd->parsed()) {
            return do_selftest(selftest_out, selftest_pairs);
        } else if (null_sr->parsed()) {
            return do_null_stage("sr", stage_in, stage_out);
        } else if (null_tr->parsed()) {
            return do_null_stage("translate", stage_in, stage_out);
        }
    } catch (const srx::StageCrashed& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const srx::MissingOutput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const srx::WrongOutputScale& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const srx::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
