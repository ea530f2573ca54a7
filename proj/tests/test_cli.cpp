#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "oracles.hpp"
#include "srx/image.hpp"

namespace fs = std::filesystem;

namespace {

struct CmdResult {
    int exit_code = -1;
    std::string out; // stdout + stderr
};

std::string srx_bin() {
    const char* bin = std::getenv("SRX_BIN");
    REQUIRE_MESSAGE(bin != nullptr, "SRX_BIN must point at the srx binary");
    return bin;
}

CmdResult run_cmd(const std::string& args) {
    const std::string cmd = srx_bin() + " " + args + " 2>&1";
    std::FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CmdResult r;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof(buf), pipe))
        r.out.append(buf, n);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

fs::path make_source_pairs(const std::string& name, int count) {
    const fs::path dir = fresh_dir(name);
    std::mt19937_64 rng(999);
    for (int i = 0; i < count; ++i) {
        char fname[32];
        std::snprintf(fname, sizeof(fname), "p%03d.png", i);
        srx::save_image(oracle::random_image(rng, 16, 32, 3), dir / fname);
    }
    return dir;
}

} // namespace

TEST_CASE("cli selftest confirms the null-stage invariant") {
    const fs::path work = fresh_dir("srx_cli_selftest");
    const CmdResult r = run_cmd("selftest --out " + work.string() + " --pairs 10");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("M1: Pre == Post") != std::string::npos);
    CHECK(r.out.find("M2: Pre == Post") != std::string::npos);
}

TEST_CASE("cli end-to-end: prepare, run, eval, report, compare") {
    const fs::path src = make_source_pairs("srx_cli_src", 10);
    const fs::path data = fresh_dir("srx_cli_data");
    const fs::path out = fresh_dir("srx_cli_out");

    CmdResult r = run_cmd("prepare --src " + src.string() + " --out " + data.string() +
                          " --zoom 4 --lr-size 4 --hr-size 16");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("train 8, val 1, test 1") != std::string::npos);

    for (const std::string topo : {"m1", "m2"}) {
        const fs::path work = fresh_dir("srx_cli_run_" + topo);
        r = run_cmd("run --manifest " + (data / "manifest.jsonl").string() + " --topology " +
                    topo + " --out " + work.string() + " --split all");
        REQUIRE(r.exit_code == 0);
        r = run_cmd("eval --manifest " + (work / "manifest.jsonl").string() + " --topology " +
                    topo + " --phase pre --phase post --out " + out.string() + " --jobs 2");
        REQUIRE(r.exit_code == 0);
    }

    r = run_cmd("report --out " + out.string() + " --bins 10");
    REQUIRE(r.exit_code == 0);
    CHECK(fs::exists(out / "report.json"));
    CHECK(fs::exists(out / "report.md"));
    CHECK(fs::exists(out / "hist_M1_Pre_RMSE.csv"));

    r = run_cmd("compare --out " + out.string());
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("| RMSE") != std::string::npos);
    CHECK(fs::exists(out / "compare.md"));
}

TEST_CASE("cli eval with external null stages over the subprocess protocol") {
    const fs::path src = make_source_pairs("srx_cli_ext_src", 6);
    const fs::path data = fresh_dir("srx_cli_ext_data");
    CmdResult r = run_cmd("prepare --src " + src.string() + " --out " + data.string() +
                          " --zoom 4 --lr-size 4 --hr-size 16");
    REQUIRE(r.exit_code == 0);

    // the harness invokes this very binary as an external stage
    const fs::path work = fresh_dir("srx_cli_ext_run");
    r = run_cmd("run --manifest " + (data / "manifest.jsonl").string() +
                " --topology m1 --sr-cmd \"" + srx_bin() + " null-sr\" --translate-cmd \"" +
                srx_bin() + " null-translate\" --out " + work.string() + " --split all");
    REQUIRE(r.exit_code == 0);
    CHECK(fs::exists(work / "manifest.jsonl"));
}

TEST_CASE("cli error paths and exit codes") {
    SUBCASE("M2 intermediate without the enable flag exits 1") {
        // build a tiny augmented manifest first
        const fs::path src = make_source_pairs("srx_cli_m2i_src", 5);
        const fs::path data = fresh_dir("srx_cli_m2i_data");
        run_cmd("prepare --src " + src.string() + " --out " + data.string() +
                " --zoom 4 --lr-size 4 --hr-size 16");
        const fs::path work = fresh_dir("srx_cli_m2i_run");
        run_cmd("run --manifest " + (data / "manifest.jsonl").string() +
                " --topology m2 --out " + work.string() + " --split all");
        const fs::path out = fresh_dir("srx_cli_m2i_out");
        const CmdResult r =
            run_cmd("eval --manifest " + (work / "manifest.jsonl").string() +
                    " --topology m2 --phase intermediate --out " + out.string());
        CHECK(r.exit_code == 1);
        CHECK(r.out.find("M2-Intermediate") != std::string::npos);
    }

    SUBCASE("compare without both models exits 1 with MissingReport") {
        const fs::path out = fresh_dir("srx_cli_missing");
        std::ofstream(out / "report.json")
            << R"({"models":{"M1":{"Post":{"sample_count":1,"fid":0.0,"metrics":{}}}}})";
        const CmdResult r = run_cmd("compare --out " + out.string());
        CHECK(r.exit_code == 1);
        CHECK(r.out.find("MissingReport") != std::string::npos);
    }

    SUBCASE("crashing stage exits 2") {
        const fs::path src = make_source_pairs("srx_cli_crash_src", 5);
        const fs::path data = fresh_dir("srx_cli_crash_data");
        run_cmd("prepare --src " + src.string() + " --out " + data.string() +
                " --zoom 4 --lr-size 4 --hr-size 16");
        const CmdResult r = run_cmd("run --manifest " + (data / "manifest.jsonl").string() +
                                    " --topology m1 --sr-cmd false --out " +
                                    fresh_dir("srx_cli_crash_run").string() + " --split all");
        CHECK(r.exit_code == 2);
    }

    SUBCASE("unknown subcommand exits nonzero with usage") {
        const CmdResult r = run_cmd("frobnicate");
        CHECK(r.exit_code != 0);
    }
}

TEST_CASE("cli help enumerates every subcommand and its flags") {
    const CmdResult top = run_cmd("--help");
    CHECK(top.exit_code == 0);
    for (const char* sub :
         {"prepare", "run", "eval", "report", "compare", "selftest"})
        CHECK(top.out.find(sub) != std::string::npos);

    const CmdResult eval_help = run_cmd("eval --help");
    for (const char* flag : {"--manifest", "--topology", "--phase", "--out", "--jobs",
                             "--features", "--enable-m2-intermediate"})
        CHECK(eval_help.out.find(flag) != std::string::npos);

    const CmdResult run_help = run_cmd("run --help");
    for (const char* flag : {"--sr-cmd", "--translate-cmd", "--split"})
        CHECK(run_help.out.find(flag) != std::string::npos);

    const CmdResult report_help = run_cmd("report --help");
    CHECK(report_help.out.find("--bins") != std::string::npos);

    const CmdResult prep_help = run_cmd("prepare --help");
    CHECK(prep_help.out.find("--seed") != std::string::npos);
}

TEST_CASE("cli determinism: two identical runs give byte-identical reports") {
    const fs::path src = make_source_pairs("srx_cli_det_src", 8);
    auto one_run = [&](const std::string& tag) {
        const fs::path data = fresh_dir("srx_cli_det_data_" + tag);
        const fs::path work = fresh_dir("srx_cli_det_run_" + tag);
        const fs::path out = fresh_dir("srx_cli_det_out_" + tag);
        run_cmd("prepare --src " + src.string() + " --out " + data.string() +
                " --zoom 4 --lr-size 4 --hr-size 16 --seed 5");
        run_cmd("run --manifest " + (data / "manifest.jsonl").string() +
                " --topology m1 --out " + work.string() + " --split all");
        run_cmd("eval --manifest " + (work / "manifest.jsonl").string() +
                " --topology m1 --phase post --out " + out.string());
        run_cmd("report --out " + out.string());
        std::ifstream in(out / "report.json", std::ios::binary);
        return std::string((std::istreambuf_iterator<char>(in)), {});
    };
    const std::string a = one_run("a");
    const std::string b = one_run("b");
    REQUIRE(!a.empty());
    CHECK(a == b);
}
