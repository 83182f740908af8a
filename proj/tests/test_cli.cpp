#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "commands.hpp"
#include "config.hpp"

using namespace qd::cli;

namespace {

namespace fs = std::filesystem;

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag)
        : path(fs::temp_directory_path() / ("qd_cli_" + tag)) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path write_config(const TempDir& tmp, const std::string& name, const std::string& body) {
    const auto path = tmp.path / name;
    std::ofstream out(path);
    out << body;
    return path;
}

const char* kSmallRun = R"(
# small arm run
[objective]
name = arm
arm_joints = 4

[container]
kind = grid
grid_bins = 8,8

[engine]
init = 100
iterations = 20
batch = 16
seed = 5
)";

}  // namespace

TEST_CASE("config files parse with line-precise errors") {
    TempDir tmp("parse");

    SUBCASE("unknown key is rejected with its line number") {
        const auto path = write_config(tmp, "bad.ini", "[engine]\nsigma3 = 1\n");
        try {
            ExperimentFile::load(path.string());
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            const std::string what = e.what();
            CHECK(what.find("sigma3") != std::string::npos);
            CHECK(what.find(":2") != std::string::npos);
        }
    }

    SUBCASE("unknown section is rejected") {
        const auto path = write_config(tmp, "bad.ini", "[engines]\niterations = 1\n");
        CHECK_THROWS_AS(ExperimentFile::load(path.string()), ConfigError);
    }

    SUBCASE("duplicate keys are rejected") {
        const auto path = write_config(tmp, "dup.ini", "[engine]\nseed = 1\nseed = 2\n");
        CHECK_THROWS_AS(ExperimentFile::load(path.string()), ConfigError);
    }

    SUBCASE("values parse with defaults applied") {
        const auto path = write_config(tmp, "ok.ini", "[objective]\nname = arm\n");
        const auto file = ExperimentFile::load(path.string());
        CHECK(file.get_int("engine", "iterations") == 500);  // schema default
        CHECK(file.get_string("objective", "name") == "arm");
        CHECK(file.get_bool("output", "heatmap"));
        CHECK(file.get_int_list("container", "grid_bins") == std::vector<int>{64, 64});
    }

    SUBCASE("overrides are validated like file keys") {
        const auto path = write_config(tmp, "ok.ini", "[objective]\nname = arm\n");
        auto file = ExperimentFile::load(path.string());
        file.apply_override("engine.iterations=10");
        CHECK(file.get_int("engine", "iterations") == 10);
        CHECK_THROWS_AS(file.apply_override("engine.iterationz=10"), ConfigError);
        CHECK_THROWS_AS(file.apply_override("nonsense"), ConfigError);
    }
}

TEST_CASE("missing objective section exits with the config code naming the key") {
    TempDir tmp("missing");
    const auto path = write_config(tmp, "no_objective.ini", "[engine]\niterations = 5\n");
    ::setenv("QD_OUT_DIR", (tmp.path / "out").c_str(), 1);
    CHECK(cmd_run({path.string(), {}}) == kExitConfig);
    ::unsetenv("QD_OUT_DIR");
}

TEST_CASE("run writes archive, metrics and heatmap; reruns are byte-identical") {
    TempDir tmp("determinism");
    const auto config = write_config(tmp, "run.ini", kSmallRun);

    const auto out_a = tmp.path / "a";
    const auto out_b = tmp.path / "b";
    ::setenv("QD_OUT_DIR", out_a.c_str(), 1);
    REQUIRE(cmd_run({config.string(), {}}) == kExitOk);
    ::setenv("QD_OUT_DIR", out_b.c_str(), 1);
    REQUIRE(cmd_run({config.string(), {}}) == kExitOk);
    ::unsetenv("QD_OUT_DIR");

    for (const char* name : {"archive.csv", "metrics.csv", "heatmap.ppm"}) {
        CHECK(fs::exists(out_a / name));
        CHECK(slurp(out_a / name) == slurp(out_b / name));
    }
}

TEST_CASE("semantic config mistakes map to the config exit code") {
    TempDir tmp("semantic");
    const auto config = write_config(tmp, "bad.ini", R"(
[objective]
name = arm

[selector]
kind = cell-rank

[container]
kind = grid
)");
    ::setenv("QD_OUT_DIR", (tmp.path / "out").c_str(), 1);
    CHECK(cmd_run({config.string(), {}}) == kExitConfig);  // cell-rank needs a deep grid
    ::unsetenv("QD_OUT_DIR");
}

TEST_CASE("cvt runs are byte-identical across the cache write and reload") {
    TempDir tmp("cvt_cache");
    const auto config = write_config(tmp, "cvt.ini", R"(
[objective]
name = arm
arm_joints = 4

[container]
kind = cvt
cvt_cells = 50
cvt_seed = 2

[engine]
init = 100
iterations = 10
batch = 20
seed = 4
)");
    const auto out = tmp.path / "out";
    ::setenv("QD_OUT_DIR", out.c_str(), 1);
    REQUIRE(cmd_run({config.string(), {}}) == kExitOk);  // builds and caches the centroids
    const auto first = slurp(out / "archive.csv");
    REQUIRE(cmd_run({config.string(), {}}) == kExitOk);  // reloads them from disk
    ::unsetenv("QD_OUT_DIR");
    CHECK(fs::exists(out / "cvt_cache" / "cvt_k50_K5000_d2_seed2.csv"));
    CHECK(slurp(out / "archive.csv") == first);
}

TEST_CASE("thread override does not change the outputs") {
    TempDir tmp("threads");
    const auto config = write_config(tmp, "run.ini", kSmallRun);
    const auto serial = tmp.path / "serial";
    const auto threaded = tmp.path / "threaded";
    ::setenv("QD_OUT_DIR", serial.c_str(), 1);
    REQUIRE(cmd_run({config.string(), {"engine.threads=1"}}) == kExitOk);
    ::setenv("QD_OUT_DIR", threaded.c_str(), 1);
    REQUIRE(cmd_run({config.string(), {"engine.threads=8"}}) == kExitOk);
    ::unsetenv("QD_OUT_DIR");
    CHECK(slurp(serial / "archive.csv") == slurp(threaded / "archive.csv"));
    CHECK(slurp(serial / "metrics.csv") == slurp(threaded / "metrics.csv"));
}

TEST_CASE("iteration override controls the metrics row count") {
    TempDir tmp("override");
    const auto config = write_config(tmp, "run.ini", kSmallRun);
    const auto out = tmp.path / "out";
    ::setenv("QD_OUT_DIR", out.c_str(), 1);
    REQUIRE(cmd_run({config.string(), {"engine.iterations=10"}}) == kExitOk);
    ::unsetenv("QD_OUT_DIR");
    const auto metrics = slurp(out / "metrics.csv");
    // header + init record + 10 per-iteration records
    CHECK(std::count(metrics.begin(), metrics.end(), '\n') == 12);
}

TEST_CASE("oracle against its own export reports zero gaps") {
    TempDir tmp("oracle");
    const std::string base = R"(
[objective]
name = illum
illum_dim = 2

[container]
kind = grid
grid_bins = 5,5

[oracle]
lattice = 21,21
)";
    const auto config = write_config(tmp, "oracle.ini", base);
    const auto out = tmp.path / "out";
    ::setenv("QD_OUT_DIR", out.c_str(), 1);
    REQUIRE(cmd_oracle({config.string(), {}}) == kExitOk);
    REQUIRE(fs::exists(out / "oracle_archive.csv"));

    // compare the oracle with itself: nothing can be below it
    const auto compare = write_config(
        tmp, "compare.ini",
        base + std::string("compare = ") + (out / "oracle_archive.csv").string() + "\n");
    REQUIRE(cmd_oracle({compare.string(), {}}) == kExitOk);

    // a run archive missing cells gets them reported: point the comparison
    // at an empty archive (header only)
    const auto empty_csv = tmp.path / "empty.csv";
    {
        std::ofstream outf(empty_csv);
        outf << "cell_id,cell_0,cell_1,fitness,desc_0,desc_1,genotype_0,genotype_1\n";
    }
    const auto missing = write_config(
        tmp, "missing.ini", base + std::string("compare = ") + empty_csv.string() + "\n");
    CHECK(cmd_oracle({missing.string(), {}}) == kExitOk);
    ::unsetenv("QD_OUT_DIR");
}

TEST_CASE("oracle without a lattice is a config error") {
    TempDir tmp("oracle_cfg");
    const auto config = write_config(tmp, "oracle.ini", "[objective]\nname = illum\nillum_dim = 2\n");
    ::setenv("QD_OUT_DIR", (tmp.path / "out").c_str(), 1);
    CHECK(cmd_oracle({config.string(), {}}) == kExitConfig);
    ::unsetenv("QD_OUT_DIR");
}

TEST_CASE("render reproduces the run's heatmap byte-for-byte from the CSV alone") {
    TempDir tmp("render");
    const auto config = write_config(tmp, "run.ini", kSmallRun);
    const auto out = tmp.path / "out";
    ::setenv("QD_OUT_DIR", out.c_str(), 1);
    REQUIRE(cmd_run({config.string(), {}}) == kExitOk);
    ::unsetenv("QD_OUT_DIR");

    const auto rendered = tmp.path / "rerender.ppm";
    REQUIRE(cmd_render((out / "archive.csv").string(), {8, 8}, rendered.string()) == kExitOk);
    CHECK(slurp(rendered) == slurp(out / "heatmap.ppm"));

    // empty CSV renders to all-sentinel
    const auto empty_csv = tmp.path / "empty.csv";
    {
        std::ofstream outf(empty_csv);
        outf << "cell_id,cell_0,cell_1,fitness,desc_0,desc_1\n";
    }
    const auto empty_ppm = tmp.path / "empty.ppm";
    REQUIRE(cmd_render(empty_csv.string(), {4, 4}, empty_ppm.string()) == kExitOk);
    CHECK(slurp(empty_ppm).find("255 255 255") == std::string::npos);

    // schema mismatch is a runtime failure
    const auto bad_csv = tmp.path / "bad.csv";
    {
        std::ofstream outf(bad_csv);
        outf << "cell_id,cell_0,cell_1,flux\n1,0,0,1\n";
    }
    CHECK(cmd_render(bad_csv.string(), {4, 4}, (tmp.path / "x.ppm").string()) == kExitRuntime);
}

TEST_CASE("sail mode runs end to end and logs rounds") {
    TempDir tmp("sail");
    const auto config = write_config(tmp, "sail.ini", R"(
[objective]
name = illum
illum_dim = 2

[container]
kind = grid
grid_bins = 5,5

[engine]
mode = sail
seed = 3

[surrogate]
budget = 80
init_samples = 40
batch_per_round = 20
inner_init = 60
inner_iterations = 10
inner_batch = 16
length_scales = 0.2
noise_variance = 1e-8
)");
    const auto out = tmp.path / "out";
    ::setenv("QD_OUT_DIR", out.c_str(), 1);
    REQUIRE(cmd_run({config.string(), {}}) == kExitOk);
    ::unsetenv("QD_OUT_DIR");
    CHECK(fs::exists(out / "archive.csv"));
    CHECK(fs::exists(out / "sail_rounds.csv"));
    const auto rounds = slurp(out / "sail_rounds.csv");
    CHECK(rounds.find("round,true_evals,map_coverage,qd_score,qd_score_offset") == 0);
    CHECK(std::count(rounds.begin(), rounds.end(), '\n') == 1 + 1 + 2);  // header, design, 2 rounds
}

TEST_CASE("the installed binary honors arguments and exit codes") {
#ifndef QD_CLI_PATH
    FAIL("QD_CLI_PATH not defined");
#else
    TempDir tmp("binary");
    const auto config = write_config(tmp, "run.ini", kSmallRun);
    const auto out = tmp.path / "out";
    const std::string cli = QD_CLI_PATH;

    auto shell = [&](const std::string& cmd) { return std::system(cmd.c_str()) / 256; };
    CHECK(shell(cli + " --explain > /dev/null") == 0);
    CHECK(shell("QD_OUT_DIR=" + out.string() + " " + cli + " run " + config.string() +
                " --seed 9 > /dev/null") == 0);
    CHECK(fs::exists(out / "archive.csv"));
    CHECK(shell(cli + " run /nonexistent.ini 2> /dev/null") == kExitConfig);
    CHECK(shell(cli + " render " + (out / "archive.csv").string() + " --bins 8 8 -o " +
                (tmp.path / "h.ppm").string() + " > /dev/null") == 0);
#endif
}
