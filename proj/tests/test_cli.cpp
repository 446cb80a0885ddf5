#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "scatlab/cli.hpp"
#include "scatlab/farfield.hpp"
#include "scatlab/scatter.hpp"
#include "scatlab/shape_io.hpp"
#include "tmp_dir.hpp"

using namespace scatlab;
using testutil::slurp;
using testutil::TempDir;
using testutil::write_file;
namespace fs = std::filesystem;

namespace {

int run(std::vector<std::string> args) { return cli::run(args); }

int run_cfg(const std::string& cmd, const fs::path& cfg, const fs::path& out, std::vector<std::string> extra = {}) {
    std::vector<std::string> args{cmd, "--config", cfg.string(), "--out", out.string()};
    args.insert(args.end(), extra.begin(), extra.end());
    return cli::run(args);
}

json manifest(const fs::path& out) { return read_json_file(out / "manifest.json"); }

const char* kDictConfig = R"({
  "k": 2.0, "obs_grid": 64, "inc_grid": 64,
  "entries": [
    {"id": "disk", "shape": {"family": "circle", "radius": 1.0}},
    {"id": "kite", "shape": ")" SCATLAB_CONFIG_DIR R"(/shapes/kite.json"}
  ]
})";

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("forward solve of the unit disk matches the series and replays exactly") {
    TempDir tmp("scatlab_cli_fwd");
    write_file(tmp / "disk.json", R"({"shape": {"family": "circle", "radius": 1.0}, "k": 1.0, "d_angle": 0.3, "grid": 64})");
    REQUIRE(run_cfg("forward", tmp / "disk.json", tmp / "a") == cli::kOk);
    const auto p = read_pattern_csv(tmp / "a" / "pattern.csv");
    const auto ref = disk_far_field_series(1.0, BoundaryCondition::dirichlet(), {1.0, 0.3}, DirectionGrid(64));
    CHECK(l2_distance(p, ref) / l2_norm(ref) < 1e-8);

    const auto m = manifest(tmp / "a");
    CHECK(m["command"] == "forward");
    CHECK(m["exit_code"] == 0);
    CHECK(m["seed"] == 1);
    CHECK(m["outputs"]["pattern.csv"] == cli::file_digest(tmp / "a" / "pattern.csv"));
    CHECK(m["config"]["solver"]["n_sources"] == 192);

    REQUIRE(run_cfg("forward", tmp / "disk.json", tmp / "b") == cli::kOk);
    CHECK(slurp(tmp / "a" / "pattern.csv") == slurp(tmp / "b" / "pattern.csv"));
    REQUIRE(run_cfg("forward", tmp / "a" / "manifest.json", tmp / "c", {"--threads", "2"}) == cli::kOk);
    CHECK(slurp(tmp / "a" / "pattern.csv") == slurp(tmp / "c" / "pattern.csv"));
    CHECK(slurp(tmp / "a" / "solution.json") == slurp(tmp / "c" / "solution.json"));
}

TEST_CASE("configuration errors exit with code 2 and still write a manifest") {
    TempDir tmp("scatlab_cli_err");
    write_file(tmp / "bad.json", "{\n  \"k\": 1.0,\n  \"shape\": [\n");
    CHECK(run_cfg("forward", tmp / "bad.json", tmp / "o") == cli::kConfigError);
    const auto m = manifest(tmp / "o");
    CHECK(m["exit_code"] == 2);
    CHECK(m["error"].get<std::string>().find("bad.json:") != std::string::npos);

    write_file(tmp / "extra.json", R"({"shape": {"family": "circle", "radius": 1.0}, "k": 1.0, "colour": 3})");
    CHECK(run_cfg("forward", tmp / "extra.json", tmp / "o2") == cli::kConfigError);
    CHECK(run_cfg("forward", tmp / "missing.json", tmp / "o3") == cli::kConfigError);
    CHECK(run({"forward"}) == cli::kConfigError);
    CHECK(run({"no-such-command", "--config", "x"}) == cli::kConfigError);

    // A manifest replays only under its own command.
    write_file(tmp / "ok.json", R"({"shape": {"family": "circle", "radius": 1.0}, "k": 1.0, "grid": 32})");
    REQUIRE(run_cfg("forward", tmp / "ok.json", tmp / "o4") == cli::kOk);
    CHECK(run_cfg("k-scan", tmp / "o4" / "manifest.json", tmp / "o5") == cli::kConfigError);
}

TEST_CASE("solver failure exits with code 3") {
    TempDir tmp("scatlab_cli_solver");
    write_file(tmp / "cfg.json", R"({"shape": {"family": "circle", "radius": 1.0}, "k": 1.0,
                                     "solver": {"n_sources": 8, "residual_cap": 1e-14}})");
    CHECK(run_cfg("forward", tmp / "cfg.json", tmp / "o") == cli::kSolverFailure);
    CHECK(manifest(tmp / "o")["exit_code"] == 3);
}

TEST_CASE("verify-identities passes, and a mis-signed translation is caught") {
    TempDir tmp("scatlab_cli_verify");
    const std::string kite = SCATLAB_CONFIG_DIR "/shapes/kite.json";
    write_file(tmp / "v.json", R"({"shape": ")" + kite + R"(", "motion": {"theta": 0.6283185307179586, "z": [0.3, -0.2]},
                                   "k": 2.0, "d_angle": 0.4, "inc_grid": 64, "grid": 64})");
    CHECK(run_cfg("verify-identities", tmp / "v.json", tmp / "o") == cli::kOk);
    CHECK(read_json_file(tmp / "o" / "identities.json")["verdict"] == "PASS");

    write_file(tmp / "id.json", R"({"shape": ")" + kite + R"(", "k": 2.0, "inc_grid": 64, "grid": 64})");
    REQUIRE(run_cfg("verify-identities", tmp / "id.json", tmp / "o2") == cli::kOk);
    const auto r = read_json_file(tmp / "o2" / "identities.json");
    CHECK(r["translation"]["relative_error"].get<double>() <= 1e-12);
    CHECK(r["rotation"]["relative_error"].get<double>() <= 1e-12);

    write_file(tmp / "flip.json", R"({"shape": ")" + kite + R"(", "motion": {"theta": 0.6, "z": [0.3, -0.2]},
                                      "k": 2.0, "inc_grid": 64, "grid": 64, "flip_translation_sign": true})");
    CHECK(run_cfg("verify-identities", tmp / "flip.json", tmp / "o3") == cli::kCheckFailed);
}

TEST_CASE("oracle-disk comparison") {
    TempDir tmp("scatlab_cli_oracle");
    CHECK(run_cfg("oracle-disk", SCATLAB_CONFIG_DIR "/oracle_disk.json", tmp / "o") == cli::kOk);
    CHECK(read_json_file(tmp / "o" / "comparison.json")["verdict"] == "PASS");
}

TEST_CASE("dictionary commands and their exit codes") {
    TempDir tmp("scatlab_cli_dict");
    write_file(tmp / "dict.json", kDictConfig);
    REQUIRE(run_cfg("precompute-dict", tmp / "dict.json", tmp / "pre") == cli::kOk);
    const auto dict_dir = (tmp / "pre" / "dictionary").string();

    // A measured kite via the forward command.
    write_file(tmp / "fwd.json", R"({"shape": {"family": "trig", "x_cos": [-0.65, 1.0, 0.65], "x_sin": [0.0, 0.0, 0.0],
        "y_cos": [0.0, 0.0, 0.0], "y_sin": [0.0, 1.5, 0.0], "motion": {"theta": 2.0, "z": [0.0, 0.0]}},
        "k": 2.0, "d_angle": 1.0, "grid": 64})");
    REQUIRE(run_cfg("forward", tmp / "fwd.json", tmp / "meas") == cli::kOk);
    write_file(tmp / "id.json", R"({"dictionary": ")" + dict_dir + R"(", "pattern": ")" +
                                    (tmp / "meas" / "pattern.csv").string() + R"("})");
    REQUIRE(run_cfg("identify", tmp / "id.json", tmp / "id") == cli::kOk);
    const auto res = read_json_file(tmp / "id" / "result.json");
    CHECK(res["best_id"] == "kite");

    write_file(tmp / "tri.json", R"({"shape": ")" SCATLAB_CONFIG_DIR R"(/shapes/rounded_triangle.json",
        "k": 2.0, "d_angle": 1.0, "grid": 64})");
    REQUIRE(run_cfg("forward", tmp / "tri.json", tmp / "tri") == cli::kOk);
    write_file(tmp / "id_tri.json", R"({"dictionary": ")" + dict_dir + R"(", "pattern": ")" +
                                        (tmp / "tri" / "pattern.csv").string() + R"("})");
    CHECK(run_cfg("identify", tmp / "id_tri.json", tmp / "id_tri") == cli::kNotInDictionary);

    write_file(tmp / "sep.json", R"({"dictionary": ")" + dict_dir + R"(", "trials": 4})");
    CHECK(run_cfg("separability", tmp / "sep.json", tmp / "sep") == cli::kOk);

    write_file(tmp / "dup.json", R"({"k": 2.0, "obs_grid": 64, "inc_grid": 64, "trials": 3, "entries": [
        {"id": "a", "shape": {"family": "ellipse", "a": 1.0, "b": 0.5}},
        {"id": "b", "shape": {"family": "ellipse", "a": 1.0, "b": 0.5}}]})");
    CHECK(run_cfg("separability", tmp / "dup.json", tmp / "dup") == cli::kCheckFailed);
    CHECK(read_json_file(tmp / "dup" / "separability.json")["verdict"] == "FAIL");

    REQUIRE(run_cfg("precompute-dict", tmp / "dup.json", tmp / "dup_pre") == cli::kConfigError);
}

TEST_CASE("ambiguous identification exits with code 6") {
    TempDir tmp("scatlab_cli_amb");
    write_file(tmp / "dict.json", R"({"k": 2.0, "obs_grid": 64, "inc_grid": 64, "entries": [
        {"id": "a", "shape": {"family": "ellipse", "a": 1.0, "b": 0.5}},
        {"id": "b", "shape": {"family": "ellipse", "a": 1.0, "b": 0.5}}]})");
    REQUIRE(run_cfg("precompute-dict", tmp / "dict.json", tmp / "pre") == cli::kOk);
    write_file(tmp / "fwd.json", R"({"shape": {"family": "ellipse", "a": 1.0, "b": 0.5}, "k": 2.0, "grid": 64})");
    REQUIRE(run_cfg("forward", tmp / "fwd.json", tmp / "meas") == cli::kOk);
    write_file(tmp / "id.json", R"({"dictionary": ")" + (tmp / "pre" / "dictionary").string() + R"(", "pattern": ")" +
                                    (tmp / "meas" / "pattern.csv").string() + R"("})");
    CHECK(run_cfg("identify", tmp / "id.json", tmp / "id") == cli::kAmbiguous);
}

TEST_CASE("Monte Carlo commands honour the min-delta assertion") {
    TempDir tmp("scatlab_cli_mc");
    write_file(tmp / "same.json", R"({"obstacle_a": {"family": "circle", "radius": 1.0},
        "obstacle_b": {"family": "circle", "radius": 1.0}, "trials": 4, "grid": 64})");
    CHECK(run_cfg("mc-distinguish", tmp / "same.json", tmp / "same", {"--assert-min-delta", "1e-3"}) ==
          cli::kCheckFailed);
    CHECK(run_cfg("mc-distinguish", tmp / "same.json", tmp / "same0") == cli::kOk);

    write_file(tmp / "diff.json", R"({"obstacle_a": {"family": "circle", "radius": 1.0},
        "obstacle_b": {"family": "circle", "radius": 1.2}, "trials": 8, "grid": 64})");
    REQUIRE(run_cfg("mc-distinguish", tmp / "diff.json", tmp / "diff", {"--assert-min-delta", "1e-3"}) == cli::kOk);
    const auto s = read_json_file(tmp / "diff" / "summary.json");
    CHECK(s["included"] == 8);
    const auto trials = slurp(tmp / "diff" / "trials.csv");
    CHECK(std::count(trials.begin(), trials.end(), '\n') == 9);

    write_file(tmp / "scan.json", R"({"obstacle_a": {"family": "circle", "radius": 1.0},
        "obstacle_b": {"family": "ellipse", "a": 1.0, "b": 0.9}, "points": 7, "grid": 64})");
    REQUIRE(run_cfg("k-scan", tmp / "scan.json", tmp / "scan") == cli::kOk);
    const auto scan = slurp(tmp / "scan" / "kscan.csv");
    CHECK(std::count(scan.begin(), scan.end(), '\n') == 8);
    const auto ann = read_json_file(tmp / "scan" / "annotations.json");
    CHECK(ann.dump().find("2.40482555769577") != std::string::npos);
}

TEST_CASE("id-success writes its report and gates on min_rate") {
    TempDir tmp("scatlab_cli_ids");
    write_file(tmp / "cfg.json", R"({"k": 2.0, "obs_grid": 64, "inc_grid": 64, "trials": 3, "min_rate": 1.0,
        "entries": [{"id": "disk", "shape": {"family": "circle", "radius": 1.0}},
                    {"id": "ellipse", "shape": {"family": "ellipse", "a": 1.0, "b": 0.5}}]})");
    CHECK(run_cfg("id-success", tmp / "cfg.json", tmp / "o", {"--seed", "5"}) == cli::kOk);
    CHECK(read_json_file(tmp / "o" / "success.json")["rate"] == 1.0);
    CHECK(manifest(tmp / "o")["seed"] == 5);
}

}  // TEST_SUITE
