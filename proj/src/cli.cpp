#include "scatlab/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "scatlab/errors.hpp"
#include "scatlab/farfield.hpp"
#include "scatlab/identify.hpp"
#include "scatlab/mc.hpp"
#include "scatlab/parallel.hpp"
#include "scatlab/scatter.hpp"
#include "scatlab/shape_io.hpp"

namespace scatlab::cli {

namespace fs = std::filesystem;

namespace {

struct Context {
    std::string command;
    json config = json::object();  // resolved in place by the command
    fs::path base_dir;             // relative paths in the config resolve here
    fs::path out;
    std::map<std::string, std::string> inputs;
    std::vector<std::string> outputs;  // relative to out
};

using Handler = std::function<int(Context&)>;

void write_text_atomic(const fs::path& path, const std::string& text) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        out << text;
        if (!out) throw FormatError("cannot write " + tmp.string());
    }
    fs::rename(tmp, path);
}

// Writes through `writer` to a temporary file, then renames it into place.
void write_atomic(Context& ctx, const std::string& name, const std::function<void(const fs::path&)>& writer) {
    const fs::path path = ctx.out / name;
    const fs::path tmp = path.string() + ".tmp";
    writer(tmp);
    fs::rename(tmp, path);
    ctx.outputs.push_back(name);
}

void write_json(Context& ctx, const std::string& name, const json& j) {
    write_atomic(ctx, name, [&](const fs::path& p) {
        std::ofstream out(p, std::ios::binary);
        out << j.dump(2) << '\n';
        if (!out) throw FormatError("cannot write " + p.string());
    });
}

void write_text(Context& ctx, const std::string& name, const std::string& text) {
    write_atomic(ctx, name, [&](const fs::path& p) {
        std::ofstream out(p, std::ios::binary);
        out << text;
        if (!out) throw FormatError("cannot write " + p.string());
    });
}

fs::path resolve_path(const Context& ctx, const json& value, const std::string& key) {
    if (!value.is_string()) throw ConfigError("'" + key + "' must be a path string");
    fs::path p = value.get<std::string>();
    if (p.is_relative()) p = ctx.base_dir / p;
    return fs::absolute(p).lexically_normal();
}

void record_input(Context& ctx, const fs::path& p) {
    if (fs::is_directory(p)) {
        std::vector<fs::path> files;
        for (const auto& e : fs::directory_iterator(p)) {
            if (e.is_regular_file()) files.push_back(e.path());
        }
        std::sort(files.begin(), files.end());
        for (const auto& f : files) ctx.inputs[f.string()] = file_digest(f);
    } else {
        ctx.inputs[p.string()] = file_digest(p);
    }
}

// A shape given inline or as a path to a shape document, returned in canonical form.
Obstacle resolve_obstacle(Context& ctx, json& slot, const std::string& key) {
    if (slot.is_string()) {
        const auto p = resolve_path(ctx, slot, key);
        record_input(ctx, p);
        slot = read_json_file(p);
    }
    auto obs = obstacle_from_json(slot);
    slot = obstacle_to_json(obs);
    return obs;
}

MfsConfig resolve_solver(json& cfg) {
    const MfsConfig solver = cfg.contains("solver") ? mfs_config_from_json(cfg.at("solver")) : MfsConfig{};
    cfg["solver"] = mfs_config_to_json(solver);
    return solver;
}

double resolve_number(json& cfg, const std::string& key, std::optional<double> fallback = std::nullopt) {
    const double v = fallback ? get_number(cfg, key, *fallback) : get_number(cfg, key);
    cfg[key] = v;
    return v;
}

int resolve_int(json& cfg, const std::string& key, int fallback) {
    const int v = get_int(cfg, key, fallback);
    cfg[key] = v;
    return v;
}

std::optional<double> assertion_floor(const json& cfg) {
    if (!cfg.contains("assert_min_delta")) return std::nullopt;
    return get_number(cfg, "assert_min_delta");
}

std::string fmt(double v) { return format_double(v); }

// ---------------------------------------------------------------- forward

int cmd_forward(Context& ctx) {
    auto& cfg = ctx.config;
    require_keys(cfg, {"shape", "k", "d_angle", "grid", "solver", "seed"}, "forward config");
    if (!cfg.contains("shape")) throw ConfigError("forward config needs 'shape'");
    const auto obs = resolve_obstacle(ctx, cfg["shape"], "shape");
    const double k = resolve_number(cfg, "k");
    const double d = resolve_number(cfg, "d_angle", 0.0);
    const DirectionGrid grid(resolve_int(cfg, "grid", 128));
    const auto solver = resolve_solver(cfg);

    const auto sol = solve(obs, IncidentPlaneWave(k, d), solver);
    const auto pattern = far_field(sol, grid);
    write_atomic(ctx, "pattern.csv", [&](const fs::path& p) { write_pattern_csv(p, pattern); });
    json info;
    info["k"] = k;
    info["d_angle"] = d;
    info["residual"] = sol.residual();
    info["condition_estimate"] = sol.condition_estimate();
    info["n_sources"] = solver.n_sources;
    write_json(ctx, "solution.json", info);
    std::cerr << "forward: residual " << fmt(sol.residual()) << ", pattern written to "
              << (ctx.out / "pattern.csv").string() << '\n';
    return kOk;
}

// ---------------------------------------------------------------- oracle-disk

int cmd_oracle_disk(Context& ctx) {
    auto& cfg = ctx.config;
    require_keys(cfg, {"radius", "center", "bc", "k", "d_angle", "grid", "solver", "tolerance", "seed"},
                 "oracle-disk config");
    const double a = resolve_number(cfg, "radius", 1.0);
    const Point center = get_point(cfg, "center", {});
    cfg["center"] = json::array({center.x, center.y});
    const auto bc = cfg.contains("bc") ? bc_from_json(cfg.at("bc")) : BoundaryCondition::dirichlet();
    cfg["bc"] = bc_to_json(bc);
    const double k = resolve_number(cfg, "k");
    const double d = resolve_number(cfg, "d_angle", 0.0);
    const DirectionGrid grid(resolve_int(cfg, "grid", 128));
    const auto solver = resolve_solver(cfg);
    const double tol = resolve_number(cfg, "tolerance", 1e-8);

    const IncidentPlaneWave w(k, d);
    const auto oracle = disk_far_field_series(a, bc, w, grid, center);
    const Obstacle disk(catalog::circle(a), RigidMotion{0.0, center}, bc);
    const auto mfs = far_field(solve(disk, w, solver), grid);
    const double err = l2_distance(mfs, oracle) / l2_norm(oracle);
    write_atomic(ctx, "oracle.csv", [&](const fs::path& p) { write_pattern_csv(p, oracle); });
    write_atomic(ctx, "mfs.csv", [&](const fs::path& p) { write_pattern_csv(p, mfs); });
    json cmp;
    cmp["relative_l2_error"] = err;
    cmp["tolerance"] = tol;
    cmp["series_order"] = disk_series_order(k * a);
    cmp["verdict"] = err < tol ? "PASS" : "FAIL";
    write_json(ctx, "comparison.json", cmp);
    std::cerr << "oracle-disk: MFS vs series relative L2 error " << fmt(err) << (err < tol ? " PASS" : " FAIL")
              << '\n';
    return err < tol ? kOk : kCheckFailed;
}

// ---------------------------------------------------------------- verify-identities

struct Comparison {
    double relative_error = 0.0;
    double worst_angle = 0.0;
};

Comparison compare(const FarFieldPattern& reference, const FarFieldPattern& predicted) {
    Comparison c;
    c.relative_error = l2_distance(reference, predicted) / l2_norm(reference);
    double worst = -1.0;
    for (int m = 0; m < reference.grid.size(); ++m) {
        const double e = std::abs(reference.samples[m] - predicted.samples[m]);
        if (e > worst) {
            worst = e;
            c.worst_angle = reference.grid.angle(m);
        }
    }
    return c;
}

int cmd_verify_identities(Context& ctx) {
    auto& cfg = ctx.config;
    require_keys(cfg,
                 {"shape", "motion", "k", "d_angle", "grid", "inc_grid", "solver", "tolerance",
                  "flip_translation_sign", "seed"},
                 "verify-identities config");
    if (!cfg.contains("shape")) throw ConfigError("verify-identities config needs 'shape'");
    const auto base = resolve_obstacle(ctx, cfg["shape"], "shape");
    const RigidMotion m = cfg.contains("motion") ? motion_from_json(cfg.at("motion")) : RigidMotion{};
    cfg["motion"] = motion_to_json(m);
    const double k = resolve_number(cfg, "k");
    const double d = resolve_number(cfg, "d_angle", 0.0);
    const DirectionGrid grid(resolve_int(cfg, "grid", 128));
    const DirectionGrid inc(resolve_int(cfg, "inc_grid", 128));
    const auto solver = resolve_solver(cfg);
    const double tol = resolve_number(cfg, "tolerance", 1e-5);
    const bool flip = cfg.value("flip_translation_sign", false);
    cfg["flip_translation_sign"] = flip;

    const IncidentPlaneWave w(k, d);
    const RigidMotion m0 = base.shape.motion();
    const auto base_pattern = far_field(solve(base, w, solver), grid);

    // Translation by z of the placed obstacle.
    const Obstacle translated = base.moved(RigidMotion{m0.theta, m0.z + m.z});
    const auto trans_pattern = far_field(solve(translated, w, solver), grid);
    const auto trans_pred = translate_pattern(base_pattern, flip ? -m.z : m.z);
    const auto trans = compare(trans_pattern, trans_pred);

    // Rotation by theta about the origin, predicted from the full-aperture data.
    const Obstacle rotated = base.moved(RigidMotion{m0.theta + m.theta, RigidMotion{m.theta, {}}.rotate(m0.z)});
    const auto rot_pattern = far_field(solve(rotated, w, solver), grid);
    std::vector<double> angles(static_cast<std::size_t>(inc.size()));
    for (int l = 0; l < inc.size(); ++l) angles[static_cast<std::size_t>(l)] = inc.angle(l);
    const auto sols = solve_many(base, k, angles, solver);
    FarFieldMatrix F(k, grid, inc);
    for (int l = 0; l < inc.size(); ++l) F.set_column(l, far_field(sols[static_cast<std::size_t>(l)], grid));
    const auto rot = compare(rot_pattern, rotate_predict(F, m.theta, d));

    const bool trans_ok = trans.relative_error < tol;
    const bool rot_ok = rot.relative_error < tol;
    json rep;
    rep["translation"] = {{"relative_error", trans.relative_error},
                          {"worst_angle", trans.worst_angle},
                          {"verdict", trans_ok ? "PASS" : "FAIL"}};
    rep["rotation"] = {{"relative_error", rot.relative_error},
                       {"worst_angle", rot.worst_angle},
                       {"verdict", rot_ok ? "PASS" : "FAIL"}};
    rep["tolerance"] = tol;
    rep["verdict"] = (trans_ok && rot_ok) ? "PASS" : "FAIL";
    write_json(ctx, "identities.json", rep);
    std::cerr << "translation: relative error " << fmt(trans.relative_error) << (trans_ok ? " PASS" : " FAIL")
              << " (worst angle " << fmt(trans.worst_angle) << ")\n";
    std::cerr << "rotation:    relative error " << fmt(rot.relative_error) << (rot_ok ? " PASS" : " FAIL")
              << " (worst angle " << fmt(rot.worst_angle) << ")\n";
    return (trans_ok && rot_ok) ? kOk : kCheckFailed;
}

// ---------------------------------------------------------------- dictionaries

std::vector<DictionaryEntry> resolve_entries(Context& ctx, json& list) {
    if (!list.is_array() || list.empty()) throw ConfigError("'entries' must be a non-empty array");
    std::vector<DictionaryEntry> entries;
    for (auto& item : list) {
        require_keys(item, {"id", "shape"}, "dictionary entry");
        if (!item.contains("id") || !item.at("id").is_string()) throw ConfigError("each entry needs a string 'id'");
        if (!item.contains("shape")) throw ConfigError("each entry needs a 'shape'");
        const auto obs = resolve_obstacle(ctx, item["shape"], "shape");
        const auto& m = obs.shape.motion();
        if (m.theta != 0.0 || m.z.x != 0.0 || m.z.y != 0.0) {
            throw ConfigError("dictionary entry '" + item.at("id").get<std::string>() +
                              "' must be a base shape without motion");
        }
        json canonical = curve_to_json(obs.shape.base());
        canonical["bc"] = bc_to_json(obs.bc);
        item["shape"] = canonical;
        entries.push_back({item.at("id").get<std::string>(), obs.shape.base(), obs.bc});
    }
    return entries;
}

ShapeDictionary build_dictionary(Context& ctx, json& cfg) {
    const double k = resolve_number(cfg, "k");
    const DirectionGrid obs(resolve_int(cfg, "obs_grid", 128));
    const DirectionGrid inc(resolve_int(cfg, "inc_grid", 128));
    const auto solver = resolve_solver(cfg);
    if (!cfg.contains("entries")) throw ConfigError("config needs 'entries'");
    auto entries = resolve_entries(ctx, cfg["entries"]);
    auto dict = precompute(std::move(entries), k, obs, inc, solver);
    for (std::size_t j = 0; j < dict.size(); ++j) {
        const auto& r = dict.residuals(j);
        std::cerr << "  entry " << dict.entry(j).id << ": " << r.size() << " solves, max residual "
                  << fmt(*std::max_element(r.begin(), r.end())) << '\n';
    }
    return dict;
}

ShapeDictionary open_dictionary(Context& ctx, json& cfg) {
    const auto dir = resolve_path(ctx, cfg.at("dictionary"), "dictionary");
    cfg["dictionary"] = dir.string();
    record_input(ctx, dir);
    return load_dictionary(dir);
}

int cmd_precompute_dict(Context& ctx) {
    auto& cfg = ctx.config;
    require_keys(cfg, {"k", "obs_grid", "inc_grid", "solver", "entries", "seed"}, "precompute-dict config");
    std::cerr << "precompute-dict:\n";
    const auto dict = build_dictionary(ctx, cfg);
    const fs::path dir = ctx.out / "dictionary";
    const fs::path tmp = ctx.out / "dictionary.tmp";
    fs::remove_all(tmp);
    save_dictionary(dict, tmp);
    fs::remove_all(dir);
    fs::rename(tmp, dir);
    ctx.outputs.push_back("dictionary/manifest.json");
    for (std::size_t j = 0; j < dict.size(); ++j) ctx.outputs.push_back("dictionary/" + dict.entry(j).id + ".csv");
    return kOk;
}

void print_ranking(const IdentificationResult& r) {
    std::cerr << "rank  id                misfit                   theta                    z\n";
    for (std::size_t i = 0; i < r.ranking.size(); ++i) {
        const auto& e = r.ranking[i];
        char line[256];
        std::snprintf(line, sizeof line, "%-5zu %-17s %-24.17g %-24.17g (%.17g, %.17g)%s\n", i + 1, e.id.c_str(),
                      e.misfit, e.pose.theta, e.pose.z.x, e.pose.z.y, e.theta_flat ? "  [theta flat]" : "");
        std::cerr << line;
    }
    if (r.ambiguous) std::cerr << "flag: ambiguous\n";
}

int cmd_identify(Context& ctx) {
    auto& cfg = ctx.config;
    require_keys(cfg, {"dictionary", "pattern", "identify", "seed"}, "identify config");
    if (!cfg.contains("dictionary") || !cfg.contains("pattern")) {
        throw ConfigError("identify config needs 'dictionary' and 'pattern'");
    }
    const auto dict = open_dictionary(ctx, cfg);
    const auto pattern_path = resolve_path(ctx, cfg.at("pattern"), "pattern");
    cfg["pattern"] = pattern_path.string();
    record_input(ctx, pattern_path);
    const auto measured = read_pattern_csv(pattern_path);
    const IdentifyConfig icfg = cfg.contains("identify") ? identify_config_from_json(cfg.at("identify")) : IdentifyConfig{};
    cfg["identify"] = identify_config_to_json(icfg);

    int code = kOk;
    IdentificationResult result;
    try {
        result = identify(measured, dict, icfg);
    } catch (const NotInDictionary& e) {
        result = e.result();
        code = kNotInDictionary;
        std::cerr << "identify: " << e.what() << '\n';
    } catch (const AmbiguousIdentification& e) {
        result = e.result();
        code = kAmbiguous;
        std::cerr << "identify: " << e.what() << '\n';
    }
    auto j = result_to_json(result);
    j["status"] = code == kOk ? "identified" : code == kNotInDictionary ? "not_in_dictionary" : "ambiguous";
    write_json(ctx, "result.json", j);
    print_ranking(result);
    return code;
}

int cmd_separability(Context& ctx) {
    auto& cfg = ctx.config;
    require_keys(cfg, {"dictionary", "entries", "k", "obs_grid", "inc_grid", "solver", "trials", "floor", "seed"},
                 "separability config");
    const auto dict = cfg.contains("dictionary") ? open_dictionary(ctx, cfg) : build_dictionary(ctx, cfg);
    const int trials = resolve_int(cfg, "trials", 50);
    const double floor = resolve_number(cfg, "floor", 1e-3);
    const auto seed = cfg.at("seed").get<std::uint64_t>();
    const auto rep = separability_check(dict, trials, seed, floor);
    write_json(ctx, "separability.json", separability_to_json(rep));
    if (rep.pass) {
        std::cerr << "separability: PASS, min pairwise distance "
                  << (std::isfinite(rep.min_distance) ? fmt(rep.min_distance) : std::string("n/a (single entry)"))
                  << '\n';
        return kOk;
    }
    std::cerr << "separability: FAIL, entries '" << rep.entry_a << "' and '" << rep.entry_b << "' at distance "
              << fmt(rep.min_distance) << " (d=" << fmt(rep.d_angle) << ", theta=" << fmt(rep.theta) << ")\n";
    return kCheckFailed;
}

// ---------------------------------------------------------------- experiments

const char* kDeltaPlot =
    "# gnuplot template: empirical distribution of the far-field distance\n"
    "set datafile separator ','\n"
    "set logscale x\n"
    "set xlabel 'delta'\n"
    "set ylabel 'trial'\n"
    "plot 'trials.csv' using 4:1 every ::1 with points title 'delta per trial'\n";

const char* kKScanPlot =
    "# gnuplot template: delta(k) with disk eigen-wavenumbers from annotations.json\n"
    "set datafile separator ','\n"
    "set logscale y\n"
    "set xlabel 'k'\n"
    "set ylabel 'delta'\n"
    "plot 'kscan.csv' using 1:2 every ::1 with lines title 'delta(k)'\n";

int cmd_mc_distinguish(Context& ctx) {
    auto& cfg = ctx.config;
    require_keys(cfg,
                 {"obstacle_a", "obstacle_b", "k_min", "k_max", "trials", "seed", "epsilons", "grid", "solver",
                  "assert_min_delta"},
                 "mc-distinguish config");
    if (!cfg.contains("obstacle_a") || !cfg.contains("obstacle_b")) {
        throw ConfigError("mc-distinguish config needs 'obstacle_a' and 'obstacle_b'");
    }
    const auto a = resolve_obstacle(ctx, cfg["obstacle_a"], "obstacle_a");
    const auto b = resolve_obstacle(ctx, cfg["obstacle_b"], "obstacle_b");
    const auto ecfg = experiment_config_from_json(cfg);
    const auto resolved = experiment_config_to_json(ecfg);
    for (const auto& item : resolved.items()) cfg[item.key()] = item.value();

    const auto rep = distinguish_experiment(a, b, ecfg);
    write_atomic(ctx, "trials.csv", [&](const fs::path& p) { write_trials_csv(p, rep); });
    write_atomic(ctx, "profile.csv", [&](const fs::path& p) { write_profile_csv(p, stability_profile(rep)); });
    write_json(ctx, "summary.json", report_to_json(rep));
    write_text(ctx, "plot_delta.gp", kDeltaPlot);
    std::cerr << "mc-distinguish: " << rep.included << " included, " << rep.excluded << " excluded, min delta "
              << fmt(rep.min_delta) << " at k=" << fmt(rep.min_k) << ", d=" << fmt(rep.min_d_angle) << '\n';
    for (std::size_t i = 0; i < rep.epsilons.size(); ++i) {
        std::cerr << "  P(delta < " << fmt(rep.epsilons[i]) << ") = " << fmt(rep.cdf[i]) << '\n';
    }
    if (const auto floor = assertion_floor(cfg)) {
        const bool holds = rep.included > 0 && rep.min_delta > *floor;
        std::cerr << "assertion min delta > " << fmt(*floor) << ": " << (holds ? "holds" : "VIOLATED") << '\n';
        if (!holds) return kCheckFailed;
    }
    return kOk;
}

int cmd_k_scan(Context& ctx) {
    auto& cfg = ctx.config;
    require_keys(cfg,
                 {"obstacle_a", "obstacle_b", "d_angle", "k_min", "k_max", "points", "grid", "solver", "seed",
                  "assert_min_delta"},
                 "k-scan config");
    if (!cfg.contains("obstacle_a") || !cfg.contains("obstacle_b")) {
        throw ConfigError("k-scan config needs 'obstacle_a' and 'obstacle_b'");
    }
    const auto a = resolve_obstacle(ctx, cfg["obstacle_a"], "obstacle_a");
    const auto b = resolve_obstacle(ctx, cfg["obstacle_b"], "obstacle_b");
    const double d = resolve_number(cfg, "d_angle", 0.0);
    const double k_min = resolve_number(cfg, "k_min", 0.5);
    const double k_max = resolve_number(cfg, "k_max", 3.0);
    const int points = resolve_int(cfg, "points", 500);
    const DirectionGrid grid(resolve_int(cfg, "grid", 128));
    const auto solver = resolve_solver(cfg);

    const auto r = k_scan(a, b, d, k_min, k_max, points, grid, solver);
    write_atomic(ctx, "kscan.csv", [&](const fs::path& p) { write_kscan_csv(p, r); });
    write_json(ctx, "annotations.json", kscan_annotations_json(r));
    write_text(ctx, "plot_kscan.gp", kKScanPlot);
    std::cerr << "k-scan: " << points << " points, min delta " << fmt(r.min_delta) << " at k=" << fmt(r.min_k)
              << ", " << r.failures.size() << " failed solves, " << r.annotations.size()
              << " disk eigen-wavenumbers in range\n";
    if (const auto floor = assertion_floor(cfg)) {
        const bool holds = r.failures.empty() && r.min_delta > *floor;
        std::cerr << "assertion min delta > " << fmt(*floor) << ": " << (holds ? "holds" : "VIOLATED") << '\n';
        if (!holds) return kCheckFailed;
    }
    return kOk;
}

int cmd_id_success(Context& ctx) {
    auto& cfg = ctx.config;
    require_keys(cfg,
                 {"dictionary", "entries", "k", "obs_grid", "inc_grid", "solver", "trials", "seed", "noise_level",
                  "retry", "z_radius", "identify", "min_rate"},
                 "id-success config");
    const auto dict = cfg.contains("dictionary") ? open_dictionary(ctx, cfg) : build_dictionary(ctx, cfg);
    const auto scfg = id_success_config_from_json(cfg);
    const auto resolved = id_success_config_to_json(scfg);
    for (const auto& item : resolved.items()) cfg[item.key()] = item.value();

    const auto rep = identification_success_rate(dict, scfg);
    write_json(ctx, "success.json", id_success_to_json(rep));
    write_atomic(ctx, "id_trials.csv", [&](const fs::path& p) { write_id_trials_csv(p, rep); });
    std::cerr << "id-success: " << rep.successes << "/" << rep.trials.size() << " correct (rate " << fmt(rep.rate)
              << ", 95% interval [" << fmt(rep.ci_low) << ", " << fmt(rep.ci_high) << "]), " << rep.ambiguous
              << " ambiguous, " << rep.retries << " retries, max pose error " << fmt(rep.max_pose_error) << '\n';
    for (const auto& t : rep.trials) {
        if (!t.success) {
            std::cerr << "  failure trial " << t.index << ": true " << t.true_id << " found " << t.found_id
                      << " (k=" << fmt(t.k) << ", d=" << fmt(t.d_angle) << ", theta=" << fmt(t.true_pose.theta)
                      << ", misfit " << fmt(t.misfit) << ")" << (t.reason.empty() ? "" : " " + t.reason) << '\n';
        }
    }
    if (cfg.contains("min_rate")) {
        const double min_rate = get_number(cfg, "min_rate");
        if (rep.rate < min_rate) {
            std::cerr << "assertion rate >= " << fmt(min_rate) << ": VIOLATED\n";
            return kCheckFailed;
        }
    }
    return kOk;
}

const std::vector<std::pair<std::string, std::pair<std::string, Handler>>>& commands() {
    static const std::vector<std::pair<std::string, std::pair<std::string, Handler>>> table{
        {"forward", {"Solve one forward problem and write its far-field pattern", cmd_forward}},
        {"oracle-disk", {"Compare the solver with the separation-of-variables disk series", cmd_oracle_disk}},
        {"verify-identities", {"Check the translation and rotation far-field identities", cmd_verify_identities}},
        {"precompute-dict", {"Precompute far-field matrices for a shape dictionary", cmd_precompute_dict}},
        {"identify", {"Identify an obstacle from one far-field pattern", cmd_identify}},
        {"separability", {"Check that dictionary entries have distinct far fields", cmd_separability}},
        {"mc-distinguish", {"Monte Carlo distinguishability of two obstacles", cmd_mc_distinguish}},
        {"k-scan", {"Far-field distance of two obstacles over a wavenumber grid", cmd_k_scan}},
        {"id-success", {"Monte Carlo success rate of dictionary identification", cmd_id_success}},
    };
    return table;
}

bool is_manifest(const json& j) {
    return j.is_object() && j.contains("tool") && j.at("tool") == "scatlab" && j.contains("command") &&
           j.contains("config");
}

void write_manifest(const Context& ctx, std::uint64_t seed, int threads, int code, const std::string& error,
                    double seconds) {
    json m;
    m["tool"] = "scatlab";
    m["version"] = SCATLAB_VERSION;
    m["command"] = ctx.command;
    m["seed"] = seed;
    m["threads"] = threads;
    m["config"] = ctx.config;
    json inputs = json::object();
    for (const auto& [path, digest] : ctx.inputs) inputs[path] = digest;
    m["inputs"] = std::move(inputs);
    json outputs = json::object();
    for (const auto& name : ctx.outputs) outputs[name] = file_digest(ctx.out / name);
    m["outputs"] = std::move(outputs);
    m["exit_code"] = code;
    if (!error.empty()) m["error"] = error;
    m["wall_time_seconds"] = seconds;
    write_text_atomic(ctx.out / "manifest.json", m.dump(2) + "\n");
}

}  // namespace

std::string file_digest(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot read " + path.string());
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[1 << 14];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
    }
    char hex[32];
    std::snprintf(hex, sizeof hex, "%016" PRIx64, h);
    return std::string("fnv1a64:") + hex;
}

int run(const std::vector<std::string>& args) {
    CLI::App app{"scatlab: 2D acoustic scattering and obstacle identification"};
    app.require_subcommand(1);
    std::string config_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
    int threads = 0;
    std::optional<double> assert_min_delta;
    for (const auto& [name, entry] : commands()) {
        auto* sub = app.add_subcommand(name, entry.first);
        sub->add_option("--config", config_path, "JSON config, or a manifest.json to replay")->required();
        sub->add_option("--seed", seed, "Master seed (overrides the config)");
        sub->add_option("--out", out_dir, "Output directory")->capture_default_str();
        sub->add_option("--threads", threads, "Worker threads, 0 = all (results do not depend on it)")
            ->capture_default_str();
        sub->add_option("--assert-min-delta", assert_min_delta, "Fail (exit 4) unless min delta exceeds this");
    }
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }
    std::string command;
    Handler handler;
    for (const auto& [name, entry] : commands()) {
        if (app.got_subcommand(name)) {
            command = name;
            handler = entry.second;
        }
    }

    const auto t0 = std::chrono::steady_clock::now();
    Context ctx;
    ctx.command = command;
    ctx.out = out_dir;
    std::uint64_t used_seed = 1;
    int code = kOk;
    std::string error;
    bool out_ready = false;
    try {
        if (threads < 0) throw ConfigError("--threads must be non-negative");
        set_thread_count(threads);
        fs::create_directories(ctx.out);
        out_ready = true;
        const fs::path cfg_path = fs::absolute(config_path).lexically_normal();
        ctx.base_dir = cfg_path.parent_path();
        json raw = read_json_file(cfg_path);
        if (is_manifest(raw)) {
            if (raw.at("command") != command) {
                throw ConfigError("manifest was written by '" + raw.at("command").get<std::string>() +
                                  "', not '" + command + "'");
            }
            raw = raw.at("config");
        }
        if (!raw.is_object()) throw ConfigError("config must be a JSON object");
        ctx.config = std::move(raw);
        if (seed) ctx.config["seed"] = *seed;
        if (!ctx.config.contains("seed")) ctx.config["seed"] = std::uint64_t{1};
        if (!ctx.config.at("seed").is_number_unsigned()) throw ConfigError("'seed' must be a non-negative integer");
        used_seed = ctx.config.at("seed").get<std::uint64_t>();
        if (assert_min_delta) ctx.config["assert_min_delta"] = *assert_min_delta;
        code = handler(ctx);
    } catch (const ResidualTooLarge& e) {
        code = kSolverFailure;
        error = e.what();
    } catch (const InterpolationDegeneracy& e) {
        code = kSolverFailure;
        error = e.what();
    } catch (const NotInDictionary& e) {
        code = kNotInDictionary;
        error = e.what();
    } catch (const AmbiguousIdentification& e) {
        code = kAmbiguous;
        error = e.what();
    } catch (const Error& e) {
        code = kConfigError;
        error = e.what();
    } catch (const json::exception& e) {
        code = kConfigError;
        error = std::string("config: ") + e.what();
    } catch (const fs::filesystem_error& e) {
        code = kConfigError;
        error = e.what();
    } catch (const std::exception& e) {
        code = kInternal;
        error = e.what();
    }
    if (!error.empty()) std::cerr << "scatlab " << command << ": error: " << error << '\n';
    if (out_ready) {
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        try {
            write_manifest(ctx, used_seed, thread_count(), code, error, seconds);
        } catch (const std::exception& e) {
            std::cerr << "scatlab: cannot write manifest: " << e.what() << '\n';
            if (code == kOk) code = kInternal;
        }
    }
    return code;
}

}  // namespace scatlab::cli
