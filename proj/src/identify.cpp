#include "scatlab/identify.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <numeric>
#include <set>

#include "scatlab/parallel.hpp"
#include "scatlab/rng.hpp"

namespace scatlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool valid_id(const std::string& id) {
    if (id.empty()) return false;
    return std::all_of(id.begin(), id.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
    }) && id.front() != '.';
}

// Same-shape test through the canonical JSON form of the curve.
bool same_curve(const ParametricCurve& a, const ParametricCurve& b) {
    return curve_to_json(a).dump() == curve_to_json(b).dump();
}

void require_measurement(const FarFieldPattern& measured, const ShapeDictionary& dict) {
    if (!(measured.grid == dict.obs_grid())) {
        throw MetadataMismatch("measured pattern has " + std::to_string(measured.grid.size()) +
                               " directions, dictionary has " + std::to_string(dict.obs_grid().size()));
    }
    if (std::abs(measured.k - dict.k()) > 1e-12 * dict.k()) {
        throw MetadataMismatch("measured k=" + format_double(measured.k) + " differs from dictionary k=" +
                               format_double(dict.k()));
    }
}

double raw_distance(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double s = 0.0;
    for (std::size_t m = 0; m < a.size(); ++m) s += std::norm(a[m] - b[m]);
    return std::sqrt(s);
}

double raw_norm(const std::vector<cplx>& a) {
    double s = 0.0;
    for (const auto& v : a) s += std::norm(v);
    return std::sqrt(s);
}

// Indices of the `count` smallest values, ties by lower index.
std::vector<std::size_t> smallest(const std::vector<double>& v, std::size_t count) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    idx.resize(std::min(count, idx.size()));
    return idx;
}

struct EntryFit {
    double misfit = std::numeric_limits<double>::infinity();
    Pose pose;
    bool theta_flat = false;
};

// Known-location search for one entry: `base` is the measurement with the
// translation removed, so only the rotation remains unknown.
EntryFit fit_known(const std::vector<cplx>& base, double norm, const SpectralFarField& spec, double d_angle,
                   const IdentifyConfig& cfg) {
    const int T = cfg.theta_steps;
    const double dtheta = kTwoPi / T;
    auto f = [&](double theta) { return raw_distance(base, spec.rotate_predict(theta, d_angle).samples) / norm; };
    std::vector<double> coarse(static_cast<std::size_t>(T));
    for (int i = 0; i < T; ++i) coarse[static_cast<std::size_t>(i)] = f(i * dtheta);
    const auto [lo, hi] = std::minmax_element(coarse.begin(), coarse.end());

    EntryFit fit;
    fit.theta_flat = (*hi - *lo) < cfg.flatness_tolerance;
    for (const auto i : smallest(coarse, 3)) {
        const auto r = nelder_mead([&](const std::vector<double>& x) { return f(x[0]); },
                                   {static_cast<double>(i) * dtheta}, {0.5 * dtheta}, cfg.refine_iterations,
                                   cfg.refine_tolerance);
        if (r.value < fit.misfit) {
            fit.misfit = r.value;
            fit.pose = Pose{wrap_angle(r.x[0]), cfg.known_z};
        }
    }
    return fit;
}

std::vector<double> axis_points(double lo, double hi, double step) {
    std::vector<double> out;
    const int n = static_cast<int>(std::floor((hi - lo) / step + 1e-9));
    for (int i = 0; i <= n; ++i) out.push_back(lo + i * step);
    // Center the grid in the box.
    const double shift = 0.5 * ((hi - lo) - n * step);
    for (auto& v : out) v += shift;
    return out;
}

EntryFit fit_search(const FarFieldPattern& measured, double norm, const SpectralFarField& spec,
                    const IdentifyConfig& cfg) {
    const int T = cfg.theta_steps;
    const double dtheta = kTwoPi / T;
    const double step = cfg.z_step > 0.0 ? cfg.z_step : std::numbers::pi / (2.0 * measured.k);
    const auto xs = axis_points(cfg.box_min.x, cfg.box_max.x, step);
    const auto ys = axis_points(cfg.box_min.y, cfg.box_max.y, step);

    auto f = [&](const std::vector<double>& x) {
        const auto rotated = spec.rotate_predict(x[0], measured.d_angle);
        const auto moved = translate_pattern(rotated, {x[1], x[2]});
        return raw_distance(measured.samples, moved.samples) / norm;
    };

    const std::size_t nz = xs.size() * ys.size();
    std::vector<double> coarse(static_cast<std::size_t>(T) * nz);
    std::vector<double> profile(static_cast<std::size_t>(T), std::numeric_limits<double>::infinity());
    for (int i = 0; i < T; ++i) {
        const auto rotated = spec.rotate_predict(i * dtheta, measured.d_angle);
        for (std::size_t a = 0; a < xs.size(); ++a) {
            for (std::size_t b = 0; b < ys.size(); ++b) {
                const auto moved = translate_pattern(rotated, {xs[a], ys[b]});
                const double v = raw_distance(measured.samples, moved.samples) / norm;
                coarse[static_cast<std::size_t>(i) * nz + a * ys.size() + b] = v;
                profile[static_cast<std::size_t>(i)] = std::min(profile[static_cast<std::size_t>(i)], v);
            }
        }
    }
    const auto [lo, hi] = std::minmax_element(profile.begin(), profile.end());

    // Seeds from the joint coarse grid.
    std::vector<std::vector<double>> seeds;
    for (const auto c : smallest(coarse, 3)) {
        const std::size_t i = c / nz;
        const std::size_t a = (c % nz) / ys.size();
        const std::size_t b = c % ys.size();
        seeds.push_back({static_cast<double>(i) * dtheta, xs[a], ys[b]});
    }

    // |u_inf| does not change under translation, so the rotation can be
    // estimated from magnitudes alone; z then comes from a finer grid at that
    // rotation.  The joint grid above is too coarse to resolve the phase
    // factor reliably on its own.
    std::vector<double> mag_measured(measured.samples.size());
    for (std::size_t m = 0; m < mag_measured.size(); ++m) mag_measured[m] = std::abs(measured.samples[m]);
    auto g = [&](double theta) {
        const auto rotated = spec.rotate_predict(theta, measured.d_angle);
        double acc = 0.0;
        for (std::size_t m = 0; m < mag_measured.size(); ++m) {
            const double diff = mag_measured[m] - std::abs(rotated.samples[m]);
            acc += diff * diff;
        }
        return std::sqrt(acc) / norm;
    };
    std::vector<double> mag_coarse(static_cast<std::size_t>(T));
    for (int i = 0; i < T; ++i) mag_coarse[static_cast<std::size_t>(i)] = g(i * dtheta);
    const auto fine_x = axis_points(cfg.box_min.x, cfg.box_max.x, 0.25 * step);
    const auto fine_y = axis_points(cfg.box_min.y, cfg.box_max.y, 0.25 * step);
    for (const auto i : smallest(mag_coarse, 2)) {
        const auto r = nelder_mead([&](const std::vector<double>& x) { return g(x[0]); },
                                   {static_cast<double>(i) * dtheta}, {0.5 * dtheta}, cfg.refine_iterations,
                                   cfg.refine_tolerance);
        const double theta = r.x[0];
        const auto rotated = spec.rotate_predict(theta, measured.d_angle);
        double best = std::numeric_limits<double>::infinity();
        Point best_z{};
        for (const double x : fine_x) {
            for (const double y : fine_y) {
                const double v = raw_distance(measured.samples, translate_pattern(rotated, {x, y}).samples);
                if (v < best) {
                    best = v;
                    best_z = {x, y};
                }
            }
        }
        seeds.push_back({theta, best_z.x, best_z.y});
    }

    EntryFit fit;
    fit.theta_flat = (*hi - *lo) < cfg.flatness_tolerance;
    for (const auto& seed : seeds) {
        const auto r = nelder_mead(f, seed, {0.5 * dtheta, 0.5 * step, 0.5 * step}, cfg.refine_iterations,
                                   cfg.refine_tolerance);
        if (r.value < fit.misfit) {
            fit.misfit = r.value;
            fit.pose = Pose{wrap_angle(r.x[0]), {r.x[1], r.x[2]}};
        }
    }
    return fit;
}

json pose_json(const Pose& p) {
    json j;
    j["theta"] = p.theta;
    j["z"] = json::array({p.z.x, p.z.y});
    return j;
}

}  // namespace

ShapeDictionary::ShapeDictionary(std::vector<DictionaryEntry> entries, std::vector<FarFieldMatrix> matrices,
                                 MfsConfig solver, std::vector<std::vector<double>> residuals)
    : entries_(std::move(entries)), matrices_(std::move(matrices)), solver_(solver),
      residuals_(std::move(residuals)) {
    if (entries_.empty()) throw ConfigError("a dictionary needs at least one entry");
    if (matrices_.size() != entries_.size() || residuals_.size() != entries_.size()) {
        throw ConfigError("dictionary entries, matrices and residual lists differ in length");
    }
    std::set<std::string> ids;
    for (std::size_t j = 0; j < entries_.size(); ++j) {
        const auto& e = entries_[j];
        if (!valid_id(e.id)) throw ConfigError("invalid entry id '" + e.id + "' (use letters, digits, _ - .)");
        if (!ids.insert(e.id).second) throw ConfigError("duplicate entry id '" + e.id + "'");
        const auto& F = matrices_[j];
        if (F.k() != matrices_.front().k() || !(F.obs_grid() == matrices_.front().obs_grid()) ||
            !(F.inc_grid() == matrices_.front().inc_grid())) {
            throw MetadataMismatch("matrix of entry '" + e.id + "' has different k or grids");
        }
        if (residuals_[j].size() != static_cast<std::size_t>(F.inc_grid().size())) {
            throw ConfigError("entry '" + e.id + "' needs one residual per incident angle");
        }
        for (std::size_t l = 0; l < residuals_[j].size(); ++l) {
            if (!(residuals_[j][l] <= solver_.residual_cap)) {
                throw ResidualTooLarge("entry '" + e.id + "' incident angle " + std::to_string(l) +
                                           ": residual " + format_double(residuals_[j][l]) + " exceeds cap",
                                       residuals_[j][l]);
            }
        }
    }
    spectral_.resize(entries_.size());
    parallel_for(entries_.size(),
                 [&](std::size_t j) { spectral_[j] = std::make_shared<SpectralFarField>(matrices_[j]); });
}

std::size_t ShapeDictionary::index_of(const std::string& id) const {
    for (std::size_t j = 0; j < entries_.size(); ++j) {
        if (entries_[j].id == id) return j;
    }
    throw ConfigError("dictionary has no entry '" + id + "'");
}

ShapeDictionary precompute(std::vector<DictionaryEntry> entries, double k, const DirectionGrid& obs,
                           const DirectionGrid& inc, const MfsConfig& solver) {
    std::vector<double> angles(static_cast<std::size_t>(inc.size()));
    for (int l = 0; l < inc.size(); ++l) angles[static_cast<std::size_t>(l)] = inc.angle(l);

    std::vector<FarFieldMatrix> matrices;
    std::vector<std::vector<double>> residuals;
    for (const auto& e : entries) {
        const Obstacle obstacle(e.shape, RigidMotion{}, e.bc);
        std::vector<ScatterSolution> sols;
        try {
            sols = solve_many(obstacle, k, angles, solver);
        } catch (const ResidualTooLarge& err) {
            throw ResidualTooLarge("dictionary entry '" + e.id + "': " + err.what(), err.residual());
        }
        FarFieldMatrix F(k, obs, inc);
        std::vector<double> res(angles.size());
        std::vector<FarFieldPattern> cols(angles.size());
        parallel_for(angles.size(), [&](std::size_t l) { cols[l] = far_field(sols[l], obs); });
        for (std::size_t l = 0; l < angles.size(); ++l) {
            F.set_column(static_cast<int>(l), cols[l]);
            res[l] = sols[l].residual();
        }
        matrices.push_back(std::move(F));
        residuals.push_back(std::move(res));
    }
    return ShapeDictionary(std::move(entries), std::move(matrices), solver, std::move(residuals));
}

json dictionary_manifest(const ShapeDictionary& dict) {
    json j;
    j["format"] = "scatlab-dictionary";
    j["k"] = dict.k();
    j["obs_grid"] = dict.obs_grid().size();
    j["inc_grid"] = dict.inc_grid().size();
    j["solver"] = mfs_config_to_json(dict.solver());
    json entries = json::array();
    for (std::size_t e = 0; e < dict.size(); ++e) {
        const auto& entry = dict.entry(e);
        json item;
        item["id"] = entry.id;
        item["shape"] = curve_to_json(entry.shape);
        item["bc"] = bc_to_json(entry.bc);
        item["matrix"] = entry.id + ".csv";
        const auto& r = dict.residuals(e);
        item["max_residual"] = *std::max_element(r.begin(), r.end());
        item["residuals"] = r;
        entries.push_back(std::move(item));
    }
    j["entries"] = std::move(entries);
    return j;
}

void save_dictionary(const ShapeDictionary& dict, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    for (std::size_t e = 0; e < dict.size(); ++e) {
        write_matrix_csv(dir / (dict.entry(e).id + ".csv"), dict.matrix(e));
    }
    std::ofstream out(dir / "manifest.json", std::ios::binary);
    out << dictionary_manifest(dict).dump(2) << '\n';
    if (!out) throw FormatError("cannot write " + (dir / "manifest.json").string());
}

ShapeDictionary load_dictionary(const std::filesystem::path& dir) {
    const json m = read_json_file(dir / "manifest.json");
    if (!m.contains("format") || m.at("format") != "scatlab-dictionary") {
        throw FormatError((dir / "manifest.json").string() + " is not a dictionary manifest");
    }
    const double k = get_number(m, "k");
    const DirectionGrid obs(get_int(m, "obs_grid", 128));
    const DirectionGrid inc(get_int(m, "inc_grid", 128));
    const MfsConfig solver = m.contains("solver") ? mfs_config_from_json(m.at("solver")) : MfsConfig{};
    std::vector<DictionaryEntry> entries;
    std::vector<FarFieldMatrix> matrices;
    std::vector<std::vector<double>> residuals;
    for (const auto& item : m.at("entries")) {
        DictionaryEntry e{item.at("id").get<std::string>(), curve_from_json(item.at("shape")),
                          item.contains("bc") ? bc_from_json(item.at("bc")) : BoundaryCondition::dirichlet()};
        auto F = read_matrix_csv(dir / item.at("matrix").get<std::string>());
        if (F.k() != k || !(F.obs_grid() == obs) || !(F.inc_grid() == inc)) {
            throw MetadataMismatch("matrix of entry '" + e.id + "' disagrees with the dictionary manifest");
        }
        residuals.push_back(item.at("residuals").get<std::vector<double>>());
        entries.push_back(std::move(e));
        matrices.push_back(std::move(F));
    }
    return ShapeDictionary(std::move(entries), std::move(matrices), solver, std::move(residuals));
}

void IdentifyConfig::validate() const {
    if (theta_steps < 4) throw ConfigError("theta_steps must be at least 4");
    if (refine_iterations < 0) throw ConfigError("refine_iterations must be non-negative");
    if (!(refine_tolerance >= 0.0)) throw ConfigError("refine_tolerance must be non-negative");
    if (!(ambiguity_margin >= 0.0)) throw ConfigError("ambiguity_margin must be non-negative");
    if (!(flatness_tolerance >= 0.0)) throw ConfigError("flatness_tolerance must be non-negative");
    if (!(not_in_dictionary > 0.0)) throw ConfigError("not_in_dictionary must be positive");
    if (!(z_step >= 0.0)) throw ConfigError("z_step must be non-negative");
    if (location_mode == LocationMode::search && !(box_min.x <= box_max.x && box_min.y <= box_max.y)) {
        throw ConfigError("search box must satisfy box_min <= box_max");
    }
}

json identify_config_to_json(const IdentifyConfig& cfg) {
    json j;
    j["location_mode"] = cfg.location_mode == LocationMode::known ? "known" : "search";
    j["z"] = json::array({cfg.known_z.x, cfg.known_z.y});
    j["box_min"] = json::array({cfg.box_min.x, cfg.box_min.y});
    j["box_max"] = json::array({cfg.box_max.x, cfg.box_max.y});
    j["z_step"] = cfg.z_step;
    j["theta_steps"] = cfg.theta_steps;
    j["refine_iterations"] = cfg.refine_iterations;
    j["refine_tolerance"] = cfg.refine_tolerance;
    j["ambiguity_margin"] = cfg.ambiguity_margin;
    j["flatness_tolerance"] = cfg.flatness_tolerance;
    j["not_in_dictionary"] = cfg.not_in_dictionary;
    return j;
}

IdentifyConfig identify_config_from_json(const json& j) {
    require_keys(j,
                 {"location_mode", "z", "box_min", "box_max", "z_step", "theta_steps", "refine_iterations",
                  "refine_tolerance", "ambiguity_margin", "flatness_tolerance", "not_in_dictionary"},
                 "identify config");
    IdentifyConfig cfg;
    if (j.contains("location_mode")) {
        const auto mode = j.at("location_mode").get<std::string>();
        if (mode == "known") {
            cfg.location_mode = LocationMode::known;
        } else if (mode == "search") {
            cfg.location_mode = LocationMode::search;
        } else {
            throw ConfigError("location_mode must be 'known' or 'search'");
        }
    }
    cfg.known_z = get_point(j, "z", cfg.known_z);
    cfg.box_min = get_point(j, "box_min", cfg.box_min);
    cfg.box_max = get_point(j, "box_max", cfg.box_max);
    cfg.z_step = get_number(j, "z_step", cfg.z_step);
    cfg.theta_steps = get_int(j, "theta_steps", cfg.theta_steps);
    cfg.refine_iterations = get_int(j, "refine_iterations", cfg.refine_iterations);
    cfg.refine_tolerance = get_number(j, "refine_tolerance", cfg.refine_tolerance);
    cfg.ambiguity_margin = get_number(j, "ambiguity_margin", cfg.ambiguity_margin);
    cfg.flatness_tolerance = get_number(j, "flatness_tolerance", cfg.flatness_tolerance);
    cfg.not_in_dictionary = get_number(j, "not_in_dictionary", cfg.not_in_dictionary);
    cfg.validate();
    return cfg;
}

json result_to_json(const IdentificationResult& r) {
    json j;
    j["best_id"] = r.best_id;
    j["theta"] = r.pose.theta;
    j["z"] = json::array({r.pose.z.x, r.pose.z.y});
    j["misfit"] = r.misfit;
    json ranking = json::array();
    for (const auto& e : r.ranking) {
        json item;
        item["id"] = e.id;
        item["misfit"] = e.misfit;
        item["pose"] = pose_json(e.pose);
        item["theta_flat"] = e.theta_flat;
        ranking.push_back(std::move(item));
    }
    j["ranking"] = std::move(ranking);
    j["flags"] = {{"theta_flat", r.theta_flat}, {"ambiguous", r.ambiguous}};
    return j;
}

FarFieldPattern predict(const ShapeDictionary& dict, std::size_t j, const Pose& pose, double d_angle) {
    return translate_pattern(dict.spectral(j).rotate_predict(pose.theta, d_angle), pose.z);
}

double misfit(const FarFieldPattern& measured, const ShapeDictionary& dict, std::size_t j, const Pose& pose) {
    require_measurement(measured, dict);
    const double norm = l2_norm(measured);
    if (!(norm > 0.0)) throw DomainError("measured pattern is identically zero");
    return l2_distance(measured, predict(dict, j, pose, measured.d_angle)) / norm;
}

IdentificationResult rank_entries(const FarFieldPattern& measured, const ShapeDictionary& dict,
                                  const IdentifyConfig& cfg) {
    cfg.validate();
    require_measurement(measured, dict);
    const double norm = raw_norm(measured.samples);
    if (!(norm > 0.0)) throw DomainError("measured pattern is identically zero");

    const auto base = translate_pattern(measured, -cfg.known_z);
    std::vector<EntryFit> fits(dict.size());
    parallel_for(dict.size(), [&](std::size_t j) {
        fits[j] = cfg.location_mode == LocationMode::known
                      ? fit_known(base.samples, norm, dict.spectral(j), measured.d_angle, cfg)
                      : fit_search(measured, norm, dict.spectral(j), cfg);
    });

    IdentificationResult r;
    for (std::size_t j = 0; j < dict.size(); ++j) {
        r.ranking.push_back(RankedEntry{j, dict.entry(j).id, fits[j].misfit, fits[j].pose, fits[j].theta_flat});
    }
    std::stable_sort(r.ranking.begin(), r.ranking.end(),
                     [](const RankedEntry& a, const RankedEntry& b) { return a.misfit < b.misfit; });
    const auto& best = r.ranking.front();
    r.best_index = best.index;
    r.best_id = best.id;
    r.pose = best.pose;
    r.misfit = best.misfit;
    r.theta_flat = best.theta_flat;
    r.ambiguous = r.ranking.size() >= 2 && (r.ranking[1].misfit - r.ranking[0].misfit) < cfg.ambiguity_margin;
    return r;
}

IdentificationResult identify(const FarFieldPattern& measured, const ShapeDictionary& dict,
                              const IdentifyConfig& cfg) {
    auto r = rank_entries(measured, dict, cfg);
    if (r.misfit > cfg.not_in_dictionary) {
        const std::string msg = "best relative misfit " + format_double(r.misfit) + " (entry '" + r.best_id +
                                "') exceeds " + format_double(cfg.not_in_dictionary);
        throw NotInDictionary(msg, std::move(r));
    }
    if (r.ambiguous) {
        const std::string msg = "entries '" + r.ranking[0].id + "' and '" + r.ranking[1].id +
                                "' fit within the ambiguity margin (misfits " + format_double(r.ranking[0].misfit) +
                                ", " + format_double(r.ranking[1].misfit) + ")";
        throw AmbiguousIdentification(msg, std::move(r));
    }
    return r;
}

IdentificationResult classify_bc(const FarFieldPattern& measured, const ShapeDictionary& hypotheses,
                                 const IdentifyConfig& cfg) {
    for (std::size_t j = 1; j < hypotheses.size(); ++j) {
        if (!same_curve(hypotheses.entry(j).shape, hypotheses.entry(0).shape)) {
            throw ConfigError("boundary-condition hypotheses must share one shape; entry '" +
                              hypotheses.entry(j).id + "' differs");
        }
    }
    return identify(measured, hypotheses, cfg);
}

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> start, const std::vector<double>& step, int max_iterations,
                             double tolerance) {
    const std::size_t n = start.size();
    if (step.size() != n || n == 0) throw ConfigError("nelder_mead needs one step per coordinate");
    std::vector<std::vector<double>> pts{start};
    for (std::size_t i = 0; i < n; ++i) {
        auto p = start;
        p[i] += step[i];
        pts.push_back(std::move(p));
    }
    std::vector<double> vals;
    for (const auto& p : pts) vals.push_back(f(p));

    std::vector<std::size_t> order(n + 1);
    auto sort_vertices = [&] {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
        std::vector<std::vector<double>> p2;
        std::vector<double> v2;
        for (auto i : order) {
            p2.push_back(pts[i]);
            v2.push_back(vals[i]);
        }
        pts = std::move(p2);
        vals = std::move(v2);
    };
    auto combine = [&](const std::vector<double>& c, const std::vector<double>& w, double t) {
        std::vector<double> out(n);
        for (std::size_t i = 0; i < n; ++i) out[i] = c[i] + t * (w[i] - c[i]);
        return out;
    };

    int it = 0;
    sort_vertices();
    for (; it < max_iterations; ++it) {
        if (vals[n] - vals[0] <= tolerance) break;
        std::vector<double> centroid(n, 0.0);
        for (std::size_t v = 0; v < n; ++v) {
            for (std::size_t i = 0; i < n; ++i) centroid[i] += pts[v][i] / static_cast<double>(n);
        }
        const auto xr = combine(centroid, pts[n], -1.0);
        const double fr = f(xr);
        if (fr < vals[0]) {
            const auto xe = combine(centroid, pts[n], -2.0);
            const double fe = f(xe);
            if (fe < fr) {
                pts[n] = xe;
                vals[n] = fe;
            } else {
                pts[n] = xr;
                vals[n] = fr;
            }
        } else if (fr < vals[n - 1]) {
            pts[n] = xr;
            vals[n] = fr;
        } else {
            const bool outside = fr < vals[n];
            const auto xc = outside ? combine(centroid, xr, 0.5) : combine(centroid, pts[n], 0.5);
            const double fc = f(xc);
            if (fc < std::min(fr, vals[n])) {
                pts[n] = xc;
                vals[n] = fc;
            } else {
                for (std::size_t v = 1; v <= n; ++v) {
                    pts[v] = combine(pts[0], pts[v], 0.5);
                    vals[v] = f(pts[v]);
                }
            }
        }
        sort_vertices();
    }
    return {pts[0], vals[0], it};
}

SeparabilityReport separability_check(const ShapeDictionary& dict, int trials, std::uint64_t seed, double floor) {
    if (trials < 1) throw ConfigError("separability needs at least one trial");
    SeparabilityReport rep;
    rep.trials = trials;
    rep.floor = floor;
    rep.min_distance = std::numeric_limits<double>::infinity();
    const std::size_t J = dict.size();
    if (J < 2) return rep;

    struct Hit {
        double dist = std::numeric_limits<double>::infinity();
        std::size_t a = 0, b = 0;
        double d = 0.0, theta = 0.0;
    };
    std::vector<Hit> hits(static_cast<std::size_t>(trials));
    IdentifyConfig cfg;
    parallel_for(hits.size(), [&](std::size_t t) {
        auto rng = task_rng(seed, t);
        const double d = uniform_angle(rng);
        const double theta = uniform_angle(rng);
        Hit best;
        for (std::size_t a = 0; a < J; ++a) {
            const auto pa = dict.spectral(a).rotate_predict(theta, d).samples;
            const double na = raw_norm(pa);
            for (std::size_t b = 0; b < J; ++b) {
                if (b == a) continue;
                auto f = [&](double th) {
                    const auto pb = dict.spectral(b).rotate_predict(th, d).samples;
                    return raw_distance(pa, pb) / std::max(na, raw_norm(pb));
                };
                const int T = cfg.theta_steps;
                const double dtheta = kTwoPi / T;
                std::vector<double> coarse(static_cast<std::size_t>(T));
                for (int i = 0; i < T; ++i) coarse[static_cast<std::size_t>(i)] = f(i * dtheta);
                double dist = *std::min_element(coarse.begin(), coarse.end());
                for (const auto i : smallest(coarse, 3)) {
                    const auto r = nelder_mead([&](const std::vector<double>& x) { return f(x[0]); },
                                               {static_cast<double>(i) * dtheta}, {0.5 * dtheta},
                                               cfg.refine_iterations, cfg.refine_tolerance);
                    dist = std::min(dist, r.value);
                }
                if (dist < best.dist) best = Hit{dist, a, b, d, theta};
            }
        }
        hits[t] = best;
    });
    for (const auto& h : hits) {
        if (h.dist < rep.min_distance) {
            rep.min_distance = h.dist;
            rep.entry_a = dict.entry(h.a).id;
            rep.entry_b = dict.entry(h.b).id;
            rep.d_angle = h.d;
            rep.theta = h.theta;
        }
    }
    rep.pass = rep.min_distance > floor;
    return rep;
}

json separability_to_json(const SeparabilityReport& r) {
    json j;
    j["verdict"] = r.pass ? "PASS" : "FAIL";
    j["trials"] = r.trials;
    j["floor"] = r.floor;
    if (std::isfinite(r.min_distance)) {
        j["min_distance"] = r.min_distance;
        j["closest_pair"] = json::array({r.entry_a, r.entry_b});
        j["d_angle"] = r.d_angle;
        j["theta"] = r.theta;
    } else {
        j["min_distance"] = nullptr;
        j["note"] = "fewer than two entries; vacuous pass";
    }
    return j;
}

}  // namespace scatlab
