#include "scatlab/mc.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>

#include "scatlab/errors.hpp"
#include "scatlab/parallel.hpp"
#include "scatlab/rng.hpp"
#include "scatlab/specfun.hpp"

namespace scatlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const double kNaN = std::numeric_limits<double>::quiet_NaN();

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot write " + path.string());
    return out;
}

// Pattern pair for one wave; throws on solver failure.
std::pair<FarFieldPattern, FarFieldPattern> pattern_pair(const Obstacle& a, const Obstacle& b,
                                                         const IncidentPlaneWave& w, const DirectionGrid& grid,
                                                         const MfsConfig& solver) {
    return {far_field(solve(a, w, solver), grid), far_field(solve(b, w, solver), grid)};
}

}  // namespace

void ExperimentConfig::validate() const {
    if (!(k_min > 0.0) || !(k_max > k_min) || !std::isfinite(k_max)) {
        throw ConfigError("wavenumber interval needs 0 < k_min < k_max");
    }
    if (trials < 1) throw ConfigError("trials must be at least 1");
    for (std::size_t i = 0; i < epsilons.size(); ++i) {
        if (!(epsilons[i] > 0.0)) throw ConfigError("epsilons must be positive");
        if (i > 0 && !(epsilons[i] > epsilons[i - 1])) throw ConfigError("epsilons must be ascending");
    }
    solver.validate();
}

json experiment_config_to_json(const ExperimentConfig& cfg) {
    json j;
    j["k_min"] = cfg.k_min;
    j["k_max"] = cfg.k_max;
    j["trials"] = cfg.trials;
    j["seed"] = cfg.seed;
    j["epsilons"] = cfg.epsilons;
    j["grid"] = cfg.grid.size();
    j["solver"] = mfs_config_to_json(cfg.solver);
    return j;
}

ExperimentConfig experiment_config_from_json(const json& j) {
    ExperimentConfig cfg;
    cfg.k_min = get_number(j, "k_min", cfg.k_min);
    cfg.k_max = get_number(j, "k_max", cfg.k_max);
    cfg.trials = get_int(j, "trials", cfg.trials);
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("epsilons")) cfg.epsilons = j.at("epsilons").get<std::vector<double>>();
    cfg.grid = DirectionGrid(get_int(j, "grid", cfg.grid.size()));
    if (j.contains("solver")) cfg.solver = mfs_config_from_json(j.at("solver"));
    cfg.validate();
    return cfg;
}

IncidentPlaneWave sample_incident(double k_min, double k_max, std::uint64_t seed, std::uint64_t index) {
    if (!(k_min > 0.0) || !(k_max > k_min)) throw DomainError("wavenumber interval needs 0 < k_min < k_max");
    auto rng = task_rng(seed, index);
    const double k = uniform(rng, k_min, k_max);
    const double angle = uniform_angle(rng);
    return {k, angle};
}

double relative_delta(const FarFieldPattern& p, const FarFieldPattern& q) {
    const double scale = std::max(l2_norm(p), l2_norm(q));
    if (!(scale > 0.0)) return 0.0;
    return l2_distance(p, q) / scale;
}

GeometryBlock geometry_block(const PlacedCurve& a, const PlacedCurve& b) {
    GeometryBlock g;
    g.hausdorff = hausdorff_distance(a, b);
    g.diam_a = diameter(a);
    g.diam_b = diameter(b);
    const auto pa = a.sample(kDefaultGeometrySamples);
    const auto pb = b.sample(kDefaultGeometrySamples);
    for (const auto& p : pa) g.closures_intersect = g.closures_intersect || locate(b, p, 1e-9) != PointLocation::outside;
    for (const auto& p : pb) g.closures_intersect = g.closures_intersect || locate(a, p, 1e-9) != PointLocation::outside;
    g.bound_holds = g.hausdorff <= g.diam_a + g.diam_b;
    return g;
}

std::vector<double> disk_eigen_wavenumbers(const std::vector<Obstacle>& obstacles, double k_min, double k_max) {
    std::vector<double> out;
    for (const auto& obs : obstacles) {
        const auto* disk = std::get_if<Circle>(&obs.shape.base().family());
        if (disk == nullptr || obs.bc.kind() == BcKind::impedance) continue;
        const bool dirichlet = obs.bc.kind() == BcKind::dirichlet;
        const double a = disk->radius;
        for (int n = 0; n <= specfun::kMaxOrder; ++n) {
            bool any = false;
            for (int m = 1;; ++m) {
                double z = 0.0;
                try {
                    z = dirichlet ? specfun::bessel_j_zero(n, m) : specfun::bessel_dj_zero(n, m);
                } catch (const DomainError&) {
                    break;
                }
                const double kz = z / a;
                if (kz > k_max) break;
                any = true;
                if (kz >= k_min) out.push_back(kz);
            }
            // j'_{0,1} exceeds j'_{1,1}, so order 0 alone says nothing about higher orders.
            if (!any && n > 0) break;
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

ExperimentReport distinguish_experiment(const Obstacle& a, const Obstacle& b, const ExperimentConfig& cfg) {
    cfg.validate();
    ExperimentReport r;
    r.records.resize(static_cast<std::size_t>(cfg.trials));
    parallel_for(r.records.size(), [&](std::size_t i) {
        const auto t0 = std::chrono::steady_clock::now();
        TrialRecord& rec = r.records[i];
        rec.index = static_cast<int>(i);
        const auto w = sample_incident(cfg.k_min, cfg.k_max, cfg.seed, i);
        rec.k = w.k;
        rec.d_angle = w.angle;
        try {
            const auto [pa, pb] = pattern_pair(a, b, w, cfg.grid, cfg.solver);
            rec.delta = relative_delta(pa, pb);
        } catch (const Error& e) {
            rec.excluded = true;
            rec.delta = kNaN;
            rec.reason = e.what();
        }
        rec.seconds = seconds_since(t0);
    });

    r.epsilons = cfg.epsilons;
    r.min_delta = std::numeric_limits<double>::infinity();
    r.max_delta = 0.0;
    for (const auto& rec : r.records) {
        if (rec.excluded) {
            ++r.excluded;
            continue;
        }
        ++r.included;
        if (rec.delta < r.min_delta) {
            r.min_delta = rec.delta;
            r.min_k = rec.k;
            r.min_d_angle = rec.d_angle;
        }
        r.max_delta = std::max(r.max_delta, rec.delta);
    }
    if (r.included == 0) r.min_delta = kNaN;
    for (const double eps : cfg.epsilons) {
        int below = 0;
        for (const auto& rec : r.records) below += (!rec.excluded && rec.delta < eps) ? 1 : 0;
        r.cdf.push_back(r.included > 0 ? static_cast<double>(below) / r.included : kNaN);
    }
    r.geometry = geometry_block(a.shape, b.shape);
    r.annotations = disk_eigen_wavenumbers({a, b}, cfg.k_min, cfg.k_max);
    return r;
}

StabilityProfile stability_profile(const ExperimentReport& r) {
    StabilityProfile p;
    p.epsilons = r.epsilons;
    p.probability = r.cdf;
    for (std::size_t i = 0; i < p.epsilons.size(); ++i) {
        if (p.probability[i] != 0.0) continue;
        if (!p.smallest_zero_epsilon) p.smallest_zero_epsilon = p.epsilons[i];
        p.largest_zero_epsilon = p.epsilons[i];
    }
    return p;
}

KScanResult k_scan(const Obstacle& a, const Obstacle& b, double d_angle, double k_min, double k_max, int points,
                   const DirectionGrid& grid, const MfsConfig& solver) {
    if (points < 1) throw ConfigError("k-scan needs at least one point");
    if (!(k_min > 0.0) || !(k_max >= k_min)) throw ConfigError("k-scan needs 0 < k_min <= k_max");
    KScanResult r;
    r.k.resize(static_cast<std::size_t>(points));
    r.delta.resize(r.k.size());
    std::vector<std::string> reasons(r.k.size());
    for (int i = 0; i < points; ++i) {
        r.k[static_cast<std::size_t>(i)] = points == 1 ? k_min : k_min + (k_max - k_min) * i / (points - 1);
    }
    parallel_for(r.k.size(), [&](std::size_t i) {
        try {
            const auto [pa, pb] = pattern_pair(a, b, IncidentPlaneWave(r.k[i], d_angle), grid, solver);
            r.delta[i] = relative_delta(pa, pb);
        } catch (const Error& e) {
            r.delta[i] = kNaN;
            reasons[i] = e.what();
        }
    });
    r.min_delta = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < r.k.size(); ++i) {
        if (!reasons[i].empty()) r.failures.push_back("k=" + format_double(r.k[i]) + ": " + reasons[i]);
        if (std::isfinite(r.delta[i]) && r.delta[i] < r.min_delta) {
            r.min_delta = r.delta[i];
            r.min_k = r.k[i];
        }
    }
    if (!std::isfinite(r.min_delta)) r.min_delta = kNaN;
    r.annotations = disk_eigen_wavenumbers({a, b}, k_min, k_max);
    return r;
}

void IdSuccessConfig::validate() const {
    if (trials < 1) throw ConfigError("trials must be at least 1");
    if (!(noise_level >= 0.0)) throw ConfigError("noise_level must be non-negative");
    if (!(z_radius >= 0.0)) throw ConfigError("z_radius must be non-negative");
    identify.validate();
}

json id_success_config_to_json(const IdSuccessConfig& cfg) {
    json j;
    j["trials"] = cfg.trials;
    j["seed"] = cfg.seed;
    j["noise_level"] = cfg.noise_level;
    j["retry"] = cfg.retry;
    j["z_radius"] = cfg.z_radius;
    j["identify"] = identify_config_to_json(cfg.identify);
    return j;
}

IdSuccessConfig id_success_config_from_json(const json& j) {
    IdSuccessConfig cfg;
    cfg.trials = get_int(j, "trials", cfg.trials);
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.noise_level = get_number(j, "noise_level", cfg.noise_level);
    if (j.contains("retry")) cfg.retry = j.at("retry").get<bool>();
    cfg.z_radius = get_number(j, "z_radius", cfg.z_radius);
    if (j.contains("identify")) cfg.identify = identify_config_from_json(j.at("identify"));
    cfg.validate();
    return cfg;
}

std::pair<double, double> wilson_interval(int successes, int n) {
    if (n <= 0) return {0.0, 1.0};
    const double z = 1.959963984540054;
    const double p = static_cast<double>(successes) / n;
    const double z2n = z * z / n;
    const double center = (p + 0.5 * z2n) / (1.0 + z2n);
    const double half = z * std::sqrt(p * (1.0 - p) / n + 0.25 * z2n / n) / (1.0 + z2n);
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

double rotation_error(double a, double b, int symmetry_order) {
    if (symmetry_order == 0) return 0.0;
    const double period = kTwoPi / symmetry_order;
    const double d = std::fmod(std::fmod(a - b, period) + period, period);
    return std::min(d, period - d);
}

IdSuccessReport identification_success_rate(const ShapeDictionary& dict, const IdSuccessConfig& cfg) {
    cfg.validate();
    std::vector<int> symmetry(dict.size());
    for (std::size_t j = 0; j < dict.size(); ++j) symmetry[j] = rotational_symmetry_order(dict.entry(j).shape);

    IdSuccessReport rep;
    rep.trials.resize(static_cast<std::size_t>(cfg.trials));
    parallel_for(rep.trials.size(), [&](std::size_t i) {
        IdTrial& t = rep.trials[i];
        t.index = static_cast<int>(i);
        auto rng = task_rng(cfg.seed, i);
        t.true_entry = std::min(dict.size() - 1, static_cast<std::size_t>(uniform01(rng) * dict.size()));
        t.true_id = dict.entry(t.true_entry).id;
        t.true_pose.theta = uniform_angle(rng);
        t.true_pose.z = {uniform(rng, -cfg.z_radius, cfg.z_radius), uniform(rng, -cfg.z_radius, cfg.z_radius)};
        t.k = dict.k();
        t.d_angle = uniform_angle(rng);
        const auto& entry = dict.entry(t.true_entry);
        const Obstacle obstacle(entry.shape, RigidMotion{t.true_pose.theta, t.true_pose.z}, entry.bc);
        IdentifyConfig icfg = cfg.identify;
        icfg.known_z = t.true_pose.z;

        auto measure = [&](double d_angle) {
            const auto clean = far_field(solve(obstacle, IncidentPlaneWave(t.k, d_angle), dict.solver()),
                                         dict.obs_grid());
            return add_noise(clean, cfg.noise_level, rng());
        };
        try {
            auto r = rank_entries(measure(t.d_angle), dict, icfg);
            if (r.ambiguous && cfg.retry) {
                t.retried = true;
                r = rank_entries(measure(uniform_angle(rng)), dict, icfg);
            }
            t.found_id = r.best_id;
            t.found_pose = r.pose;
            t.misfit = r.misfit;
            t.ambiguous = r.ambiguous;
            t.not_in_dictionary = r.misfit > icfg.not_in_dictionary;
            t.success = !t.not_in_dictionary && !t.ambiguous && r.best_index == t.true_entry;
            t.pose_error = symmetry[t.true_entry] == 0
                               ? kNaN
                               : rotation_error(r.pose.theta, t.true_pose.theta, symmetry[t.true_entry]);
        } catch (const Error& e) {
            t.solver_failure = true;
            t.reason = e.what();
            t.pose_error = kNaN;
        }
    });

    for (const auto& t : rep.trials) {
        rep.successes += t.success ? 1 : 0;
        rep.ambiguous += t.ambiguous ? 1 : 0;
        rep.not_in_dictionary += t.not_in_dictionary ? 1 : 0;
        rep.retries += t.retried ? 1 : 0;
        rep.solver_failures += t.solver_failure ? 1 : 0;
        if (t.success && std::isfinite(t.pose_error)) rep.max_pose_error = std::max(rep.max_pose_error, t.pose_error);
    }
    rep.rate = static_cast<double>(rep.successes) / cfg.trials;
    std::tie(rep.ci_low, rep.ci_high) = wilson_interval(rep.successes, cfg.trials);
    return rep;
}

json report_to_json(const ExperimentReport& r) {
    json j;
    j["trials"] = r.records.size();
    j["included"] = r.included;
    j["excluded"] = r.excluded;
    j["min_delta"] = number_or_null(r.min_delta);
    j["min_delta_k"] = r.min_k;
    j["min_delta_d_angle"] = r.min_d_angle;
    j["max_delta"] = r.max_delta;
    json cdf = json::array();
    for (std::size_t i = 0; i < r.epsilons.size(); ++i) {
        cdf.push_back({{"epsilon", r.epsilons[i]}, {"probability", number_or_null(r.cdf[i])}});
    }
    j["cdf"] = std::move(cdf);
    const auto profile = stability_profile(r);
    j["smallest_zero_probability_epsilon"] =
        profile.smallest_zero_epsilon ? json(*profile.smallest_zero_epsilon) : json(nullptr);
    j["largest_zero_probability_epsilon"] =
        profile.largest_zero_epsilon ? json(*profile.largest_zero_epsilon) : json(nullptr);
    j["geometry"] = {{"hausdorff", r.geometry.hausdorff},
                     {"diam_a", r.geometry.diam_a},
                     {"diam_b", r.geometry.diam_b},
                     {"closures_intersect", r.geometry.closures_intersect},
                     {"bound", "hausdorff <= diam_a + diam_b"},
                     {"bound_holds", r.geometry.bound_holds}};
    j["disk_eigen_wavenumbers"] = r.annotations;
    json excluded = json::array();
    for (const auto& rec : r.records) {
        if (rec.excluded) excluded.push_back({{"index", rec.index}, {"reason", rec.reason}});
    }
    j["excluded_trials"] = std::move(excluded);
    return j;
}

void write_trials_csv(const std::filesystem::path& path, const ExperimentReport& r) {
    auto out = open_out(path);
    out << "index,k,d_angle,delta,excluded\n";
    for (const auto& rec : r.records) {
        out << rec.index << ',' << format_double(rec.k) << ',' << format_double(rec.d_angle) << ','
            << (rec.excluded ? std::string("nan") : format_double(rec.delta)) << ',' << (rec.excluded ? 1 : 0)
            << '\n';
    }
}

void write_profile_csv(const std::filesystem::path& path, const StabilityProfile& p) {
    auto out = open_out(path);
    out << "epsilon,probability\n";
    for (std::size_t i = 0; i < p.epsilons.size(); ++i) {
        out << format_double(p.epsilons[i]) << ',' << format_double(p.probability[i]) << '\n';
    }
}

json kscan_annotations_json(const KScanResult& r) {
    json j;
    j["points"] = r.k.size();
    j["k_min"] = r.k.front();
    j["k_max"] = r.k.back();
    j["min_delta"] = number_or_null(r.min_delta);
    j["min_delta_k"] = r.min_k;
    j["disk_eigen_wavenumbers"] = r.annotations;
    j["failures"] = r.failures;
    return j;
}

void write_kscan_csv(const std::filesystem::path& path, const KScanResult& r) {
    auto out = open_out(path);
    out << "k,delta\n";
    for (std::size_t i = 0; i < r.k.size(); ++i) {
        out << format_double(r.k[i]) << ',' << (std::isfinite(r.delta[i]) ? format_double(r.delta[i]) : "nan")
            << '\n';
    }
}

json id_success_to_json(const IdSuccessReport& r) {
    json j;
    j["trials"] = r.trials.size();
    j["successes"] = r.successes;
    j["rate"] = r.rate;
    j["ci95"] = json::array({r.ci_low, r.ci_high});
    j["ambiguous"] = r.ambiguous;
    j["not_in_dictionary"] = r.not_in_dictionary;
    j["retries"] = r.retries;
    j["solver_failures"] = r.solver_failures;
    j["max_pose_error"] = r.max_pose_error;
    json failures = json::array();
    for (const auto& t : r.trials) {
        if (t.success) continue;
        failures.push_back({{"index", t.index},
                            {"true_id", t.true_id},
                            {"found_id", t.found_id},
                            {"k", t.k},
                            {"d_angle", t.d_angle},
                            {"theta", t.true_pose.theta},
                            {"z", json::array({t.true_pose.z.x, t.true_pose.z.y})},
                            {"misfit", number_or_null(t.misfit)},
                            {"ambiguous", t.ambiguous},
                            {"not_in_dictionary", t.not_in_dictionary},
                            {"reason", t.reason}});
    }
    j["failures"] = std::move(failures);
    return j;
}

void write_id_trials_csv(const std::filesystem::path& path, const IdSuccessReport& r) {
    auto out = open_out(path);
    out << "index,true_id,theta,z_x,z_y,k,d_angle,found_id,found_theta,misfit,pose_error,success,ambiguous,retried\n";
    for (const auto& t : r.trials) {
        out << t.index << ',' << t.true_id << ',' << format_double(t.true_pose.theta) << ','
            << format_double(t.true_pose.z.x) << ',' << format_double(t.true_pose.z.y) << ',' << format_double(t.k)
            << ',' << format_double(t.d_angle) << ',' << t.found_id << ',' << format_double(t.found_pose.theta)
            << ',' << format_double(t.misfit) << ','
            << (std::isfinite(t.pose_error) ? format_double(t.pose_error) : "nan") << ',' << (t.success ? 1 : 0)
            << ',' << (t.ambiguous ? 1 : 0) << ',' << (t.retried ? 1 : 0) << '\n';
    }
}

}  // namespace scatlab
