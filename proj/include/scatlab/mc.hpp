#pragma once

// Seeded Monte Carlo experiments on far-field distinguishability and on the
// success rate of dictionary identification.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "scatlab/farfield.hpp"
#include "scatlab/identify.hpp"
#include "scatlab/obstacle.hpp"
#include "scatlab/scatter.hpp"
#include "scatlab/shape_io.hpp"

namespace scatlab {

struct ExperimentConfig {
    double k_min = 0.5;
    double k_max = 3.0;
    int trials = 200;
    std::uint64_t seed = 1;
    std::vector<double> epsilons{1e-4, 1e-3, 1e-2, 1e-1};
    DirectionGrid grid{128};
    MfsConfig solver{};

    void validate() const;
};

json experiment_config_to_json(const ExperimentConfig& cfg);
/// Reads the keys of ExperimentConfig; other keys of `j` are ignored.
ExperimentConfig experiment_config_from_json(const json& j);

/// Trial `index` of the stream `seed`: k uniform on (k_min, k_max), incident
/// angle uniform on [0, 2 pi).
IncidentPlaneWave sample_incident(double k_min, double k_max, std::uint64_t seed, std::uint64_t index);

/// ||p - q|| / max(||p||, ||q||); symmetric in its arguments.
double relative_delta(const FarFieldPattern& p, const FarFieldPattern& q);

struct TrialRecord {
    int index = 0;
    double k = 0.0;
    double d_angle = 0.0;
    double delta = 0.0;
    bool excluded = false;
    std::string reason;   // why an excluded trial failed
    double seconds = 0.0; // wall time; not written to report files
};

struct GeometryBlock {
    double hausdorff = 0.0;
    double diam_a = 0.0;
    double diam_b = 0.0;
    bool closures_intersect = false;
    bool bound_holds = false;  // hausdorff <= diam_a + diam_b
};

GeometryBlock geometry_block(const PlacedCurve& a, const PlacedCurve& b);

struct ExperimentReport {
    std::vector<TrialRecord> records;
    std::vector<double> epsilons;
    std::vector<double> cdf;  // fraction of included trials with delta < epsilon
    int included = 0;
    int excluded = 0;
    double min_delta = 0.0;
    double min_k = 0.0;
    double min_d_angle = 0.0;
    double max_delta = 0.0;
    GeometryBlock geometry;
    std::vector<double> annotations;  // disk eigen-wavenumbers inside (k_min, k_max)
};

ExperimentReport distinguish_experiment(const Obstacle& a, const Obstacle& b, const ExperimentConfig& cfg);

struct StabilityProfile {
    std::vector<double> epsilons;
    std::vector<double> probability;
    /// Smallest and largest listed epsilon whose empirical probability is zero.
    std::optional<double> smallest_zero_epsilon;
    std::optional<double> largest_zero_epsilon;
};

StabilityProfile stability_profile(const ExperimentReport& r);

/// Eigen-wavenumbers j_{n,m}/a (Dirichlet) or j'_{n,m}/a (Neumann) of every
/// disk among the obstacles, sorted, inside [k_min, k_max].
std::vector<double> disk_eigen_wavenumbers(const std::vector<Obstacle>& obstacles, double k_min, double k_max);

struct KScanResult {
    std::vector<double> k;
    std::vector<double> delta;  // NaN where a solve failed
    std::vector<std::string> failures;
    std::vector<double> annotations;
    double min_delta = 0.0;
    double min_k = 0.0;
};

/// delta on `points` equally spaced wavenumbers from k_min to k_max inclusive.
KScanResult k_scan(const Obstacle& a, const Obstacle& b, double d_angle, double k_min, double k_max, int points,
                   const DirectionGrid& grid, const MfsConfig& solver);

struct IdSuccessConfig {
    int trials = 100;
    std::uint64_t seed = 1;
    double noise_level = 0.0;
    bool retry = true;          // second random direction on an ambiguous result
    double z_radius = 0.5;      // true translations uniform in [-z_radius, z_radius]^2
    IdentifyConfig identify{};

    void validate() const;
};

json id_success_config_to_json(const IdSuccessConfig& cfg);
IdSuccessConfig id_success_config_from_json(const json& j);

struct IdTrial {
    int index = 0;
    std::size_t true_entry = 0;
    std::string true_id;
    Pose true_pose;
    double k = 0.0;
    double d_angle = 0.0;
    std::string found_id;
    Pose found_pose;
    double misfit = 0.0;
    bool success = false;
    bool ambiguous = false;
    bool not_in_dictionary = false;
    bool retried = false;
    bool solver_failure = false;
    std::string reason;
    /// Rotation error modulo the symmetry group of the true entry; NaN for
    /// rotation-invariant entries.
    double pose_error = 0.0;
};

struct IdSuccessReport {
    std::vector<IdTrial> trials;
    int successes = 0;
    double rate = 0.0;
    double ci_low = 0.0;   // Wilson 95% interval
    double ci_high = 0.0;
    int ambiguous = 0;
    int not_in_dictionary = 0;
    int retries = 0;
    int solver_failures = 0;
    double max_pose_error = 0.0;  // over successful trials with identifiable rotation
};

/// Wilson score interval at 95% for `successes` out of `n`.
std::pair<double, double> wilson_interval(int successes, int n);

/// Rotation distance between two angles modulo 2 pi / order (order 0: zero).
double rotation_error(double a, double b, int symmetry_order);

IdSuccessReport identification_success_rate(const ShapeDictionary& dict, const IdSuccessConfig& cfg);

// Report files.  Floats in CSV use 17 significant digits.
json report_to_json(const ExperimentReport& r);
void write_trials_csv(const std::filesystem::path& path, const ExperimentReport& r);
void write_profile_csv(const std::filesystem::path& path, const StabilityProfile& p);
json kscan_annotations_json(const KScanResult& r);
void write_kscan_csv(const std::filesystem::path& path, const KScanResult& r);
json id_success_to_json(const IdSuccessReport& r);
void write_id_trials_csv(const std::filesystem::path& path, const IdSuccessReport& r);

}  // namespace scatlab
