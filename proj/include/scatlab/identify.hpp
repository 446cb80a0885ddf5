#pragma once

// Dictionary-based identification of an obstacle from one far-field pattern.
//
// A dictionary holds base shapes Omega_j at the origin together with their
// full-aperture far-field matrices.  A measurement of z + U(theta) Omega_j is
// matched by predicting its pattern from the matrix (rotation by spectral
// interpolation, translation by the exact phase factor) and minimizing the
// relative L2 misfit over the pose.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "scatlab/errors.hpp"
#include "scatlab/farfield.hpp"
#include "scatlab/obstacle.hpp"
#include "scatlab/scatter.hpp"
#include "scatlab/shape_io.hpp"

namespace scatlab {

struct DictionaryEntry {
    std::string id;
    ParametricCurve shape;
    BoundaryCondition bc = BoundaryCondition::dirichlet();
};

class ShapeDictionary {
  public:
    /// residuals[j][l] is the certificate of entry j at incident angle l.
    ShapeDictionary(std::vector<DictionaryEntry> entries, std::vector<FarFieldMatrix> matrices, MfsConfig solver,
                    std::vector<std::vector<double>> residuals);

    std::size_t size() const { return entries_.size(); }
    const DictionaryEntry& entry(std::size_t j) const { return entries_[j]; }
    const std::vector<DictionaryEntry>& entries() const { return entries_; }
    const FarFieldMatrix& matrix(std::size_t j) const { return matrices_[j]; }
    const SpectralFarField& spectral(std::size_t j) const { return *spectral_[j]; }
    const MfsConfig& solver() const { return solver_; }
    const std::vector<double>& residuals(std::size_t j) const { return residuals_[j]; }

    double k() const { return matrices_.front().k(); }
    const DirectionGrid& obs_grid() const { return matrices_.front().obs_grid(); }
    const DirectionGrid& inc_grid() const { return matrices_.front().inc_grid(); }

    /// Index of the entry with the given id; throws ConfigError when absent.
    std::size_t index_of(const std::string& id) const;

  private:
    std::vector<DictionaryEntry> entries_;
    std::vector<FarFieldMatrix> matrices_;
    std::vector<std::shared_ptr<const SpectralFarField>> spectral_;
    MfsConfig solver_;
    std::vector<std::vector<double>> residuals_;
};

/// L forward solves per entry (one factorization each).  A failed
/// certificate aborts with ResidualTooLarge naming the entry and angle.
ShapeDictionary precompute(std::vector<DictionaryEntry> entries, double k, const DirectionGrid& obs,
                           const DirectionGrid& inc, const MfsConfig& solver = {});

/// Directory layout: manifest.json plus <id>.csv per entry (matrix format).
void save_dictionary(const ShapeDictionary& dict, const std::filesystem::path& dir);
ShapeDictionary load_dictionary(const std::filesystem::path& dir);
json dictionary_manifest(const ShapeDictionary& dict);

struct Pose {
    double theta = 0.0;
    Point z{};
};

enum class LocationMode { known, search };

struct IdentifyConfig {
    LocationMode location_mode = LocationMode::known;
    Point known_z{};                 // location used in known mode
    Point box_min{-1.0, -1.0};       // search box for z in search mode
    Point box_max{1.0, 1.0};
    double z_step = 0.0;             // coarse z spacing; 0 selects pi / (2k)
    int theta_steps = 64;
    int refine_iterations = 200;
    double refine_tolerance = 1e-10;
    double ambiguity_margin = 1e-3;  // absolute gap between the two best relative misfits
    double flatness_tolerance = 1e-8;
    double not_in_dictionary = 0.1;

    void validate() const;
};

json identify_config_to_json(const IdentifyConfig& cfg);
IdentifyConfig identify_config_from_json(const json& j);

struct RankedEntry {
    std::size_t index = 0;
    std::string id;
    double misfit = 0.0;
    Pose pose;
    bool theta_flat = false;
};

struct IdentificationResult {
    std::size_t best_index = 0;
    std::string best_id;
    Pose pose;
    double misfit = 0.0;
    std::vector<RankedEntry> ranking;  // ascending misfit, ties by entry index
    bool theta_flat = false;
    bool ambiguous = false;
};

json result_to_json(const IdentificationResult& r);

/// Best relative misfit above the configured threshold.
class NotInDictionary : public Error {
  public:
    NotInDictionary(const std::string& what, IdentificationResult result)
        : Error(what), result_(std::move(result)) {}
    const IdentificationResult& result() const noexcept { return result_; }

  private:
    IdentificationResult result_;
};

/// The two best entries are within the ambiguity margin.
class AmbiguousIdentification : public Error {
  public:
    AmbiguousIdentification(const std::string& what, IdentificationResult result)
        : Error(what), result_(std::move(result)) {}
    const IdentificationResult& result() const noexcept { return result_; }
    const RankedEntry& first() const { return result_.ranking[0]; }
    const RankedEntry& second() const { return result_.ranking[1]; }

  private:
    IdentificationResult result_;
};

/// Pattern predicted for entry j placed at `pose`, for the measurement's direction.
FarFieldPattern predict(const ShapeDictionary& dict, std::size_t j, const Pose& pose, double d_angle);

/// ||measured - predicted|| / ||measured||.
double misfit(const FarFieldPattern& measured, const ShapeDictionary& dict, std::size_t j, const Pose& pose);

/// Full search and ranking without the NotInDictionary / ambiguity checks.
IdentificationResult rank_entries(const FarFieldPattern& measured, const ShapeDictionary& dict,
                                  const IdentifyConfig& cfg = {});

/// rank_entries, then throws NotInDictionary or AmbiguousIdentification.
IdentificationResult identify(const FarFieldPattern& measured, const ShapeDictionary& dict,
                              const IdentifyConfig& cfg = {});

/// identify over hypotheses that share one shape and differ in boundary
/// condition; throws ConfigError when the shapes differ.
IdentificationResult classify_bc(const FarFieldPattern& measured, const ShapeDictionary& hypotheses,
                                 const IdentifyConfig& cfg = {});

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
};

/// Minimizes f from `start` with the given initial step per coordinate.  The
/// start point is a vertex of the initial simplex, so the returned value never
/// exceeds f(start).  Stops when the spread of values over the simplex is at
/// most `tolerance` or after `max_iterations`.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> start, const std::vector<double>& step, int max_iterations,
                             double tolerance);

struct SeparabilityReport {
    bool pass = true;
    double min_distance = 0.0;  // +inf for fewer than two entries
    std::string entry_a;        // offending (closest) pair
    std::string entry_b;
    double d_angle = 0.0;
    double theta = 0.0;
    int trials = 0;
    double floor = 1e-3;
};

/// For random (d, theta): the pattern of entry a rotated by theta is compared
/// with entry b at its best-fitting rotation, for every ordered pair a != b.
/// The distance is relative to the larger of the two norms.  PASS iff the
/// minimum over trials and pairs exceeds `floor`.
SeparabilityReport separability_check(const ShapeDictionary& dict, int trials, std::uint64_t seed,
                                      double floor = 1e-3);

json separability_to_json(const SeparabilityReport& r);

}  // namespace scatlab
