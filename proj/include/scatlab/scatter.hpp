#pragma once

// Forward solver for time-harmonic exterior scattering of a plane wave by a
// sound-soft, sound-hard or impedance obstacle in the plane.
//
// The scattered field is represented by outgoing point sources placed inside
// the obstacle (method of fundamental solutions),
//
//     u^s(x) = sum_q c_q Phi(x, y_q),   Phi(x, y) = (i/4) H_0^{(1)}(k |x - y|),
//
// which solves the Helmholtz equation and the radiation condition exactly for
// any coefficients.  The coefficients minimize the boundary-condition defect at
// collocation points in the least-squares sense; every solution carries an
// a-posteriori residual certificate measured at separate check points.

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "scatlab/farfield.hpp"
#include "scatlab/geometry.hpp"
#include "scatlab/obstacle.hpp"

namespace scatlab {

/// u^i(x) = exp(i k x . d) with d at polar angle `angle`.
struct IncidentPlaneWave {
    double k = 1.0;
    double angle = 0.0;

    IncidentPlaneWave(double k, double angle);
    Point direction() const { return scatlab::direction(angle); }
};

enum class SourcePlacement {
    complexified,      // y_q = Z(t_q + i tau), Z the curve continued to complex t
    centroid_scaling,  // y_q = c + source_offset (x(t_q) - c)
};

struct MfsConfig {
    int n_sources = 192;
    double oversample = 2.0;       // collocation points = oversample * n_sources
    SourcePlacement placement = SourcePlacement::complexified;
    double tau = 0.15;
    double source_offset = 0.7;
    double residual_cap = 1e-6;

    void validate() const;
    int collocation_points() const;
    int check_points() const { return 4 * n_sources; }
};

/// Largest admissible k * diameter for a forward solve.
inline constexpr double kMaxSizeParameter = 40.0;

class ScatterSolution {
  public:
    ScatterSolution(IncidentPlaneWave wave, Obstacle obstacle, MfsConfig config,
                    std::vector<Point> sources, std::vector<cplx> coefficients);

    const IncidentPlaneWave& wave() const { return wave_; }
    const Obstacle& obstacle() const { return obstacle_; }
    const MfsConfig& config() const { return config_; }
    const std::vector<Point>& sources() const { return sources_; }
    const std::vector<cplx>& coefficients() const { return coefficients_; }

    /// Residual measured when the solution was built (check points = 4 n_sources).
    double residual() const { return residual_; }

    /// Ratio of extreme diagonal entries of the column-scaled R factor; large
    /// values are expected and reported as a diagnostic only.
    double condition_estimate() const { return condition_estimate_; }

    /// Same sources with different coefficients; the residual is recomputed.
    ScatterSolution with_coefficients(std::vector<cplx> coefficients) const;

  private:
    friend std::vector<ScatterSolution> solve_many(const Obstacle&, double, std::span<const double>,
                                                   const MfsConfig&);
    ScatterSolution(IncidentPlaneWave wave, Obstacle obstacle, MfsConfig config, std::vector<Point> sources,
                    std::vector<cplx> coefficients, double residual, double condition_estimate);

    IncidentPlaneWave wave_;
    Obstacle obstacle_;
    MfsConfig config_;
    std::vector<Point> sources_;
    std::vector<cplx> coefficients_;
    double residual_ = 0.0;
    double condition_estimate_ = 1.0;
};

cplx incident_field(const IncidentPlaneWave& w, const Point& x);
/// d/dnu exp(i k x . d) = i k (d . nu) exp(i k x . d).
cplx incident_normal_derivative(const IncidentPlaneWave& w, const Point& x, const Point& normal);

std::string placement_name(SourcePlacement p);
/// Throws ConfigError for unknown names.
SourcePlacement parse_placement(const std::string& name);

/// Source points for an obstacle under the given configuration; every point is
/// verified to lie strictly inside the obstacle.
std::vector<Point> mfs_sources(const PlacedCurve& shape, const MfsConfig& cfg);

/// Throws ResidualTooLarge when the certificate exceeds cfg.residual_cap.
ScatterSolution solve(const Obstacle& obs, const IncidentPlaneWave& w, const MfsConfig& cfg = {});

/// Solves for several incident angles at one wavenumber, sharing one
/// factorization.  Entry i equals solve(obs, {k, angles[i]}, cfg).
std::vector<ScatterSolution> solve_many(const Obstacle& obs, double k, std::span<const double> angles,
                                        const MfsConfig& cfg = {});

/// max |B(u^i + u^s)| over `check_points` boundary points interleaved with the
/// collocation points (0 selects 4 n_sources); |u^i| = 1 so no further scaling.
double boundary_residual(const ScatterSolution& s, int check_points = 0);

/// Scattered field at x; throws DomainError for x inside the obstacle.
cplx near_field(const ScatterSolution& s, const Point& x);
cplx total_field(const ScatterSolution& s, const Point& x);

/// Far-field constant of Phi: (i/4) H_0^{(1)}(k r) ~ gamma e^{ikr} / sqrt(r).
cplx far_field_constant(double k);

FarFieldPattern far_field(const ScatterSolution& s, const DirectionGrid& grid);
cplx far_field_at(const ScatterSolution& s, double obs_angle);

/// Truncation order used by the disk series: ceil(ka) + 20, at least 25.
int disk_series_order(double ka);

/// Separation-of-variables far field of a disk of radius a centered at `center`.
FarFieldPattern disk_far_field_series(double a, const BoundaryCondition& bc, const IncidentPlaneWave& w,
                                      const DirectionGrid& grid, const Point& center = {});

/// Ratio r_n for the disk: the scattered mode is -i^n r_n H_n(kr) e^{in(phi - d)}.
cplx disk_mode_ratio(int n, double ka, double k, const BoundaryCondition& bc);

}  // namespace scatlab
