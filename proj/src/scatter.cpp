#include "scatlab/scatter.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/QR>

#include "scatlab/errors.hpp"
#include "scatlab/kernels.hpp"
#include "scatlab/specfun.hpp"

namespace scatlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

kernels::BoundaryNodes boundary_nodes(const PlacedCurve& shape, int count, double shift) {
    kernels::BoundaryNodes nodes;
    nodes.points.reserve(static_cast<std::size_t>(count));
    nodes.normals.reserve(static_cast<std::size_t>(count));
    for (int p = 0; p < count; ++p) {
        const auto s = shape.eval(kTwoPi * (p + shift) / count);
        nodes.points.push_back(s.point);
        nodes.normals.push_back(s.normal);
    }
    return nodes;
}

// Check points t = 2 pi (p + 1/2) / n never coincide with collocation points
// t = 2 pi q / m when n = 2m.
kernels::BoundaryNodes check_nodes(const PlacedCurve& shape, int count) {
    return boundary_nodes(shape, count, 0.5);
}

cplx incident_trace(const IncidentPlaneWave& w, const BoundaryCondition& bc, const Point& x, const Point& nu) {
    return bc.apply(incident_field(w, x), incident_normal_derivative(w, x, nu));
}

double residual_on(const Eigen::MatrixXcd& check_matrix, const kernels::BoundaryNodes& nodes,
                   const IncidentPlaneWave& w, const BoundaryCondition& bc, std::span<const cplx> coeffs) {
    const Eigen::Map<const Eigen::VectorXcd> c(coeffs.data(), static_cast<Eigen::Index>(coeffs.size()));
    const Eigen::VectorXcd scattered = check_matrix * c;
    double worst = 0.0;
    for (Eigen::Index p = 0; p < scattered.size(); ++p) {
        const cplx total = scattered(p) + incident_trace(w, bc, nodes.points[p], nodes.normals[p]);
        worst = std::max(worst, std::abs(total));
    }
    return worst;
}

void check_size_parameter(const Obstacle& obs, double k) {
    if (!(k > 0.0) || !std::isfinite(k)) throw DomainError("wavenumber must be a positive real");
    const double size = k * diameter(obs.shape, 256);
    if (size > kMaxSizeParameter) {
        throw DomainError("k * diameter = " + format_double(size) + " exceeds the solver cap of 40");
    }
}

}  // namespace

IncidentPlaneWave::IncidentPlaneWave(double k_, double angle_) : k(k_), angle(angle_) {
    if (!(k > 0.0) || !std::isfinite(k)) throw DomainError("wavenumber must be a positive real");
    if (!std::isfinite(angle)) throw DomainError("incident angle must be finite");
}

void MfsConfig::validate() const {
    if (n_sources < 8) throw ConfigError("n_sources must be at least 8");
    if (!(oversample >= 1.0)) throw ConfigError("oversample must be >= 1");
    if (!(source_offset > 0.0 && source_offset < 1.0)) throw ConfigError("source_offset must lie in (0, 1)");
    if (!(tau > 0.0 && tau < 1.0)) throw ConfigError("tau must lie in (0, 1)");
    if (!(residual_cap > 0.0)) throw ConfigError("residual_cap must be positive");
}

int MfsConfig::collocation_points() const {
    return static_cast<int>(std::lround(oversample * n_sources));
}

ScatterSolution::ScatterSolution(IncidentPlaneWave wave, Obstacle obstacle, MfsConfig config,
                                 std::vector<Point> sources, std::vector<cplx> coefficients)
    : wave_(wave), obstacle_(std::move(obstacle)), config_(config), sources_(std::move(sources)),
      coefficients_(std::move(coefficients)) {
    if (sources_.size() != coefficients_.size()) {
        throw ConfigError("source and coefficient counts differ");
    }
    residual_ = boundary_residual(*this);
}

ScatterSolution::ScatterSolution(IncidentPlaneWave wave, Obstacle obstacle, MfsConfig config,
                                 std::vector<Point> sources, std::vector<cplx> coefficients, double residual,
                                 double condition_estimate)
    : wave_(wave), obstacle_(std::move(obstacle)), config_(config), sources_(std::move(sources)),
      coefficients_(std::move(coefficients)), residual_(residual), condition_estimate_(condition_estimate) {}

ScatterSolution ScatterSolution::with_coefficients(std::vector<cplx> coefficients) const {
    ScatterSolution out(wave_, obstacle_, config_, sources_, std::move(coefficients));
    out.condition_estimate_ = condition_estimate_;
    return out;
}

cplx incident_field(const IncidentPlaneWave& w, const Point& x) {
    const double phase = w.k * dot(x, w.direction());
    return {std::cos(phase), std::sin(phase)};
}

cplx incident_normal_derivative(const IncidentPlaneWave& w, const Point& x, const Point& normal) {
    return kI * w.k * dot(w.direction(), normal) * incident_field(w, x);
}

std::string placement_name(SourcePlacement p) {
    return p == SourcePlacement::complexified ? "complexified" : "centroid_scaling";
}

SourcePlacement parse_placement(const std::string& name) {
    if (name == "complexified") return SourcePlacement::complexified;
    if (name == "centroid_scaling") return SourcePlacement::centroid_scaling;
    throw ConfigError("unknown source placement '" + name + "'");
}

std::vector<Point> mfs_sources(const PlacedCurve& shape, const MfsConfig& cfg) {
    cfg.validate();
    const bool scaled = cfg.placement == SourcePlacement::centroid_scaling;
    const Point c = scaled ? shape.centroid() : Point{};
    std::vector<Point> sources;
    sources.reserve(static_cast<std::size_t>(cfg.n_sources));
    for (int q = 0; q < cfg.n_sources; ++q) {
        const double t = kTwoPi * q / cfg.n_sources;
        const Point y = scaled ? c + cfg.source_offset * (shape.point(t) - c)
                               : shape.motion().apply(shape.base().complexified_point(t, cfg.tau));
        if (locate(shape, y, 1e-9) != PointLocation::inside) {
            throw ConfigError("source point " + std::to_string(q) + " falls outside the obstacle; reduce " +
                              (scaled ? "source_offset" : "tau"));
        }
        sources.push_back(y);
    }
    return sources;
}

ScatterSolution solve(const Obstacle& obs, const IncidentPlaneWave& w, const MfsConfig& cfg) {
    const double angle = w.angle;
    return std::move(solve_many(obs, w.k, std::span<const double>(&angle, 1), cfg).front());
}

std::vector<ScatterSolution> solve_many(const Obstacle& obs, double k, std::span<const double> angles,
                                        const MfsConfig& cfg) {
    cfg.validate();
    check_size_parameter(obs, k);
    const auto sources = mfs_sources(obs.shape, cfg);
    const auto nodes = boundary_nodes(obs.shape, cfg.collocation_points(), 0.0);
    const auto checks = check_nodes(obs.shape, cfg.check_points());

    Eigen::MatrixXcd A = kernels::mfs_matrix(nodes, sources, k, obs.bc);
    Eigen::VectorXd scale(A.cols());
    for (Eigen::Index q = 0; q < A.cols(); ++q) {
        scale(q) = 1.0 / A.col(q).norm();
        A.col(q) *= scale(q);
    }
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(A);
    const auto rank = qr.rank();
    const auto& R = qr.matrixQR();
    const double condition =
        rank > 0 ? std::abs(R(0, 0)) / std::abs(R(rank - 1, rank - 1)) : std::numeric_limits<double>::infinity();
    const Eigen::MatrixXcd check_matrix = kernels::mfs_matrix(checks, sources, k, obs.bc);

    std::vector<ScatterSolution> out;
    out.reserve(angles.size());
    for (const double angle : angles) {
        const IncidentPlaneWave w(k, angle);
        Eigen::VectorXcd rhs(A.rows());
        for (Eigen::Index p = 0; p < A.rows(); ++p) {
            rhs(p) = -incident_trace(w, obs.bc, nodes.points[p], nodes.normals[p]);
        }
        const Eigen::VectorXcd x = qr.solve(rhs);
        std::vector<cplx> coeffs(static_cast<std::size_t>(x.size()));
        for (Eigen::Index q = 0; q < x.size(); ++q) coeffs[q] = x(q) * scale(q);

        const double residual = residual_on(check_matrix, checks, w, obs.bc, coeffs);
        if (!(residual <= cfg.residual_cap)) {
            throw ResidualTooLarge("boundary residual " + format_double(residual) + " exceeds cap " +
                                       format_double(cfg.residual_cap) + " (k=" + format_double(k) +
                                       ", d_angle=" + format_double(angle) + ")",
                                   residual);
        }
        out.push_back(ScatterSolution(w, obs, cfg, sources, std::move(coeffs), residual, condition));
    }
    return out;
}

double boundary_residual(const ScatterSolution& s, int check_points) {
    const int count = check_points > 0 ? check_points : s.config().check_points();
    const auto nodes = check_nodes(s.obstacle().shape, count);
    const auto M = kernels::mfs_matrix(nodes, s.sources(), s.wave().k, s.obstacle().bc);
    return residual_on(M, nodes, s.wave(), s.obstacle().bc, s.coefficients());
}

cplx near_field(const ScatterSolution& s, const Point& x) {
    // Boundary points sit up to ~1e-5 off the classification polyline.
    if (locate(s.obstacle().shape, x, 1e-4) == PointLocation::inside) {
        throw DomainError("near field requested inside the obstacle");
    }
    const Point target[] = {x};
    return kernels::point_source_sum(s.coefficients(), s.sources(), s.wave().k, target, kernels::Exec::serial)
        .front();
}

cplx total_field(const ScatterSolution& s, const Point& x) {
    return incident_field(s.wave(), x) + near_field(s, x);
}

cplx far_field_constant(double k) {
    return std::exp(kI * (std::numbers::pi / 4.0)) / std::sqrt(8.0 * std::numbers::pi * k);
}

FarFieldPattern far_field(const ScatterSolution& s, const DirectionGrid& grid) {
    std::vector<Point> dirs(static_cast<std::size_t>(grid.size()));
    for (int m = 0; m < grid.size(); ++m) dirs[m] = grid.direction(m);
    auto samples = kernels::plane_wave_sum(s.coefficients(), s.sources(), s.wave().k, dirs);
    const cplx gamma = far_field_constant(s.wave().k);
    for (auto& v : samples) v *= gamma;
    return {s.wave().k, s.wave().angle, grid, std::move(samples)};
}

cplx far_field_at(const ScatterSolution& s, double obs_angle) {
    const Point dir[] = {direction(obs_angle)};
    return far_field_constant(s.wave().k) *
           kernels::plane_wave_sum(s.coefficients(), s.sources(), s.wave().k, dir, kernels::Exec::serial).front();
}

int disk_series_order(double ka) { return std::max(25, static_cast<int>(std::ceil(ka)) + 20); }

cplx disk_mode_ratio(int n, double ka, double k, const BoundaryCondition& bc) {
    const auto c = specfun::cylinder(n, ka);
    switch (bc.kind()) {
        case BcKind::dirichlet: return c.j / c.h1;
        case BcKind::neumann: return c.dj / c.dh1;
        case BcKind::impedance: {
            const cplx lambda = bc.lambda();
            return (k * c.dj + lambda * c.j) / (k * c.dh1 + lambda * c.h1);
        }
    }
    return {};
}

FarFieldPattern disk_far_field_series(double a, const BoundaryCondition& bc, const IncidentPlaneWave& w,
                                      const DirectionGrid& grid, const Point& center) {
    if (!(a > 0.0)) throw DomainError("disk radius must be positive");
    const double ka = w.k * a;
    if (ka > kMaxSizeParameter) throw DomainError("disk series requires ka <= 40");
    const int order = disk_series_order(ka);
    std::vector<cplx> scattered(static_cast<std::size_t>(order) + 1);
    for (int n = 0; n <= order; ++n) {
        // a_n = -i^n r_n, and the Hankel asymptotic contributes exp(-i n pi / 2).
        const cplx in = std::pow(kI, n);
        const cplx phase = std::exp(-kI * (n * std::numbers::pi / 2.0));
        scattered[n] = -in * disk_mode_ratio(n, ka, w.k, bc) * phase;
    }
    if (std::abs(scattered[order]) > 1e-15 * std::max(1.0, std::abs(scattered[0]))) {
        throw DomainError("disk series truncation at order " + std::to_string(order) + " is insufficient");
    }
    // H_n(kr) ~ sqrt(2 / (pi k r)) exp(i(kr - n pi/2 - pi/4)); r_{-n} = r_n.
    const cplx lead = std::sqrt(2.0 / (std::numbers::pi * w.k)) * std::exp(-kI * (std::numbers::pi / 4.0));
    std::vector<cplx> samples(static_cast<std::size_t>(grid.size()));
    for (int m = 0; m < grid.size(); ++m) {
        const double psi = grid.angle(m) - w.angle;
        cplx acc = scattered[0];
        for (int n = 1; n <= order; ++n) acc += 2.0 * std::cos(n * psi) * scattered[n];
        samples[m] = lead * acc;
    }
    FarFieldPattern p(w.k, w.angle, grid, std::move(samples));
    return (center == Point{}) ? p : translate_pattern(p, center);
}

}  // namespace scatlab
