#pragma once

// Data-parallel inner loops of the forward solver and the spectral transforms.
// Each kernel has a serial reference path and an OpenMP path; both perform the
// same floating-point operations per output element, so they agree bitwise.

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "scatlab/geometry.hpp"
#include "scatlab/obstacle.hpp"

namespace scatlab::kernels {

using cplx = std::complex<double>;

enum class Exec { serial, parallel };

/// Collocation or check points on a boundary with their exterior normals.
struct BoundaryNodes {
    std::vector<Point> points;
    std::vector<Point> normals;
};

/// Rows B(Phi(., y_q))(x_p) of the point-source system, where
/// Phi(x, y) = (i/4) H_0^{(1)}(k |x - y|).
Eigen::MatrixXcd mfs_matrix(const BoundaryNodes& nodes, std::span<const Point> sources, double k,
                            const BoundaryCondition& bc, Exec exec = Exec::parallel);

/// out_p = sum_q c_q Phi(x_p, y_q).
std::vector<cplx> point_source_sum(std::span<const cplx> coeffs, std::span<const Point> sources,
                                   double k, std::span<const Point> targets,
                                   Exec exec = Exec::parallel);

/// out_m = sum_q c_q exp(-i k xhat_m . y_q) for unit vectors xhat_m.
std::vector<cplx> plane_wave_sum(std::span<const cplx> coeffs, std::span<const Point> sources,
                                 double k, std::span<const Point> directions,
                                 Exec exec = Exec::parallel);

/// Unnormalized DFT out_j = sum_m in_m exp(sign * 2 pi i j m / n), sign = +-1.
std::vector<cplx> dft(std::span<const cplx> in, int sign, Exec exec = Exec::parallel);

}  // namespace scatlab::kernels
