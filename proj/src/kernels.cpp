#include "scatlab/kernels.hpp"

#include <numbers>

#include "scatlab/specfun.hpp"

namespace scatlab::kernels {

namespace {

constexpr cplx kQuarterI{0.0, 0.25};

// One matrix entry: B applied to Phi(., y) at boundary node (x, nu).
cplx system_entry(const Point& x, const Point& nu, const Point& y, double k,
                  const BoundaryCondition& bc) {
    const Point diff = x - y;
    const double r = norm(diff);
    const auto h = specfun::hankel01(k * r);
    const cplx value = kQuarterI * h.h0;
    if (bc.kind() == BcKind::dirichlet) return value;
    // d/dnu_x H_0(k|x-y|) = -k H_1(k|x-y|) (x-y).nu / |x-y|
    const cplx dn = -kQuarterI * k * h.h1 * (dot(diff, nu) / r);
    return bc.apply(value, dn);
}

cplx point_source_entry(std::span<const cplx> coeffs, std::span<const Point> sources, double k,
                        const Point& x) {
    cplx acc{};
    for (std::size_t q = 0; q < sources.size(); ++q) {
        acc += coeffs[q] * specfun::hankel01(k * distance(x, sources[q])).h0;
    }
    return kQuarterI * acc;
}

cplx plane_wave_entry(std::span<const cplx> coeffs, std::span<const Point> sources, double k,
                      const Point& xhat) {
    cplx acc{};
    for (std::size_t q = 0; q < sources.size(); ++q) {
        const double phase = -k * dot(xhat, sources[q]);
        acc += coeffs[q] * cplx(std::cos(phase), std::sin(phase));
    }
    return acc;
}

cplx dft_entry(std::span<const cplx> in, const std::vector<cplx>& twiddle, std::size_t j) {
    const std::size_t n = in.size();
    cplx acc{};
    for (std::size_t m = 0; m < n; ++m) acc += in[m] * twiddle[(j * m) % n];
    return acc;
}

}  // namespace

Eigen::MatrixXcd mfs_matrix(const BoundaryNodes& nodes, std::span<const Point> sources, double k,
                            const BoundaryCondition& bc, Exec exec) {
    const auto rows = static_cast<Eigen::Index>(nodes.points.size());
    const auto cols = static_cast<Eigen::Index>(sources.size());
    Eigen::MatrixXcd A(rows, cols);
    if (exec == Exec::serial) {
        for (Eigen::Index q = 0; q < cols; ++q)
            for (Eigen::Index p = 0; p < rows; ++p)
                A(p, q) = system_entry(nodes.points[p], nodes.normals[p], sources[q], k, bc);
        return A;
    }
#pragma omp parallel for schedule(static)
    for (Eigen::Index q = 0; q < cols; ++q)
        for (Eigen::Index p = 0; p < rows; ++p)
            A(p, q) = system_entry(nodes.points[p], nodes.normals[p], sources[q], k, bc);
    return A;
}

std::vector<cplx> point_source_sum(std::span<const cplx> coeffs, std::span<const Point> sources,
                                   double k, std::span<const Point> targets, Exec exec) {
    std::vector<cplx> out(targets.size());
    const auto n = static_cast<long long>(targets.size());
    if (exec == Exec::serial) {
        for (long long p = 0; p < n; ++p) out[p] = point_source_entry(coeffs, sources, k, targets[p]);
        return out;
    }
#pragma omp parallel for schedule(static)
    for (long long p = 0; p < n; ++p) out[p] = point_source_entry(coeffs, sources, k, targets[p]);
    return out;
}

std::vector<cplx> plane_wave_sum(std::span<const cplx> coeffs, std::span<const Point> sources,
                                 double k, std::span<const Point> directions, Exec exec) {
    std::vector<cplx> out(directions.size());
    const auto n = static_cast<long long>(directions.size());
    if (exec == Exec::serial) {
        for (long long m = 0; m < n; ++m) out[m] = plane_wave_entry(coeffs, sources, k, directions[m]);
        return out;
    }
#pragma omp parallel for schedule(static)
    for (long long m = 0; m < n; ++m) out[m] = plane_wave_entry(coeffs, sources, k, directions[m]);
    return out;
}

std::vector<cplx> dft(std::span<const cplx> in, int sign, Exec exec) {
    const std::size_t n = in.size();
    std::vector<cplx> twiddle(n);
    for (std::size_t m = 0; m < n; ++m) {
        const double a = sign * 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(n);
        twiddle[m] = {std::cos(a), std::sin(a)};
    }
    std::vector<cplx> out(n);
    const auto count = static_cast<long long>(n);
    if (exec == Exec::serial) {
        for (long long j = 0; j < count; ++j) out[j] = dft_entry(in, twiddle, static_cast<std::size_t>(j));
        return out;
    }
#pragma omp parallel for schedule(static)
    for (long long j = 0; j < count; ++j) out[j] = dft_entry(in, twiddle, static_cast<std::size_t>(j));
    return out;
}

}  // namespace scatlab::kernels
