#pragma once

// Far-field pattern containers, the L2 metric on the unit circle, the
// translation and rotation transforms of far-field data, and their CSV files.

#include <complex>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "scatlab/geometry.hpp"

namespace scatlab {

using cplx = std::complex<double>;

/// Uniform angles 2 pi m / M, m = 0..M-1.  M must be even and at least 16.
class DirectionGrid {
  public:
    explicit DirectionGrid(int size = 128);

    int size() const { return size_; }
    double angle(int m) const;
    Point direction(int m) const { return scatlab::direction(angle(m)); }

    friend bool operator==(const DirectionGrid&, const DirectionGrid&) = default;

  private:
    int size_;
};

/// Samples of u_inf on a direction grid for one incident plane wave.
struct FarFieldPattern {
    double k = 1.0;
    double d_angle = 0.0;
    DirectionGrid grid{};
    std::vector<cplx> samples;

    FarFieldPattern() = default;
    FarFieldPattern(double k, double d_angle, DirectionGrid grid, std::vector<cplx> samples);
};

/// Full-aperture data u_inf(x_m, d_l) at fixed k; column l holds the pattern
/// for incident angle 2 pi l / L.  Stored column-major.
class FarFieldMatrix {
  public:
    FarFieldMatrix(double k, DirectionGrid obs, DirectionGrid inc);

    double k() const { return k_; }
    const DirectionGrid& obs_grid() const { return obs_; }
    const DirectionGrid& inc_grid() const { return inc_; }

    cplx& at(int m, int l) { return data_[index(m, l)]; }
    const cplx& at(int m, int l) const { return data_[index(m, l)]; }

    FarFieldPattern column(int l) const;
    void set_column(int l, const FarFieldPattern& p);

    std::span<const cplx> data() const { return data_; }

    friend bool operator==(const FarFieldMatrix&, const FarFieldMatrix&) = default;

  private:
    std::size_t index(int m, int l) const {
        return static_cast<std::size_t>(l) * static_cast<std::size_t>(obs_.size()) + static_cast<std::size_t>(m);
    }

    double k_;
    DirectionGrid obs_;
    DirectionGrid inc_;
    std::vector<cplx> data_;
};

/// Throws MetadataMismatch unless k, incident direction and grid agree.
void require_compatible(const FarFieldPattern& p, const FarFieldPattern& q);

/// L2(S^1) norm by the trapezoid rule: sqrt((2 pi / M) sum |p_m|^2).
double l2_norm(const FarFieldPattern& p);
double l2_distance(const FarFieldPattern& p, const FarFieldPattern& q);

/// Far field of the obstacle moved by z, given the far field of the unmoved
/// obstacle: samples multiplied by exp(-i k (x_m - d) . z).
FarFieldPattern translate_pattern(const FarFieldPattern& p, const Point& z);

/// Value at `angle` of the minimal-degree trigonometric interpolant through
/// samples on the uniform grid (even count; the Nyquist mode enters as a cosine).
cplx trig_interpolate(std::span<const cplx> samples, double angle);

/// Fraction of the spectral energy carried by the top 10% of Fourier modes.
double tail_energy_fraction(std::span<const cplx> samples);

inline constexpr double kTailEnergyLimit = 1e-10;

/// Two-dimensional trigonometric interpolant of a far-field matrix, used to
/// predict the pattern of a rotated obstacle for any incident direction.
class SpectralFarField {
  public:
    /// Throws InterpolationDegeneracy when the tail-energy check fails.
    explicit SpectralFarField(const FarFieldMatrix& F);

    double k() const { return k_; }
    const DirectionGrid& obs_grid() const { return obs_; }
    double tail_fraction() const { return tail_fraction_; }

    /// u_inf(x, U(theta) Omega, d) = u_inf(U^T x, Omega, U^T d) on the
    /// observation grid, for incident angle d_angle.
    FarFieldPattern rotate_predict(double theta, double d_angle) const;

    /// Interpolated u_inf at arbitrary observation and incident angles.
    cplx value(double obs_angle, double inc_angle) const;

  private:
    double k_;
    DirectionGrid obs_;
    int n_obs_;  // M + 1 coefficient rows, orders -M/2..M/2
    int n_inc_;  // L + 1 coefficient columns, orders -L/2..L/2
    std::vector<cplx> coeffs_;  // row-major (obs order outer)
    double tail_fraction_;
};

/// Convenience wrapper building a SpectralFarField for a single prediction.
FarFieldPattern rotate_predict(const FarFieldMatrix& F, double theta, double d_angle);

/// Adds independent circularly symmetric complex Gaussian noise with standard
/// deviation level * rms(p), where rms(p) = sqrt(mean |p_m|^2).  The relative
/// L2 perturbation is therefore about `level`.
FarFieldPattern add_noise(const FarFieldPattern& p, double level, std::uint64_t seed);

// CSV files.  Floats are written with 17 significant digits, so a write/read
// cycle reproduces every value exactly.
void write_pattern_csv(std::ostream& os, const FarFieldPattern& p);
FarFieldPattern read_pattern_csv(std::istream& is);
void write_pattern_csv(const std::filesystem::path& path, const FarFieldPattern& p);
FarFieldPattern read_pattern_csv(const std::filesystem::path& path);

void write_matrix_csv(std::ostream& os, const FarFieldMatrix& F);
FarFieldMatrix read_matrix_csv(std::istream& is);
void write_matrix_csv(const std::filesystem::path& path, const FarFieldMatrix& F);
FarFieldMatrix read_matrix_csv(const std::filesystem::path& path);

/// "%.17g" formatting shared by every text output.
std::string format_double(double v);

}  // namespace scatlab
