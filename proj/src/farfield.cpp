#include "scatlab/farfield.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "scatlab/errors.hpp"
#include "scatlab/kernels.hpp"
#include "scatlab/parallel.hpp"

namespace scatlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool same_k(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)); }

bool same_angle(double a, double b) {
    const double d = std::abs(wrap_angle(a) - wrap_angle(b));
    return std::min(d, kTwoPi - d) <= 1e-12;
}

// Coefficients c_j, j = -n/2..n/2, of the minimal-degree interpolant; the
// Nyquist coefficient is split evenly between orders +-n/2.
std::vector<cplx> centered_coefficients(std::span<const cplx> samples,
                                        kernels::Exec exec = kernels::Exec::parallel) {
    const int n = static_cast<int>(samples.size());
    if (n < 2 || n % 2 != 0) throw DomainError("trigonometric interpolation needs an even sample count");
    const auto raw = kernels::dft(samples, -1, exec);
    const int half = n / 2;
    std::vector<cplx> c(static_cast<std::size_t>(n) + 1);
    for (int j = -half + 1; j < half; ++j) c[j + half] = raw[(j + n) % n] / static_cast<double>(n);
    const cplx nyquist = raw[half] / static_cast<double>(n);
    c[0] = 0.5 * nyquist;
    c[n] = 0.5 * nyquist;
    return c;
}

// Unit phasors exp(i j angle) for j = -half..half.
std::vector<cplx> phasors(int half, double angle) {
    std::vector<cplx> out(2 * static_cast<std::size_t>(half) + 1);
    for (int j = -half; j <= half; ++j) out[j + half] = {std::cos(j * angle), std::sin(j * angle)};
    return out;
}

int tail_cutoff(int n) { return n / 2 - n / 20; }

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text, int line) {
    const std::string t = trim(text);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size()) {
        throw FormatError("line " + std::to_string(line) + ": cannot parse number '" + t + "'");
    }
    return v;
}

std::vector<double> parse_row(const std::string& line, int line_no, std::size_t expected) {
    std::vector<double> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(parse_double(cell, line_no));
    if (out.size() != expected) {
        throw FormatError("line " + std::to_string(line_no) + ": expected " + std::to_string(expected) +
                          " columns");
    }
    return out;
}

struct CsvContent {
    std::vector<std::pair<std::string, std::string>> header;
    std::vector<std::vector<double>> rows;
};

CsvContent read_csv(std::istream& is, std::size_t columns) {
    CsvContent out;
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t[0] == '#') {
            const auto eq = t.find('=');
            if (eq == std::string::npos) throw FormatError("line " + std::to_string(line_no) + ": bad header");
            out.header.emplace_back(trim(t.substr(1, eq - 1)), trim(t.substr(eq + 1)));
            continue;
        }
        out.rows.push_back(parse_row(t, line_no, columns));
    }
    return out;
}

const std::string& header_value(const CsvContent& c, const std::string& key) {
    for (const auto& [k, v] : c.header)
        if (k == key) return v;
    throw FormatError("missing header '# " + key + "='");
}

int header_int(const CsvContent& c, const std::string& key) {
    const std::string& v = header_value(c, key);
    char* end = nullptr;
    const long n = std::strtol(v.c_str(), &end, 10);
    if (v.empty() || end != v.c_str() + v.size()) throw FormatError("header '" + key + "' is not an integer");
    return static_cast<int>(n);
}

void check_angle(double got, double expected, std::size_t row) {
    if (std::abs(got - expected) > 1e-12) {
        throw FormatError("row " + std::to_string(row + 1) + ": angle " + format_double(got) +
                          " is not on the uniform grid");
    }
}

template <class Writer>
void write_file(const std::filesystem::path& path, Writer&& w) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw FormatError("cannot open " + path.string() + " for writing");
    w(os);
    if (!os) throw FormatError("write to " + path.string() + " failed");
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw FormatError("cannot open " + path.string());
    return is;
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

DirectionGrid::DirectionGrid(int size) : size_(size) {
    if (size < 16 || size % 2 != 0) {
        throw ConfigError("direction grid size must be even and at least 16, got " + std::to_string(size));
    }
}

double DirectionGrid::angle(int m) const { return kTwoPi * m / size_; }

FarFieldPattern::FarFieldPattern(double k_, double d_angle_, DirectionGrid grid_, std::vector<cplx> samples_)
    : k(k_), d_angle(d_angle_), grid(grid_), samples(std::move(samples_)) {
    if (!(k > 0.0)) throw ConfigError("far-field wavenumber must be positive");
    if (static_cast<int>(samples.size()) != grid.size()) {
        throw ConfigError("far-field sample count does not match its grid");
    }
}

FarFieldMatrix::FarFieldMatrix(double k, DirectionGrid obs, DirectionGrid inc)
    : k_(k), obs_(obs), inc_(inc),
      data_(static_cast<std::size_t>(obs.size()) * static_cast<std::size_t>(inc.size())) {
    if (!(k > 0.0)) throw ConfigError("far-field wavenumber must be positive");
}

FarFieldPattern FarFieldMatrix::column(int l) const {
    const auto first = data_.begin() + static_cast<std::ptrdiff_t>(index(0, l));
    return {k_, inc_.angle(l), obs_, std::vector<cplx>(first, first + obs_.size())};
}

void FarFieldMatrix::set_column(int l, const FarFieldPattern& p) {
    if (!(p.grid == obs_) || !same_k(p.k, k_) || !same_angle(p.d_angle, inc_.angle(l))) {
        throw MetadataMismatch("pattern does not belong in column " + std::to_string(l));
    }
    std::copy(p.samples.begin(), p.samples.end(), data_.begin() + static_cast<std::ptrdiff_t>(index(0, l)));
}

void require_compatible(const FarFieldPattern& p, const FarFieldPattern& q) {
    if (!(p.grid == q.grid)) throw MetadataMismatch("far-field patterns use different grids");
    if (!same_k(p.k, q.k)) throw MetadataMismatch("far-field patterns use different wavenumbers");
    if (!same_angle(p.d_angle, q.d_angle)) {
        throw MetadataMismatch("far-field patterns use different incident directions");
    }
}

double l2_norm(const FarFieldPattern& p) {
    double s = 0.0;
    for (const auto& v : p.samples) s += std::norm(v);
    return std::sqrt(kTwoPi / p.grid.size() * s);
}

double l2_distance(const FarFieldPattern& p, const FarFieldPattern& q) {
    require_compatible(p, q);
    double s = 0.0;
    for (std::size_t m = 0; m < p.samples.size(); ++m) s += std::norm(p.samples[m] - q.samples[m]);
    return std::sqrt(kTwoPi / p.grid.size() * s);
}

FarFieldPattern translate_pattern(const FarFieldPattern& p, const Point& z) {
    FarFieldPattern out = p;
    const Point d = direction(p.d_angle);
    for (int m = 0; m < p.grid.size(); ++m) {
        const double phase = -p.k * dot(p.grid.direction(m) - d, z);
        out.samples[m] *= cplx(std::cos(phase), std::sin(phase));
    }
    return out;
}

cplx trig_interpolate(std::span<const cplx> samples, double angle) {
    const auto c = centered_coefficients(samples);
    const int half = static_cast<int>(samples.size()) / 2;
    const auto e = phasors(half, angle);
    cplx acc{};
    for (std::size_t j = 0; j < c.size(); ++j) acc += c[j] * e[j];
    return acc;
}

double tail_energy_fraction(std::span<const cplx> samples) {
    const auto c = centered_coefficients(samples);
    const int half = static_cast<int>(samples.size()) / 2;
    const int cut = tail_cutoff(static_cast<int>(samples.size()));
    double total = 0.0;
    double tail = 0.0;
    for (int j = -half; j <= half; ++j) {
        const double e = std::norm(c[j + half]);
        total += e;
        if (std::abs(j) >= cut) tail += e;
    }
    return total > 0.0 ? tail / total : 0.0;
}

SpectralFarField::SpectralFarField(const FarFieldMatrix& F)
    : k_(F.k()), obs_(F.obs_grid()), n_obs_(F.obs_grid().size() + 1), n_inc_(F.inc_grid().size() + 1) {
    const int M = F.obs_grid().size();
    const int L = F.inc_grid().size();
    // Incident direction first: rows of F become rows of partial coefficients.
    std::vector<cplx> partial(static_cast<std::size_t>(M) * n_inc_);
    parallel_for(static_cast<std::size_t>(M), [&](std::size_t m) {
        std::vector<cplx> row(L);
        for (int l = 0; l < L; ++l) row[l] = F.at(static_cast<int>(m), l);
        const auto c = centered_coefficients(row, kernels::Exec::serial);
        std::copy(c.begin(), c.end(), partial.begin() + static_cast<std::ptrdiff_t>(m * n_inc_));
    });
    coeffs_.assign(static_cast<std::size_t>(n_obs_) * n_inc_, cplx{});
    parallel_for(static_cast<std::size_t>(n_inc_), [&](std::size_t l) {
        std::vector<cplx> col(M);
        for (int m = 0; m < M; ++m) col[m] = partial[static_cast<std::size_t>(m) * n_inc_ + l];
        const auto c = centered_coefficients(col, kernels::Exec::serial);
        for (int j = 0; j < n_obs_; ++j) coeffs_[static_cast<std::size_t>(j) * n_inc_ + l] = c[j];
    });

    const int half_m = M / 2;
    const int half_l = L / 2;
    const int cut_m = tail_cutoff(M);
    const int cut_l = tail_cutoff(L);
    double total = 0.0;
    double tail = 0.0;
    for (int j = 0; j < n_obs_; ++j) {
        for (int l = 0; l < n_inc_; ++l) {
            const double e = std::norm(coeffs_[static_cast<std::size_t>(j) * n_inc_ + l]);
            total += e;
            if (std::abs(j - half_m) >= cut_m || std::abs(l - half_l) >= cut_l) tail += e;
        }
    }
    tail_fraction_ = total > 0.0 ? tail / total : 0.0;
    if (tail_fraction_ > kTailEnergyLimit) {
        throw InterpolationDegeneracy("far-field matrix is under-resolved: top Fourier modes carry " +
                                          format_double(tail_fraction_) + " of the energy",
                                      tail_fraction_);
    }
}

FarFieldPattern SpectralFarField::rotate_predict(double theta, double d_angle) const {
    const int M = obs_.size();
    const int half_m = M / 2;
    const int half_l = (n_inc_ - 1) / 2;
    const auto inc_phase = phasors(half_l, d_angle - theta);
    const auto obs_shift = phasors(half_m, -theta);
    // Fold orders j and j - M onto the grid: exp(i j x_m) is M-periodic in j.
    std::vector<cplx> folded(static_cast<std::size_t>(M));
    for (int j = 0; j < n_obs_; ++j) {
        cplx g{};
        const cplx* row = coeffs_.data() + static_cast<std::size_t>(j) * n_inc_;
        for (int l = 0; l < n_inc_; ++l) g += row[l] * inc_phase[l];
        folded[static_cast<std::size_t>((j - half_m + M) % M)] += g * obs_shift[j];
    }
    auto samples = kernels::dft(folded, +1, kernels::Exec::serial);
    return {k_, d_angle, obs_, std::move(samples)};
}

cplx SpectralFarField::value(double obs_angle, double inc_angle) const {
    const auto eo = phasors((n_obs_ - 1) / 2, obs_angle);
    const auto ei = phasors((n_inc_ - 1) / 2, inc_angle);
    cplx acc{};
    for (int j = 0; j < n_obs_; ++j) {
        cplx g{};
        const cplx* row = coeffs_.data() + static_cast<std::size_t>(j) * n_inc_;
        for (int l = 0; l < n_inc_; ++l) g += row[l] * ei[l];
        acc += g * eo[j];
    }
    return acc;
}

FarFieldPattern rotate_predict(const FarFieldMatrix& F, double theta, double d_angle) {
    return SpectralFarField(F).rotate_predict(theta, d_angle);
}

FarFieldPattern add_noise(const FarFieldPattern& p, double level, std::uint64_t seed) {
    if (!(level >= 0.0)) throw DomainError("noise level must be non-negative");
    FarFieldPattern out = p;
    if (level == 0.0) return out;
    double mean_sq = 0.0;
    for (const auto& v : p.samples) mean_sq += std::norm(v);
    mean_sq /= static_cast<double>(p.samples.size());
    const double sigma = level * std::sqrt(mean_sq);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, sigma / std::sqrt(2.0));
    for (auto& v : out.samples) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        v += cplx(re, im);
    }
    return out;
}

void write_pattern_csv(std::ostream& os, const FarFieldPattern& p) {
    os << "# k=" << format_double(p.k) << '\n';
    os << "# d_angle=" << format_double(p.d_angle) << '\n';
    os << "# M=" << p.grid.size() << '\n';
    for (int m = 0; m < p.grid.size(); ++m) {
        os << format_double(p.grid.angle(m)) << ',' << format_double(p.samples[m].real()) << ','
           << format_double(p.samples[m].imag()) << '\n';
    }
}

FarFieldPattern read_pattern_csv(std::istream& is) {
    const auto csv = read_csv(is, 3);
    const double k = parse_double(header_value(csv, "k"), 0);
    const double d = parse_double(header_value(csv, "d_angle"), 0);
    const DirectionGrid grid(header_int(csv, "M"));
    if (static_cast<int>(csv.rows.size()) != grid.size()) {
        throw FormatError("pattern file has " + std::to_string(csv.rows.size()) + " rows, header says " +
                          std::to_string(grid.size()));
    }
    std::vector<cplx> samples(csv.rows.size());
    for (std::size_t m = 0; m < csv.rows.size(); ++m) {
        check_angle(csv.rows[m][0], grid.angle(static_cast<int>(m)), m);
        samples[m] = {csv.rows[m][1], csv.rows[m][2]};
    }
    return {k, d, grid, std::move(samples)};
}

void write_pattern_csv(const std::filesystem::path& path, const FarFieldPattern& p) {
    write_file(path, [&](std::ostream& os) { write_pattern_csv(os, p); });
}

FarFieldPattern read_pattern_csv(const std::filesystem::path& path) {
    auto is = open_input(path);
    return read_pattern_csv(is);
}

void write_matrix_csv(std::ostream& os, const FarFieldMatrix& F) {
    os << "# k=" << format_double(F.k()) << '\n';
    os << "# M=" << F.obs_grid().size() << '\n';
    os << "# L=" << F.inc_grid().size() << '\n';
    for (int m = 0; m < F.obs_grid().size(); ++m) {
        for (int l = 0; l < F.inc_grid().size(); ++l) {
            const cplx v = F.at(m, l);
            os << format_double(F.obs_grid().angle(m)) << ',' << format_double(F.inc_grid().angle(l)) << ','
               << format_double(v.real()) << ',' << format_double(v.imag()) << '\n';
        }
    }
}

FarFieldMatrix read_matrix_csv(std::istream& is) {
    const auto csv = read_csv(is, 4);
    const double k = parse_double(header_value(csv, "k"), 0);
    const DirectionGrid obs(header_int(csv, "M"));
    const DirectionGrid inc(header_int(csv, "L"));
    const std::size_t expected = static_cast<std::size_t>(obs.size()) * static_cast<std::size_t>(inc.size());
    if (csv.rows.size() != expected) throw FormatError("matrix file row count does not match M*L");
    FarFieldMatrix F(k, obs, inc);
    std::size_t r = 0;
    for (int m = 0; m < obs.size(); ++m) {
        for (int l = 0; l < inc.size(); ++l, ++r) {
            check_angle(csv.rows[r][0], obs.angle(m), r);
            check_angle(csv.rows[r][1], inc.angle(l), r);
            F.at(m, l) = {csv.rows[r][2], csv.rows[r][3]};
        }
    }
    return F;
}

void write_matrix_csv(const std::filesystem::path& path, const FarFieldMatrix& F) {
    write_file(path, [&](std::ostream& os) { write_matrix_csv(os, F); });
}

FarFieldMatrix read_matrix_csv(const std::filesystem::path& path) {
    auto is = open_input(path);
    return read_matrix_csv(is);
}

}  // namespace scatlab
