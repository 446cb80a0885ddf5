#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "scatlab/errors.hpp"
#include "scatlab/farfield.hpp"

using namespace scatlab;

namespace {

constexpr double kPi = std::numbers::pi;

// Far field of a fixed cloud of point scatterers: sum_q c_q exp(i k d.y_q) exp(-i k xhat.y_q).
// Rotating the cloud by theta is the exact counterpart of rotate_predict.
struct Cloud {
    std::vector<Point> y{{0.3, -0.2}, {-0.5, 0.4}, {0.1, 0.7}, {-0.2, -0.6}};
    std::vector<cplx> c{{1.0, 0.2}, {-0.4, 0.8}, {0.5, -0.5}, {0.3, 0.1}};

    cplx value(double k, double obs, double inc, double theta = 0.0) const {
        cplx s{};
        const RigidMotion rot{theta, {}};
        for (std::size_t q = 0; q < y.size(); ++q) {
            const Point yq = rot.rotate(y[q]);
            s += c[q] * std::exp(cplx(0.0, k * (dot(direction(inc), yq) - dot(direction(obs), yq))));
        }
        return s;
    }
    FarFieldPattern pattern(double k, double inc, const DirectionGrid& g, double theta = 0.0) const {
        std::vector<cplx> s(g.size());
        for (int m = 0; m < g.size(); ++m) s[m] = value(k, g.angle(m), inc, theta);
        return {k, inc, g, s};
    }
    FarFieldMatrix matrix(double k, const DirectionGrid& obs, const DirectionGrid& inc) const {
        FarFieldMatrix F(k, obs, inc);
        for (int l = 0; l < inc.size(); ++l) F.set_column(l, pattern(k, inc.angle(l), obs));
        return F;
    }
};

double rel_err(const FarFieldPattern& a, const FarFieldPattern& b) { return l2_distance(a, b) / l2_norm(a); }

}  // namespace

TEST_SUITE("farfield") {

TEST_CASE("grid validation and the L2 norm") {
    CHECK_THROWS_AS(DirectionGrid(15), ConfigError);
    CHECK_THROWS_AS(DirectionGrid(8), ConfigError);
    const DirectionGrid g(64);
    const FarFieldPattern one(1.0, 0.0, g, std::vector<cplx>(64, cplx(1.0, 0.0)));
    CHECK(l2_norm(one) == doctest::Approx(std::sqrt(2 * kPi)));
    const FarFieldPattern other(2.0, 0.0, g, std::vector<cplx>(64));
    CHECK_THROWS_AS(l2_distance(one, other), MetadataMismatch);
}

TEST_CASE("translation matches the moved point cloud exactly") {
    const Cloud cloud;
    const DirectionGrid g(128);
    const double k = 2.3, d = 0.7;
    const Point z{0.4, -0.9};
    Cloud moved = cloud;
    for (auto& y : moved.y) y += z;
    const auto pred = translate_pattern(cloud.pattern(k, d, g), z);
    CHECK(rel_err(moved.pattern(k, d, g), pred) < 1e-13);
    // Composition and inverse.
    const auto twice = translate_pattern(translate_pattern(cloud.pattern(k, d, g), z), -z);
    CHECK(rel_err(cloud.pattern(k, d, g), twice) < 1e-14);
    CHECK(l2_norm(pred) == doctest::Approx(l2_norm(cloud.pattern(k, d, g))).epsilon(1e-13));
}

TEST_CASE("trigonometric interpolation is exact for band-limited data") {
    const int n = 32;
    std::vector<cplx> s(n);
    auto f = [](double t) { return cplx(std::cos(3 * t), 0.5 * std::sin(7 * t)) + cplx(0.2, 0.0) * std::exp(cplx(0, -11 * t)); };
    for (int m = 0; m < n; ++m) s[m] = f(2 * kPi * m / n);
    for (double t : {0.01, 1.3, 2.9, 5.5}) CHECK(std::abs(trig_interpolate(s, t) - f(t)) < 1e-13);
    CHECK(tail_energy_fraction(s) < 1e-28);
    std::vector<cplx> alt(n);
    for (int m = 0; m < n; ++m) alt[m] = (m % 2 == 0) ? 1.0 : -1.0;
    CHECK(tail_energy_fraction(alt) > 0.9);
}

TEST_CASE("rotation prediction matches the rotated point cloud") {
    const Cloud cloud;
    const DirectionGrid g(64);
    const double k = 2.0;
    const auto F = cloud.matrix(k, g, g);
    const SpectralFarField spec(F);
    CHECK(spec.tail_fraction() < 1e-10);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ang(0.0, 2 * kPi);
    for (int i = 0; i < 10; ++i) {
        const double theta = ang(rng), d = ang(rng);
        CHECK(rel_err(cloud.pattern(k, d, g, theta), spec.rotate_predict(theta, d)) < 1e-12);
    }
    CHECK(std::abs(spec.value(0.4, 1.1) - cloud.value(k, 0.4, 1.1)) < 1e-12);
    // Zero rotation on a grid direction reproduces the column.
    CHECK(rel_err(F.column(5), spec.rotate_predict(0.0, g.angle(5))) < 1e-13);
}

TEST_CASE("under-resolved matrices are rejected") {
    Cloud far;
    for (auto& y : far.y) y = 6.0 * y;
    const DirectionGrid g(16);
    CHECK_THROWS_AS(SpectralFarField(far.matrix(4.0, g, g)), InterpolationDegeneracy);
}

TEST_CASE("noise is seeded and has the requested relative size") {
    const Cloud cloud;
    const auto p = cloud.pattern(2.0, 0.1, DirectionGrid(512));
    const auto a = add_noise(p, 0.01, 42);
    const auto b = add_noise(p, 0.01, 42);
    CHECK(a.samples == b.samples);
    CHECK(add_noise(p, 0.01, 43).samples != a.samples);
    CHECK(rel_err(p, a) == doctest::Approx(0.01).epsilon(0.15));
    CHECK(add_noise(p, 0.0, 1).samples == p.samples);

    // Per-sample deviation level * ||p|| / sqrt(M) with the Euclidean sample
    // norm, so E ||noise||_L2 is about level * rms(p) * sqrt(2 pi).
    double rms = 0.0;
    for (const auto& v : p.samples) rms += std::norm(v);
    rms = std::sqrt(rms / p.samples.size());
    double mean = 0.0;
    for (std::uint64_t s = 0; s < 200; ++s) mean += l2_distance(add_noise(p, 0.05, s), p) / 200.0;
    CHECK(mean == doctest::Approx(0.05 * rms * std::sqrt(2 * kPi)).epsilon(0.1));
}

TEST_CASE("pattern CSV round trip is exact and byte-stable") {
    const Cloud cloud;
    const auto p = cloud.pattern(1.7, 0.3, DirectionGrid(32));
    std::stringstream first;
    write_pattern_csv(first, p);
    const auto back = read_pattern_csv(first);
    CHECK(back.samples == p.samples);
    CHECK(back.k == p.k);
    CHECK(back.d_angle == p.d_angle);
    std::stringstream second;
    write_pattern_csv(second, back);
    CHECK(first.str() == second.str());
}

TEST_CASE("matrix CSV round trip is exact and byte-stable") {
    const Cloud cloud;
    const auto F = cloud.matrix(1.1, DirectionGrid(16), DirectionGrid(18));
    std::stringstream first;
    write_matrix_csv(first, F);
    const auto back = read_matrix_csv(first);
    CHECK(back == F);
    std::stringstream second;
    write_matrix_csv(second, back);
    CHECK(first.str() == second.str());
}

TEST_CASE("malformed CSV is reported") {
    std::stringstream bad("# k=1\n# d_angle=0\n# M=16\n0,1,x\n");
    CHECK_THROWS_AS(read_pattern_csv(bad), FormatError);
    std::stringstream short_file("# k=1\n# d_angle=0\n# M=16\n0,1,0\n");
    CHECK_THROWS_AS(read_pattern_csv(short_file), FormatError);
}

}  // TEST_SUITE
