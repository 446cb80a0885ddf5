#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "scatlab/errors.hpp"
#include "scatlab/scatter.hpp"

using namespace scatlab;

namespace {

constexpr double kPi = std::numbers::pi;

// Disk far field from the standard library's cylinder functions:
// u_inf(phi) = -sqrt(2 / (pi k)) e^{-i pi/4} sum_n r_n e^{i n (phi - d)}.
FarFieldPattern reference_disk(double a, const BoundaryCondition& bc, double k, double d, const DirectionGrid& g) {
    const int N = static_cast<int>(k * a) + 30;
    std::vector<cplx> r(N + 1);
    for (int n = 0; n <= N; ++n) {
        const double x = k * a;
        const double j = std::cyl_bessel_j(n, x), y = std::cyl_neumann(n, x);
        const double jm = n == 0 ? -std::cyl_bessel_j(1, x) : std::cyl_bessel_j(n - 1, x);
        const double ym = n == 0 ? -std::cyl_neumann(1, x) : std::cyl_neumann(n - 1, x);
        const double dj = jm - n / x * j, dy = ym - n / x * y;
        const cplx h(j, y), dh(dj, dy);
        switch (bc.kind()) {
            case BcKind::dirichlet: r[n] = j / h; break;
            case BcKind::neumann: r[n] = dj / dh; break;
            case BcKind::impedance: r[n] = (k * dj + bc.lambda() * j) / (k * dh + bc.lambda() * h); break;
        }
    }
    const cplx pre = -std::sqrt(2.0 / (kPi * k)) * std::exp(cplx(0.0, -kPi / 4));
    std::vector<cplx> s(g.size());
    for (int m = 0; m < g.size(); ++m) {
        cplx acc = r[0];
        for (int n = 1; n <= N; ++n) acc += 2.0 * r[n] * std::cos(n * (g.angle(m) - d));
        s[m] = pre * acc;
    }
    return {k, d, g, s};
}

double rel_err(const FarFieldPattern& a, const FarFieldPattern& b) { return l2_distance(a, b) / l2_norm(a); }

}  // namespace

TEST_SUITE("scatter") {

TEST_CASE("library disk series agrees with the reference series") {
    const DirectionGrid g(64);
    for (const auto& bc : {BoundaryCondition::dirichlet(), BoundaryCondition::neumann(),
                           BoundaryCondition::impedance({1.0, 1.0})}) {
        for (double k : {0.5, 3.0, 12.0}) {
            const auto ref = reference_disk(1.3, bc, k, 0.4, g);
            CHECK(rel_err(ref, disk_far_field_series(1.3, bc, {k, 0.4}, g)) < 1e-12);
        }
    }
}

TEST_CASE("MFS matches the disk for every boundary condition") {
    const DirectionGrid g(128);
    for (const auto& bc : {BoundaryCondition::dirichlet(), BoundaryCondition::neumann(),
                           BoundaryCondition::impedance({1.0, 1.0})}) {
        for (double k : {1.0, 2.0, 5.0}) {
            CAPTURE(bc.name());
            CAPTURE(k);
            const auto sol = solve(Obstacle(catalog::circle(1.0), {}, bc), {k, 0.3});
            CHECK(rel_err(reference_disk(1.0, bc, k, 0.3, g), far_field(sol, g)) < 1e-8);
            CHECK(sol.residual() < 1e-8);
        }
    }
}

TEST_CASE("off-center disk picks up the translation phase") {
    const DirectionGrid g(128);
    const Point c{0.5, -0.3};
    const auto sol = solve(Obstacle(catalog::circle(0.8), {0.0, c}, BoundaryCondition::neumann()), {2.5, 1.0});
    const auto ref = translate_pattern(reference_disk(0.8, BoundaryCondition::neumann(), 2.5, 1.0, g), c);
    CHECK(rel_err(ref, far_field(sol, g)) < 1e-8);
    CHECK(rel_err(ref, disk_far_field_series(0.8, BoundaryCondition::neumann(), {2.5, 1.0}, g, c)) < 1e-12);
}

TEST_CASE("residual certificate") {
    const Obstacle kite(catalog::kite(), {}, BoundaryCondition::dirichlet());
    const auto sol = solve(kite, {2.0, 0.0});
    CHECK(sol.residual() < 1e-9);
    // An independent, denser set of check points tells the same story.
    CHECK(boundary_residual(sol, 8 * sol.config().n_sources) < 10 * sol.residual() + 1e-12);
    // No scattered field: the defect is the incident wave, of modulus one.
    const auto zero = sol.with_coefficients(std::vector<cplx>(sol.coefficients().size()));
    CHECK(zero.residual() == doctest::Approx(1.0).epsilon(1e-12));
    MfsConfig tight;
    tight.n_sources = 16;
    tight.residual_cap = 1e-12;
    CHECK_THROWS_AS(solve(kite, {2.0, 0.0}, tight), ResidualTooLarge);
}

TEST_CASE("solve_many reproduces individual solves") {
    const Obstacle obs(catalog::kite(), {0.2, {0.1, 0.0}}, BoundaryCondition::impedance({0.5, 2.0}));
    const std::vector<double> angles{0.0, 1.0, 4.0};
    const auto many = solve_many(obs, 1.7, angles);
    const DirectionGrid g(64);
    for (std::size_t i = 0; i < angles.size(); ++i) {
        CHECK(rel_err(far_field(solve(obs, {1.7, angles[i]}), g), far_field(many[i], g)) < 1e-12);
    }
}

TEST_CASE("scattered field approaches the far field like 1/r") {
    const auto sol = solve(Obstacle(catalog::kite(), {}, BoundaryCondition::dirichlet()), {2.0, 0.5});
    const double phi = 1.2;
    const cplx uinf = far_field_at(sol, phi);
    auto remainder = [&](double R) {
        const cplx us = near_field(sol, R * direction(phi));
        return std::abs(std::sqrt(R) * std::exp(cplx(0.0, -2.0 * R)) * us - uinf);
    };
    const double slope = std::log(remainder(100.0) / remainder(10.0)) / std::log(10.0);
    CHECK(slope == doctest::Approx(-1.0).epsilon(0.15));
}

TEST_CASE("far-field reciprocity on the kite") {
    const Obstacle obs(catalog::kite(), {}, BoundaryCondition::neumann());
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ang(0.0, 2 * kPi);
    for (int i = 0; i < 5; ++i) {
        const double x = ang(rng), d = ang(rng);
        const auto s1 = solve(obs, {2.0, d});
        const auto s2 = solve(obs, {2.0, x + kPi});
        const double scale = l2_norm(far_field(s1, DirectionGrid(64)));
        CHECK(std::abs(far_field_at(s1, x) - far_field_at(s2, d + kPi)) / scale < 1e-6);
    }
}

TEST_CASE("large impedance approaches the sound-soft obstacle") {
    const DirectionGrid g(64);
    const auto soft = far_field(solve(Obstacle(catalog::ellipse(1.0, 0.6), {}, BoundaryCondition::dirichlet()), {2.0, 0.0}), g);
    double prev = 1e300;
    for (double lam : {1e2, 1e3, 1e4}) {
        const auto imp = far_field(
            solve(Obstacle(catalog::ellipse(1.0, 0.6), {}, BoundaryCondition::impedance({0.0, lam})), {2.0, 0.0}), g);
        const double e = rel_err(soft, imp);
        CHECK(e < prev);
        prev = e;
    }
    CHECK(prev < 1e-3);
}

TEST_CASE("disk mode ratios approach the sound-soft ratio as the impedance grows") {
    const auto imp = BoundaryCondition::impedance({0.0, 1e8});
    for (int n : {0, 1, 5, 12}) {
        const cplx soft = disk_mode_ratio(n, 2.0, 2.0, BoundaryCondition::dirichlet());
        CHECK(std::abs(disk_mode_ratio(n, 2.0, 2.0, imp) - soft) <= 1e-6 * std::abs(soft));
    }
}

TEST_CASE("total field vanishes on a sound-soft boundary") {
    const auto sol = solve(Obstacle(catalog::rounded_triangle(), {}, BoundaryCondition::dirichlet()), {3.0, 2.0});
    for (double t : {0.05, 1.0, 2.2, 5.0}) {
        CHECK(std::abs(total_field(sol, sol.obstacle().shape.point(t))) < 1e-8);
    }
}

TEST_CASE("centroid-scaled sources also solve the disk") {
    MfsConfig cfg;
    cfg.placement = SourcePlacement::centroid_scaling;
    cfg.n_sources = 64;
    const DirectionGrid g(64);
    const auto sol = solve(Obstacle(catalog::circle(1.0), {}, BoundaryCondition::dirichlet()), {2.0, 0.0}, cfg);
    CHECK(rel_err(reference_disk(1.0, BoundaryCondition::dirichlet(), 2.0, 0.0, g), far_field(sol, g)) < 1e-8);
    CHECK(parse_placement(placement_name(SourcePlacement::centroid_scaling)) == SourcePlacement::centroid_scaling);
    CHECK_THROWS_AS(parse_placement("nowhere"), ConfigError);
}

TEST_CASE("domain checks") {
    const Obstacle kite(catalog::kite(), {}, BoundaryCondition::dirichlet());
    CHECK_THROWS_AS(solve(kite, {20.0, 0.0}), DomainError);
    CHECK_THROWS_AS(IncidentPlaneWave(-1.0, 0.0), DomainError);
    CHECK_THROWS_AS(BoundaryCondition::impedance({1.0, 0.0}), ConfigError);
    const auto sol = solve(kite, {1.0, 0.0});
    CHECK_THROWS_AS(near_field(sol, {0.0, 0.0}), DomainError);
    MfsConfig bad;
    bad.tau = 2.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

}  // TEST_SUITE
