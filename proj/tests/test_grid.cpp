#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "solitonlab/functionals.hpp"

using namespace solitonlab;
using std::numbers::pi;

namespace {

ScalarField gaussian_field(const GridSpec& g, double amplitude = 1.0,
                           double kx = 0.0, double ky = 0.0) {
    ScalarField f(g);
    for (int j = 0; j < g.points_per_axis; ++j) {
        const double x = g.coord(j);
        for (int k = 0; k < g.points_per_axis; ++k) {
            const double y = g.coord(k);
            f.at(j, k) = amplitude * std::exp(-(x * x + y * y) / 2.0) *
                         std::polar(1.0, kx * x + ky * y);
        }
    }
    return f;
}

ScalarField enveloped_noise(const GridSpec& g, std::uint64_t seed) {
    ScalarField f = band_limited_noise(g, seed, g.points_per_axis / 8);
    for (int j = 0; j < g.points_per_axis; ++j) {
        const double x = g.coord(j);
        for (int k = 0; k < g.points_per_axis; ++k) {
            const double y = g.coord(k);
            const double s = g.box_half_length / 4.0;
            f.at(j, k) *= std::exp(-(x * x + y * y) / (2.0 * s * s));
        }
    }
    return f;
}

} // namespace

TEST_CASE("gaussian functionals match closed forms") {
    const GridSpec g = make_grid(12.0, 256);
    const ScalarField f = gaussian_field(g);
    const FunctionalReport r = compute_functionals(f, 2, 5.0);
    CHECK(r.mass == doctest::Approx(pi).epsilon(1e-9));
    CHECK(r.energy == doctest::Approx(pi - pi / 4.0 + pi / 9.0).epsilon(1e-9));
    CHECK(r.pohozaev == doctest::Approx(2.0 * pi - pi / 2.0 + 4.0 * pi / 9.0).epsilon(1e-9));
    CHECK(std::abs(r.momentum[0]) < 1e-8);
    CHECK(std::abs(r.momentum[1]) < 1e-8);
    CHECK(r.h1_sq == doctest::Approx(2.0 * pi).epsilon(1e-9));
}

TEST_CASE("zero field has zero functionals") {
    const GridSpec g = make_grid(8.0, 32);
    const FunctionalReport r = compute_functionals(ScalarField(g), 2, 5.0);
    CHECK(r.mass == 0.0);
    CHECK(r.energy == 0.0);
    CHECK(r.pohozaev == 0.0);
    CHECK(r.momentum[0] == 0.0);
    CHECK(r.momentum[1] == 0.0);
}

TEST_CASE("plane-wave carrier produces momentum k * mass") {
    const GridSpec g = make_grid(12.0, 256);
    const ScalarField f = gaussian_field(g, 1.0, 1.0, 0.0);
    const FunctionalReport r = compute_functionals(f, 2, 5.0);
    CHECK(r.momentum[0] == doctest::Approx(pi).epsilon(1e-8));
    CHECK(std::abs(r.momentum[1]) < 1e-8);
}

TEST_CASE("functional preconditions") {
    const GridSpec g = make_grid(8.0, 32);
    ScalarField f(g);
    f.at(1, 1) = std::nan("");
    CHECK_THROWS_AS(compute_functionals(f, 2, 5.0), InvalidField);
    CHECK_THROWS_AS(compute_functionals(ScalarField(g), 2, 3.0), InvalidExponent);
    CHECK_THROWS_AS(gn_ratio(ScalarField(g), 11.7, 2), DivisionByZeroField);
    const GridSpec g2 = make_grid(8.0, 64);
    CHECK_THROWS_AS(h1_distance(ScalarField(g), ScalarField(g2)), GridMismatch);
    CHECK_THROWS_AS(make_grid(8.0, 48), InvalidArgument);
}

TEST_CASE("spectral gradient energy is Parseval-consistent") {
    const GridSpec g = make_grid(10.0, 128);
    const ScalarField f = enveloped_noise(g, 7);
    const double direct = [&] {
        const auto gr = gradient(f);
        return integrate_grid(gr[0], [](const cplx& z) { return std::norm(z); }) +
               integrate_grid(gr[1], [](const cplx& z) { return std::norm(z); });
    }();
    const double spectral = grad_sq_integral(f);
    CHECK(direct == doctest::Approx(spectral).epsilon(1e-12));
}

TEST_CASE("functionals invariant under lattice translation") {
    const GridSpec g = make_grid(10.0, 64);
    const ScalarField f = enveloped_noise(g, 11);
    ScalarField shifted(g);
    const int sj = 13, sk = 40;
    const int n = g.points_per_axis;
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            shifted.at((j + sj) % n, (k + sk) % n) = f.at(j, k);
    const FunctionalReport a = compute_functionals(f, 2, 5.0);
    const FunctionalReport b = compute_functionals(shifted, 2, 5.0);
    CHECK(b.mass == doctest::Approx(a.mass).epsilon(1e-12));
    CHECK(b.energy == doctest::Approx(a.energy).epsilon(1e-12));
    CHECK(b.pohozaev == doctest::Approx(a.pohozaev).epsilon(1e-12));
}

TEST_CASE("global phase leaves mass, energy, I and |P| unchanged") {
    const GridSpec g = make_grid(10.0, 64);
    const ScalarField f = enveloped_noise(g, 3);
    const FunctionalReport a = compute_functionals(f, 2, 5.0);
    for (double theta : {0.7, 2.9}) {
        ScalarField rotated = f;
        for (cplx& z : rotated.v) z *= std::polar(1.0, theta);
        const FunctionalReport b = compute_functionals(rotated, 2, 5.0);
        CHECK(b.mass == doctest::Approx(a.mass).epsilon(1e-12));
        CHECK(b.energy == doctest::Approx(a.energy).epsilon(1e-12));
        CHECK(b.pohozaev == doctest::Approx(a.pohozaev).epsilon(1e-12));
        const double pa = std::hypot(a.momentum[0], a.momentum[1]);
        const double pb = std::hypot(b.momentum[0], b.momentum[1]);
        CHECK(pb == doctest::Approx(pa).epsilon(1e-10));
    }
}

TEST_CASE("galilean carrier shifts momentum by v/2 mass") {
    const GridSpec g = make_grid(12.0, 128);
    const ScalarField f = gaussian_field(g);
    const FunctionalReport a = compute_functionals(f, 2, 5.0);
    const double v1 = 1.5, v2 = 0.7;
    ScalarField boosted = f;
    for (int j = 0; j < g.points_per_axis; ++j)
        for (int k = 0; k < g.points_per_axis; ++k)
            boosted.at(j, k) *= std::polar(1.0, 0.5 * (v1 * g.coord(j) + v2 * g.coord(k)));
    const FunctionalReport b = compute_functionals(boosted, 2, 5.0);
    CHECK(b.mass == doctest::Approx(a.mass).epsilon(1e-12));
    CHECK(b.momentum[0] - a.momentum[0] == doctest::Approx(0.5 * v1 * a.mass).epsilon(1e-10));
    CHECK(b.momentum[1] - a.momentum[1] == doctest::Approx(0.5 * v2 * a.mass).epsilon(1e-10));
}

TEST_CASE("gn ratio: scale invariance and strict bound for a gaussian") {
    const GridSpec g = make_grid(12.0, 128);
    const ScalarField f = gaussian_field(g);
    const double q_mass = 11.700896524555; // int q^2 for d=2 (checked elsewhere)
    const double r1 = gn_ratio(f, q_mass, 2);
    // closed forms: lhs = pi/2, grad = pi, mass = pi -> ratio = q_mass / (4 pi)
    CHECK(r1 == doctest::Approx(q_mass / (4.0 * pi)).epsilon(1e-8));
    CHECK(r1 < 1.0);
    ScalarField scaled = f;
    for (cplx& z : scaled.v) z *= 3.7;
    CHECK(gn_ratio(scaled, q_mass, 2) == doctest::Approx(r1).epsilon(1e-12));
}

TEST_CASE("gn ratio stays below one on enveloped noise") {
    const GridSpec g = make_grid(12.0, 64);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const ScalarField f = enveloped_noise(g, seed);
        CHECK(gn_ratio(f, 11.700896524555, 2) < 1.0 + 5e-3);
    }
}

TEST_CASE("rearrangement fixes a radially decreasing field") {
    const GridSpec g = make_grid(10.0, 64);
    const ScalarField f = gaussian_field(g);
    const ScalarField r = rearrange_decreasing(f);
    double max_diff = 0.0;
    for (std::size_t i = 0; i < f.v.size(); ++i)
        max_diff = std::max(max_diff, std::abs(r.v[i] - std::abs(f.v[i])));
    CHECK(max_diff < 1e-14);
}

TEST_CASE("rearrangement preserves the L2 mass") {
    const GridSpec g = make_grid(10.0, 64);
    const ScalarField f = enveloped_noise(g, 19);
    const ScalarField r = rearrange_decreasing(f);
    const double m0 = integrate_grid(f, [](const cplx& z) { return std::norm(z); });
    const double m1 = integrate_grid(r, [](const cplx& z) { return std::norm(z); });
    CHECK(m1 == doctest::Approx(m0).epsilon(1e-13));
}

TEST_CASE("rearrangement does not increase the gradient energy (50-field corpus)") {
    const GridSpec g = make_grid(10.0, 64);
    for (std::uint64_t seed = 100; seed < 150; ++seed) {
        const ScalarField f = enveloped_noise(g, seed);
        const ScalarField r = rearrange_decreasing(f);
        const double gin = grad_sq_integral(f);
        const double gout = grad_sq_integral(r);
        CHECK(gout <= gin * (1.0 + 1e-2));
    }
}

TEST_CASE("h1 distance: identity, constant offset, quadrature oracle") {
    const GridSpec g = make_grid(9.0, 32);
    const ScalarField a = enveloped_noise(g, 5);
    CHECK(h1_distance(a, a) == 0.0);

    const cplx c(0.3, -0.2);
    ScalarField b = a;
    for (cplx& z : b.v) z += c;
    const double expected = std::abs(c) * 2.0 * g.box_half_length;
    CHECK(h1_distance(a, b) == doctest::Approx(expected).epsilon(1e-10));

    const ScalarField other = enveloped_noise(g, 6);
    ScalarField diff(g);
    for (std::size_t i = 0; i < a.v.size(); ++i) diff.v[i] = a.v[i] - other.v[i];
    const double direct = std::sqrt(oracle::h1_sq_direct(diff.v, g.points_per_axis,
                                                         g.box_half_length));
    CHECK(h1_distance(a, other) == doctest::Approx(direct).epsilon(1e-10));
}

TEST_CASE("band-limited noise is deterministic in the seed") {
    const GridSpec g = make_grid(10.0, 64);
    const ScalarField a = band_limited_noise(g, 42, 8);
    const ScalarField b = band_limited_noise(g, 42, 8);
    const ScalarField c = band_limited_noise(g, 43, 8);
    CHECK(a.v == b.v);
    CHECK(a.v != c.v);
}
