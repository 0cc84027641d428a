#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "solitonlab/dynamics.hpp"

using namespace solitonlab;

namespace {

const ProblemParams d2p5{2, 5.0};

const RadialProfile& prof01() {
    static const RadialProfile prof = shoot_profile(d2p5, 0.1, 64.0, 8000);
    return prof;
}

ScalarField smooth_pulse(const GridSpec& g, double amplitude) {
    ScalarField f(g);
    for (int j = 0; j < g.points_per_axis; ++j) {
        const double x = g.coord(j);
        for (int k = 0; k < g.points_per_axis; ++k) {
            const double y = g.coord(k);
            f.at(j, k) = amplitude * std::exp(-(x * x + y * y) / 2.0) *
                         std::polar(1.0, 0.3 * x);
        }
    }
    return f;
}

} // namespace

TEST_CASE("linear step reproduces the free gaussian in one exact step") {
    const GridSpec g = make_grid(16.0, 128);
    ScalarField f(g);
    for (int j = 0; j < 128; ++j)
        for (int k = 0; k < 128; ++k)
            f.at(j, k) = oracle::free_gaussian(0.0, g.coord(j), g.coord(k));
    const ScalarField evolved = step_linear(f, 1.0);
    double max_err = 0.0;
    for (int j = 0; j < 128; ++j)
        for (int k = 0; k < 128; ++k)
            max_err = std::max(max_err, std::abs(evolved.at(j, k) -
                                                 oracle::free_gaussian(1.0, g.coord(j),
                                                                       g.coord(k))));
    CHECK(max_err < 1e-8);
}

TEST_CASE("strang steps are unitary in L2") {
    const GridSpec g = make_grid(16.0, 128);
    ScalarField f = smooth_pulse(g, 1.1);
    const double m0 = integrate_grid(f, [](const cplx& z) { return std::norm(z); });
    double worst = 0.0;
    double prev = m0;
    for (int s = 0; s < 100; ++s) {
        f = step_strang(f, 1e-3, d2p5);
        const double m = integrate_grid(f, [](const cplx& z) { return std::norm(z); });
        worst = std::max(worst, std::abs(m - prev) / m0);
        prev = m;
    }
    CHECK(worst < 1e-13);
}

TEST_CASE("embedded soliton is a fixed point of the flow modulo phase") {
    const GridSpec g = make_grid(24.0, 256);
    SolitonSpec rest;
    rest.omega = 0.1;
    const ScalarField phi0 = embed_profile(prof01(), g, rest, 0.0);
    ProbeConfig probes;
    probes.probe_dt = 1.0;
    probes.residual = [&](const ScalarField& f, double) {
        return modulated_distance(f, prof01()).distance;
    };
    const EvolutionTrace tr = evolve(phi0, 0.0, 5.0, 1e-3, d2p5, probes);
    for (double r : tr.residual_series) CHECK(r < 1e-4);

    // conservation along the way
    const double m0 = tr.mass_series.front(), e0 = tr.energy_series.front();
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        CHECK(std::abs(tr.mass_series[i] - m0) / m0 < 1e-10);
        CHECK(std::abs(tr.energy_series[i] - e0) / std::abs(e0) < 1e-6);
        CHECK(std::abs(tr.momentum_series[i][0]) < 1e-8);
        CHECK(std::abs(tr.momentum_series[i][1]) < 1e-8);
    }
}

TEST_CASE("degenerate evolution spans") {
    const GridSpec g = make_grid(16.0, 64);
    const ScalarField f = smooth_pulse(g, 0.5);
    ProbeConfig probes;
    const EvolutionTrace tr = evolve(f, 2.0, 2.0, 1e-3, d2p5, probes);
    REQUIRE(tr.times.size() == 1);
    CHECK(tr.times[0] == 2.0);
    CHECK_THROWS_AS(evolve(f, 0.0, 1.0, -1e-3, d2p5, probes), InvalidArgument);
    CHECK_THROWS_AS(evolve(f, 0.0, 1.0, 3e-4, d2p5, probes), InvalidArgument);
}

TEST_CASE("time reversal returns to the initial state") {
    const GridSpec g = make_grid(16.0, 128);
    const ScalarField f0 = smooth_pulse(g, 1.0);
    ScalarField f = f0;
    for (int s = 0; s < 1000; ++s) f = step_strang(f, 1e-3, d2p5);
    for (int s = 0; s < 1000; ++s) f = step_strang(f, -1e-3, d2p5);
    CHECK(h1_distance(f, f0) < 1e-6);
}

TEST_CASE("splitting converges at second order") {
    const GridSpec g = make_grid(16.0, 128);
    const ScalarField f0 = smooth_pulse(g, 1.2);
    auto march = [&](double dt) {
        ScalarField f = f0;
        const int n = static_cast<int>(std::lround(0.5 / dt));
        for (int s = 0; s < n; ++s) f = step_strang(f, dt, d2p5);
        return f;
    };
    const ScalarField ref = march(3.125e-5);
    const double e1 = h1_distance(march(1e-3), ref);
    const double e2 = h1_distance(march(5e-4), ref);
    const double order = std::log2(e1 / e2);
    CHECK(order > 1.9);
    CHECK(order < 2.1);
}

TEST_CASE("evolution commutes with a global phase") {
    const GridSpec g = make_grid(16.0, 64);
    const ScalarField f0 = smooth_pulse(g, 1.0);
    ScalarField rotated = f0;
    for (cplx& z : rotated.v) z *= std::polar(1.0, 0.8);
    ScalarField a = f0, b = rotated;
    for (int s = 0; s < 100; ++s) {
        a = step_strang(a, 1e-3, d2p5);
        b = step_strang(b, 1e-3, d2p5);
    }
    for (cplx& z : a.v) z *= std::polar(1.0, 0.8);
    CHECK(h1_distance(a, b) < 1e-11);
}

TEST_CASE("evolution commutes with a galilean boost") {
    const GridSpec g = make_grid(16.0, 128);
    const ScalarField f0 = smooth_pulse(g, 1.0);
    const double v = 1.0, T = 1.0, dt = 5e-4;
    auto boost_phase = [&](ScalarField f, double t) {
        for (int j = 0; j < g.points_per_axis; ++j)
            for (int k = 0; k < g.points_per_axis; ++k)
                f.at(j, k) *= std::polar(1.0, 0.5 * v * g.coord(j) - 0.25 * v * v * t);
        return f;
    };
    // boost then evolve
    ScalarField a = boost_phase(f0, 0.0);
    for (int s = 0; s < static_cast<int>(T / dt); ++s) a = step_strang(a, dt, d2p5);
    // evolve then boost (translate by v T, then apply the phase at time T)
    ScalarField b = f0;
    for (int s = 0; s < static_cast<int>(T / dt); ++s) b = step_strang(b, dt, d2p5);
    b = boost_phase(fourier_shift(b, v * T, 0.0), T);
    CHECK(h1_distance(a, b) < 1e-5);
}

TEST_CASE("modulated distance identifies an exact orbit member") {
    const GridSpec g = make_grid(16.0, 128); // h = 0.25 puts (2,-1) on the lattice
    SolitonSpec rest;
    rest.omega = 0.1;
    const ScalarField Q = embed_profile(prof01(), g, rest, 0.0);
    ScalarField phi = fourier_shift(Q, -2.0, 1.0); // phi(x) = Q(x + (2,-1))
    for (cplx& z : phi.v) z *= std::polar(1.0, 1.3);
    const ModulationResult mr = modulated_distance(phi, prof01());
    CHECK(mr.distance < 1e-10);
    CHECK(mr.theta == doctest::Approx(1.3).epsilon(1e-6));
    CHECK(mr.y[0] == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(mr.y[1] == doctest::Approx(-1.0).epsilon(1e-6));
}

TEST_CASE("modulated distance of a small perturbation stays small") {
    const GridSpec g = make_grid(24.0, 128);
    SolitonSpec rest;
    rest.omega = 0.1;
    ScalarField phi = embed_profile(prof01(), g, rest, 0.0);
    const ScalarField noise = band_limited_noise(g, 99, 16);
    for (std::size_t i = 0; i < phi.v.size(); ++i) phi.v[i] += 0.01 * noise.v[i];
    const ModulationResult mr = modulated_distance(phi, prof01());
    CHECK(mr.distance > 0.0);
    CHECK(mr.distance <= 0.05);
}

TEST_CASE("modulated distance of a doubled soliton equals its H1 norm") {
    const GridSpec g = make_grid(24.0, 128);
    SolitonSpec rest;
    rest.omega = 0.1;
    const ScalarField Q = embed_profile(prof01(), g, rest, 0.0);
    ScalarField twice = Q;
    for (cplx& z : twice.v) z *= 2.0;
    const ModulationResult mr = modulated_distance(twice, prof01());
    CHECK(mr.distance == doctest::Approx(h1_norm(Q)).epsilon(1e-6));
    CHECK_THROWS_AS(modulated_distance(ScalarField(g), prof01()), DegenerateInput);
}

TEST_CASE("ansatz translation identity in time") {
    const GridSpec g = make_grid(24.0, 256);
    MultiSolitonConfig cfg;
    SolitonSpec s;
    s.omega = 0.1;
    s.x0 = {-3.0, 1.0};
    s.v = {1.0, -0.5};
    s.gamma = 0.4;
    cfg.specs = {s};
    const ScalarField at1 = build_multisoliton(cfg, {prof01()}, g, 1.0);
    MultiSolitonConfig shifted = cfg;
    shifted.specs[0].x0 = {s.x0[0] + s.v[0], s.x0[1] + s.v[1]};
    shifted.specs[0].gamma = s.gamma - 0.25 * (s.v[0] * s.v[0] + s.v[1] * s.v[1]) + s.omega;
    const ScalarField at0 = build_multisoliton(shifted, {prof01()}, g, 0.0);
    double max_diff = 0.0;
    for (std::size_t i = 0; i < at1.v.size(); ++i)
        max_diff = std::max(max_diff, std::abs(at1.v[i] - at0.v[i]));
    CHECK(max_diff < 1e-12);
}

TEST_CASE("two far-apart solitons superpose with additive mass") {
    const GridSpec g = make_grid(48.0, 256);
    const RadialProfile& prof = prof01();
    MultiSolitonConfig cfg;
    SolitonSpec a, b;
    a.omega = b.omega = 0.1;
    a.x0 = {-18.0, 0.0};
    b.x0 = {18.0, 0.0};
    a.v = {-2.0, 0.0};
    b.v = {2.0, 0.0};
    cfg.specs = {a, b};
    const ScalarField sum = build_multisoliton(cfg, {prof, prof}, g, 0.0);
    const double mass = integrate_grid(sum, [](const cplx& z) { return std::norm(z); });
    CHECK(mass == doctest::Approx(2.0 * prof.mass).epsilon(1e-6));

    // K=1 reduces to the plain embedding
    MultiSolitonConfig single;
    single.specs = {a};
    const ScalarField one = build_multisoliton(single, {prof}, g, 0.0);
    const ScalarField direct = embed_profile(prof, g, a, 0.0);
    CHECK(one.v == direct.v);
}

TEST_CASE("velocity ordering is enforced") {
    MultiSolitonConfig cfg;
    SolitonSpec a, b;
    a.omega = b.omega = 0.1;
    a.v = {2.0, 0.0};
    b.v = {-2.0, 0.0};
    cfg.specs = {a, b};
    CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
    cfg.specs = {b, a};
    CHECK_NOTHROW(cfg.validate());
    CHECK(cfg.sigmas().size() == 1);
    CHECK(cfg.sigmas()[0] == 0.0);
    // rate constant from the velocity gap and the frequencies
    const double expect = std::pow(std::min(4.0, std::sqrt(0.1)) / 16.0, 2.0);
    CHECK(cfg.theta0() == doctest::Approx(expect));
}

TEST_CASE("cutoff profile: bounds, monotonicity, quartic caps") {
    CHECK(cutoff_y(-2.0) == 0.0);
    CHECK(cutoff_y(-1.0) == 0.0);
    CHECK(cutoff_y(1.0) == 1.0);
    CHECK(cutoff_y(2.0) == 1.0);
    CHECK(cutoff_y(-0.95) == doctest::Approx(std::pow(0.05, 4) / 16.0).epsilon(1e-14));
    CHECK(cutoff_y(0.95) == doctest::Approx(1.0 - std::pow(0.05, 4) / 16.0).epsilon(1e-14));
    double prev = -1.0;
    for (double s = -1.0; s <= 1.0 + 1e-12; s += 1e-3) {
        const double y = cutoff_y(s);
        CHECK(y >= prev - 1e-15);
        CHECK(y >= 0.0);
        CHECK(y <= 1.0);
        prev = y;
    }
    // C3 joins: numerically continuous third derivative at the junctions
    for (double sj : {-0.9, 0.9}) {
        const double h = 1e-3;
        auto d3 = [&](double s) {
            return (cutoff_y(s + 2 * h) - 2 * cutoff_y(s + h) + 2 * cutoff_y(s - h) -
                    cutoff_y(s - 2 * h)) /
                   (2 * h * h * h);
        };
        CHECK(d3(sj - 5 * h) == doctest::Approx(d3(sj + 5 * h)).epsilon(0.2));
    }
}

TEST_CASE("localized quantities: partition of unity and per-soliton masses") {
    const GridSpec g = make_grid(48.0, 256);
    const RadialProfile prof = shoot_profile(d2p5, 0.15, 20.0 / std::sqrt(0.15), 8000);
    MultiSolitonConfig cfg;
    SolitonSpec a, b, c;
    a.omega = b.omega = c.omega = 0.15;
    a.x0 = {-20.0, 0.0};
    b.x0 = {0.0, 0.0};
    c.x0 = {20.0, 0.0};
    a.v = {-2.0, 0.0};
    b.v = {0.0, 0.0};
    c.v = {2.0, 0.0};
    cfg.specs = {a, b, c};
    cfg.cutoff_width = 4.0;

    // partition of unity along the split coordinate
    const auto sig = cfg.sigmas();
    for (double x : {-20.0, -3.7, -1.0, 0.0, 0.3, 2.0, 17.0}) {
        double sum = 1.0 - cutoff_y((x - sig[0] * 0.0) / 4.0);
        sum += cutoff_y((x - sig[0] * 0.0) / 4.0) - cutoff_y((x - sig[1] * 0.0) / 4.0);
        sum += cutoff_y((x - sig[1] * 0.0) / 4.0);
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }

    const ScalarField phi = build_multisoliton(cfg, {prof, prof, prof}, g, 0.0);
    const LocalizedQuantities lq = localized_quantities(phi, cfg, 0.0);
    REQUIRE(lq.masses.size() == 3);
    double total = 0.0;
    for (int k = 0; k < 3; ++k) {
        CHECK(lq.masses[k] == doctest::Approx(prof.mass).epsilon(1e-4));
        total += lq.masses[k];
    }
    const double grid_mass = integrate_grid(phi, [](const cplx& z) { return std::norm(z); });
    CHECK(total == doctest::Approx(grid_mass).epsilon(1e-12));

    // localized momenta add up to the total momentum
    const FunctionalReport rep = compute_functionals(phi, 2, 5.0);
    double px = 0.0;
    for (const auto& m : lq.momenta) px += m[0];
    CHECK(px == doctest::Approx(rep.momentum[0]).epsilon(1e-10));
}

TEST_CASE("stability run stays on the orbit without perturbation") {
    const GridSpec g = make_grid(24.0, 128);
    ExperimentOptions opts;
    opts.probe_dt = 0.5;
    const EvolutionTrace tr = stability_experiment(prof01(), 0.0, 2.0, d2p5, g, 1e-3, opts);
    for (double r : tr.residual_series) CHECK(r < 2e-3);
    CHECK_THROWS_AS(stability_experiment(prof01(), 0.5, 1.0, d2p5, g, 1e-3, opts),
                    InvalidArgument);
}

TEST_CASE("multisoliton run reports box exits") {
    const GridSpec g = make_grid(24.0, 64);
    MultiSolitonConfig cfg;
    SolitonSpec a, b;
    a.omega = b.omega = 0.1;
    a.x0 = {-8.0, 0.0};
    b.x0 = {8.0, 0.0};
    a.v = {-2.0, 0.0};
    b.v = {2.0, 0.0};
    cfg.specs = {a, b};
    const RadialProfile& prof = prof01();
    ExperimentOptions opts;
    opts.probe_dt = 0.25;
    CHECK_THROWS_AS(multisoliton_experiment(cfg, {prof, prof}, 4.0, d2p5, g, 1e-3, opts),
                    BoxExit);
}
