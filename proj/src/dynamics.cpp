#include "solitonlab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace solitonlab {

namespace {

void nonlinear_phase_step(ScalarField& f, double dt, const ProblemParams& pp) {
    const double e1 = 2.0 / pp.d;            // |phi|^2 exponent of the focusing power
    const double e2 = (pp.p - 1.0) / 2.0;    // and of the defocusing power
    for (cplx& z : f.v) {
        const double a2 = std::norm(z);
        const double phase = dt * (std::pow(a2, e1) - std::pow(a2, e2));
        z *= std::polar(1.0, phase);
    }
}

// solve the 8x8 Hermite system for the septic blend once
const std::array<double, 8>& blend_coefficients() {
    static const std::array<double, 8> coef = [] {
        constexpr double delta = 0.1;
        const double sL = -1.0 + delta, sR = 1.0 - delta;
        // value and three derivatives of the quartic caps at the junctions
        const double dL[4] = {std::pow(1.0 + sL, 4) / 16.0, 4.0 * std::pow(1.0 + sL, 3) / 16.0,
                              12.0 * std::pow(1.0 + sL, 2) / 16.0, 24.0 * (1.0 + sL) / 16.0};
        const double dR[4] = {1.0 - std::pow(1.0 - sR, 4) / 16.0,
                              4.0 * std::pow(1.0 - sR, 3) / 16.0,
                              -12.0 * std::pow(1.0 - sR, 2) / 16.0, 24.0 * (1.0 - sR) / 16.0};
        double A[8][9] = {};
        for (int k = 0; k < 4; ++k) {
            for (int j = 0; j < 8; ++j) {
                double c = 1.0;
                for (int q = 0; q < k; ++q) c *= (j - q);
                A[k][j] = j >= k ? c * std::pow(sL, j - k) : 0.0;
                A[4 + k][j] = j >= k ? c * std::pow(sR, j - k) : 0.0;
            }
            A[k][8] = dL[k];
            A[4 + k][8] = dR[k];
        }
        // Gaussian elimination with partial pivoting
        for (int col = 0; col < 8; ++col) {
            int piv = col;
            for (int r = col + 1; r < 8; ++r)
                if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
            std::swap(A[col], A[piv]);
            for (int r = 0; r < 8; ++r) {
                if (r == col) continue;
                const double f = A[r][col] / A[col][col];
                for (int c = col; c < 9; ++c) A[r][c] -= f * A[col][c];
            }
        }
        std::array<double, 8> out{};
        for (int j = 0; j < 8; ++j) out[j] = A[j][8] / A[j][j];
        return out;
    }();
    return coef;
}

} // namespace

double cutoff_y(double s) {
    constexpr double delta = 0.1;
    if (s <= -1.0) return 0.0;
    if (s >= 1.0) return 1.0;
    if (s <= -1.0 + delta) {
        const double t = 1.0 + s;
        return t * t * t * t / 16.0;
    }
    if (s >= 1.0 - delta) {
        const double t = 1.0 - s;
        return 1.0 - t * t * t * t / 16.0;
    }
    const auto& c = blend_coefficients();
    double acc = 0.0;
    for (int j = 7; j >= 0; --j) acc = acc * s + c[j];
    return acc;
}

std::vector<double> MultiSolitonConfig::sigmas() const {
    std::vector<double> out;
    for (std::size_t k = 1; k < specs.size(); ++k)
        out.push_back(0.5 * (specs[k - 1].v[0] + specs[k].v[0]));
    return out;
}

double MultiSolitonConfig::theta0() const {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < specs.size(); ++k)
        m = std::min(m, specs[k].v[0] - specs[k - 1].v[0]);
    for (const auto& s : specs) m = std::min(m, std::sqrt(s.omega));
    const double sq = m / 16.0;
    return sq * sq;
}

void MultiSolitonConfig::validate() const {
    if (specs.empty()) throw InvalidArgument("need at least one soliton");
    if (!(cutoff_width > 0.0)) throw InvalidArgument("cutoff width must be positive");
    for (std::size_t k = 1; k < specs.size(); ++k)
        if (!(specs[k].v[0] > specs[k - 1].v[0]))
            throw InvalidArgument("first velocity components must be strictly increasing");
}

ScalarField step_linear(const ScalarField& field, double dt) {
    const int n = field.grid.points_per_axis;
    const auto& w = wavenumbers(field.grid);
    std::vector<cplx> spec = fft2(field);
    std::vector<cplx> ph(n);
    for (int m = 0; m < n; ++m) ph[m] = std::polar(1.0, -dt * w.k2_axis[m]);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            spec[static_cast<std::size_t>(j) * n + k] *= ph[j] * ph[k];
    return ifft2(field.grid, std::move(spec));
}

ScalarField step_strang(const ScalarField& field, double dt, const ProblemParams& params) {
    params.validate();
    if (params.critical_only()) throw InvalidArgument("dynamics needs the full equation");
    if (dt == 0.0) throw InvalidArgument("dt must be nonzero");
    ScalarField f = field;
    nonlinear_phase_step(f, 0.5 * dt, params);
    f = step_linear(f, dt);
    nonlinear_phase_step(f, 0.5 * dt, params);
    return f;
}

EvolutionTrace evolve(const ScalarField& field, double t0, double t1, double dt,
                      const ProblemParams& params, const ProbeConfig& probes) {
    if (t1 < t0 && dt > 0.0) throw InvalidArgument("backward evolution needs dt < 0");
    if (t1 > t0 && dt < 0.0) throw InvalidArgument("forward evolution needs dt > 0");
    const double span = t1 - t0;
    long nsteps = 0;
    if (span != 0.0) {
        const double ratio = span / dt;
        nsteps = std::lround(ratio);
        if (nsteps <= 0 || std::abs(ratio - nsteps) > 1e-8 * std::abs(ratio))
            throw InvalidArgument("dt must divide t1 - t0");
    }
    const long probe_stride =
        std::max<long>(1, std::lround(std::abs(probes.probe_dt / (dt == 0.0 ? 1.0 : dt))));

    EvolutionTrace trace;
    ScalarField f = field;
    auto record = [&](double t) {
        if (!all_finite(f)) throw NumericalBlowup(t, "non-finite field");
        const FunctionalReport rep = compute_functionals(f, params.d, params.p);
        trace.times.push_back(t);
        trace.mass_series.push_back(rep.mass);
        trace.energy_series.push_back(rep.energy);
        trace.momentum_series.push_back(rep.momentum);
        trace.residual_series.push_back(
            probes.residual ? probes.residual(f, t) : std::numeric_limits<double>::quiet_NaN());
        if (probes.extra) probes.extra(f, t, trace);
        if (probes.snapshot_stride > 0 &&
            (trace.times.size() - 1) % probes.snapshot_stride == 0)
            trace.snapshots.emplace_back(t, f);
    };
    record(t0);
    for (long s = 1; s <= nsteps; ++s) {
        f = step_strang(f, dt, params);
        if (s % probe_stride == 0 || s == nsteps) record(t0 + s * dt);
    }
    if (t1 < t0) {
        // keep trace times increasing for backward runs
        std::reverse(trace.times.begin(), trace.times.end());
        std::reverse(trace.mass_series.begin(), trace.mass_series.end());
        std::reverse(trace.energy_series.begin(), trace.energy_series.end());
        std::reverse(trace.momentum_series.begin(), trace.momentum_series.end());
        std::reverse(trace.residual_series.begin(), trace.residual_series.end());
        std::reverse(trace.localized_mass_series.begin(), trace.localized_mass_series.end());
        std::reverse(trace.localized_momentum_series.begin(),
                     trace.localized_momentum_series.end());
        std::reverse(trace.snapshots.begin(), trace.snapshots.end());
    }
    return trace;
}

namespace {

// H^1 cross-spectrum between the field and the reference; Z(y) below is its
// trigonometric evaluation at a continuous shift.
struct CrossSpectrum {
    std::vector<cplx> coef; // (1 + |k|^2) a_hat conj(b_hat) / N^4 * (2L)^2
    std::vector<double> kx, ky;
    int n = 0;

    cplx eval(double y1, double y2) const {
        // sum over modes; row phases hoisted
        cplx acc{0.0, 0.0};
        std::vector<cplx> phy(n);
        for (int k = 0; k < n; ++k) phy[k] = std::polar(1.0, ky[k] * y2);
        for (int j = 0; j < n; ++j) {
            const cplx px = std::polar(1.0, kx[j] * y1);
            cplx row{0.0, 0.0};
            const cplx* c = &coef[static_cast<std::size_t>(j) * n];
            for (int k = 0; k < n; ++k) row += c[k] * phy[k];
            acc += px * row;
        }
        return acc;
    }
};

} // namespace

ModulationResult modulated_distance(const ScalarField& field, const RadialProfile& profile) {
    if (!all_finite(field)) throw InvalidField("non-finite field entries");
    const double field_norm =
        integrate_grid(field, [](const cplx& z) { return std::norm(z); });
    if (field_norm == 0.0) throw DegenerateInput("zero field");

    SolitonSpec origin;
    origin.omega = profile.omega;
    const ScalarField ref = embed_profile(profile, field.grid, origin, 0.0);

    const int n = field.grid.points_per_axis;
    const auto& w = wavenumbers(field.grid);
    const std::vector<cplx> fa = fft2(field);
    const std::vector<cplx> fb = fft2(ref);

    const double cell = field.grid.spacing() * field.grid.spacing();
    const double scale = cell / static_cast<double>(field.grid.size());

    CrossSpectrum cs;
    cs.n = n;
    cs.coef.resize(fa.size());
    cs.kx.resize(n);
    cs.ky.resize(n);
    for (int m = 0; m < n; ++m) cs.kx[m] = cs.ky[m] = w.deriv[m];
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            const std::size_t i = static_cast<std::size_t>(j) * n + k;
            const double wgt = 1.0 + w.deriv[j] * w.deriv[j] + w.deriv[k] * w.deriv[k];
            cs.coef[i] = scale * wgt * fa[i] * std::conj(fb[i]);
        }

    // |Z(y)| on the shift lattice via one inverse transform
    std::vector<cplx> zgrid = cs.coef;
    {
        ScalarField tmp = ifft2(field.grid, std::move(zgrid));
        double best = -1.0;
        int bj = 0, bk = 0;
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const double a = std::abs(tmp.at(j, k)); // tmp holds Z(y_jk)/N^2... consistent scan
                if (a > best) {
                    best = a;
                    bj = j;
                    bk = k;
                }
            }
        const double L = field.grid.box_half_length;
        const double h = field.grid.spacing();
        double y1 = bj * h;
        if (y1 >= L) y1 -= 2.0 * L;
        double y2 = bk * h;
        if (y2 >= L) y2 -= 2.0 * L;

        // coordinate descent within one cell, quadratic fit per axis
        double step = h;
        double y[2] = {y1, y2};
        for (int round = 0; round < 45 && step > 1e-13; ++round) {
            for (int c = 0; c < 2; ++c) {
                double ym[2] = {y[0], y[1]}, yp[2] = {y[0], y[1]};
                ym[c] -= step;
                yp[c] += step;
                const double f0 = std::abs(cs.eval(y[0], y[1]));
                const double fm = std::abs(cs.eval(ym[0], ym[1]));
                const double fp = std::abs(cs.eval(yp[0], yp[1]));
                const double den = fm - 2.0 * f0 + fp;
                if (den < 0.0) {
                    double delta = 0.5 * (fm - fp) / den;
                    delta = std::clamp(delta, -1.0, 1.0);
                    y[c] += delta * step;
                } else if (fm > f0 || fp > f0) {
                    y[c] += (fp > fm ? 1.0 : -1.0) * step;
                }
            }
            step *= 0.5;
        }

        const cplx Z = cs.eval(y[0], y[1]);
        const double na2 = field_norm + grad_sq_integral(field);
        const double nb2 = integrate_grid(ref, [](const cplx& z) { return std::norm(z); }) +
                           grad_sq_integral(ref);
        ModulationResult res;
        res.distance = std::sqrt(std::max(0.0, na2 + nb2 - 2.0 * std::abs(Z)));
        res.theta = std::arg(Z);
        // internal shift s solves phi ~ e^{i theta} Q(. - s); report y with
        // the Q(. + y) convention
        res.y = {-y[0], -y[1]};
        return res;
    }
}

ScalarField build_multisoliton(const MultiSolitonConfig& config,
                               const std::vector<RadialProfile>& profiles,
                               const GridSpec& grid, double t) {
    config.validate();
    if (profiles.size() != config.specs.size())
        throw ParamMismatch("one profile per soliton spec required");
    ScalarField sum(grid);
    for (std::size_t k = 0; k < profiles.size(); ++k) {
        const ScalarField term = embed_profile(profiles[k], grid, config.specs[k], t);
        for (std::size_t i = 0; i < sum.v.size(); ++i) sum.v[i] += term.v[i];
    }
    return sum;
}

LocalizedQuantities localized_quantities(const ScalarField& field,
                                         const MultiSolitonConfig& config, double t) {
    config.validate();
    const std::size_t K = config.specs.size();
    const int n = field.grid.points_per_axis;
    const std::vector<double> sig = config.sigmas();

    // Y((x1 - sigma_k t)/L) per column of constant x1; y_k by telescoping
    std::vector<std::vector<double>> Yk(sig.size(), std::vector<double>(n));
    for (std::size_t s = 0; s < sig.size(); ++s)
        for (int j = 0; j < n; ++j)
            Yk[s][j] = cutoff_y((field.grid.coord(j) - sig[s] * t) / config.cutoff_width);

    auto yk_at = [&](std::size_t k, int j) {
        if (K == 1) return 1.0;
        if (k == 0) return 1.0 - Yk[0][j];
        if (k == K - 1) return Yk[K - 2][j];
        return Yk[k - 1][j] - Yk[k][j];
    };

    const auto gr = gradient(field);
    const double cell = field.grid.spacing() * field.grid.spacing();
    LocalizedQuantities out;
    out.masses.resize(K);
    out.momenta.resize(K);
    for (std::size_t k = 0; k < K; ++k) {
        out.masses[k] = cell * pairwise_map_sum(field.v.size(), [&](std::size_t i) {
            return std::norm(field.v[i]) * yk_at(k, static_cast<int>(i) / n);
        });
        for (int c = 0; c < 2; ++c) {
            const auto& gc = gr[c].v;
            out.momenta[k][c] = cell * pairwise_map_sum(field.v.size(), [&](std::size_t i) {
                return std::imag(gc[i] * std::conj(field.v[i])) *
                       yk_at(k, static_cast<int>(i) / n);
            });
        }
    }
    return out;
}

EvolutionTrace stability_experiment(const RadialProfile& profile, double perturbation_size,
                                    double T, const ProblemParams& params,
                                    const GridSpec& grid, double dt,
                                    const ExperimentOptions& opts) {
    if (!(perturbation_size >= 0.0 && perturbation_size <= 0.1))
        throw InvalidArgument("perturbation size must lie in [0, 0.1]");
    SolitonSpec origin;
    origin.omega = profile.omega;
    ScalarField phi0 = embed_profile(profile, grid, origin, 0.0);
    if (perturbation_size > 0.0) {
        const double qn = h1_norm(phi0);
        const ScalarField noise = band_limited_noise(grid, opts.seed, grid.points_per_axis / 8);
        for (std::size_t i = 0; i < phi0.v.size(); ++i)
            phi0.v[i] += perturbation_size * qn * noise.v[i];
    }
    ProbeConfig probes;
    probes.probe_dt = opts.probe_dt;
    probes.snapshot_stride = opts.snapshot_stride;
    probes.residual = [&profile](const ScalarField& f, double) {
        return modulated_distance(f, profile).distance;
    };
    return evolve(phi0, 0.0, T, dt, params, probes);
}

EvolutionTrace multisoliton_experiment(const MultiSolitonConfig& config,
                                       const std::vector<RadialProfile>& profiles, double T,
                                       const ProblemParams& params, const GridSpec& grid,
                                       double dt, const ExperimentOptions& opts) {
    config.validate();
    if (profiles.size() != config.specs.size())
        throw ParamMismatch("one profile per soliton spec required");
    double omega_min = std::numeric_limits<double>::infinity();
    for (const auto& s : config.specs) omega_min = std::min(omega_min, s.omega);
    const double margin = 4.0 / std::sqrt(omega_min);
    const double L = grid.box_half_length;

    ProbeConfig probes;
    probes.probe_dt = opts.probe_dt;
    probes.snapshot_stride = opts.snapshot_stride;
    probes.residual = [&](const ScalarField& f, double t) {
        const ScalarField R = build_multisoliton(config, profiles, grid, t);
        return h1_distance(f, R);
    };
    probes.extra = [&](const ScalarField& f, double t, EvolutionTrace& tr) {
        for (const auto& s : config.specs) {
            for (int c = 0; c < 2; ++c) {
                const double pos = s.x0[c] + s.v[c] * t;
                if (L - std::abs(pos) < margin)
                    throw BoxExit("soliton peak within 4/sqrt(omega_min) of the boundary at t=" +
                                  std::to_string(t));
            }
        }
        const LocalizedQuantities lq = localized_quantities(f, config, t);
        tr.localized_mass_series.push_back(lq.masses);
        tr.localized_momentum_series.push_back(lq.momenta);
    };

    if (opts.backward) {
        const ScalarField phiT = build_multisoliton(config, profiles, grid, T);
        return evolve(phiT, T, 0.0, -dt, params, probes);
    }
    const ScalarField phi0 = build_multisoliton(config, profiles, grid, 0.0);
    return evolve(phi0, 0.0, T, dt, params, probes);
}

} // namespace solitonlab
