#include "solitonlab/variational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace solitonlab {

namespace {

double mass_of(const ScalarField& u) {
    return integrate_grid(u, [](const cplx& z) { return std::norm(z); });
}

double energy_of(const ScalarField& u, const ProblemParams& pp) {
    const double fd = 4.0 / pp.d;
    const double grad = grad_sq_integral(u);
    const double a = integrate_grid(u, [&](const cplx& z) { return std::pow(std::abs(z), 2.0 + fd); });
    const double b = integrate_grid(u, [&](const cplx& z) { return std::pow(std::abs(z), pp.p + 1.0); });
    return grad - a / (1.0 + 2.0 / pp.d) + 2.0 / (pp.p + 1.0) * b;
}

double real_inner(const ScalarField& a, const ScalarField& b) {
    const double cell = a.grid.spacing() * a.grid.spacing();
    return cell * pairwise_map_sum(a.v.size(), [&](std::size_t i) {
        return std::real(std::conj(a.v[i]) * b.v[i]);
    });
}

ScalarField apply_inverse_helmholtz(const ScalarField& g, double alpha) {
    const int n = g.grid.points_per_axis;
    const auto& w = wavenumbers(g.grid);
    std::vector<cplx> spec = fft2(g);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            spec[static_cast<std::size_t>(j) * n + k] /=
                alpha + w.k2_axis[j] + w.k2_axis[k];
    return ifft2(g.grid, std::move(spec));
}

void rescale_mass(ScalarField& u, double m) {
    const double c = std::sqrt(m / mass_of(u));
    for (cplx& z : u.v) z *= c;
}

ScalarField gaussian_init(const GridSpec& grid, double m, double sigma) {
    ScalarField u(grid);
    const int n = grid.points_per_axis;
    for (int j = 0; j < n; ++j) {
        const double x = grid.coord(j);
        for (int k = 0; k < n; ++k) {
            const double y = grid.coord(k);
            u.at(j, k) = std::exp(-(x * x + y * y) / (2.0 * sigma * sigma));
        }
    }
    rescale_mass(u, m);
    return u;
}

// Preconditioned gradient projected on the tangent space of the mass sphere:
// P(g - lambda u), lambda fixed by <P(g - lambda u), u> = 0. Guarantees a
// descent direction for the normalized iteration.
ScalarField descent_direction(const ScalarField& u, const ScalarField& g, double alpha) {
    ScalarField pg = apply_inverse_helmholtz(g, alpha);
    ScalarField pu = apply_inverse_helmholtz(u, alpha);
    const double lambda = real_inner(pg, u) / real_inner(pu, u);
    for (std::size_t i = 0; i < pg.v.size(); ++i) pg.v[i] -= lambda * pu.v[i];
    return pg;
}

struct InnerFlow {
    ScalarField u;
    double objective = 0.0;
    int iterations = 0;
    double residual = 0.0;
    bool converged = false;
};

// Normalized descent on E at fixed mass m (the omega term of the Pohozaev
// objective is constant on the sphere, so the same flow serves both problems).
InnerFlow fixed_mass_flow(ScalarField u, double m, const ProblemParams& pp, double alpha,
                          const FlowOptions& opts) {
    rescale_mass(u, m);
    auto smap = [&](const ScalarField& w, double tau) {
        ScalarField v = w;
        const ScalarField dir = descent_direction(w, energy_gradient(w, pp), alpha);
        for (std::size_t i = 0; i < v.v.size(); ++i) v.v[i] -= tau * dir.v[i];
        rescale_mass(v, m);
        return v;
    };
    double E = energy_of(u, pp);
    double tau = opts.tau_probe;
    double tau_cap = 0.95;
    double best = std::numeric_limits<double>::infinity();
    int since_best = 0;
    InnerFlow out;
    for (int it = 0; it < opts.max_iter; ++it) {
        // monotone descent up to the fp resolution of the energy itself;
        // near the minimum the map is a contraction and E is fp-flat
        const double slack = 64.0 * std::numeric_limits<double>::epsilon() * (std::abs(E) + 1.0);
        ScalarField v = smap(u, tau);
        double Ev = energy_of(v, pp);
        while (Ev > E + slack && tau > 1e-14) {
            tau *= 0.5;
            v = smap(u, tau);
            Ev = energy_of(v, pp);
        }
        u = std::move(v);
        E = Ev;
        out.iterations = it + 1;
        out.residual = h1_distance(u, smap(u, opts.tau_probe));
        if (out.residual < opts.tol) {
            out.converged = true;
            break;
        }
        // shrink the step ceiling when the residual stagnates: a potential-
        // lifted mode of the preconditioned Hessian can sit above 2/tau while
        // its growth stays under the energy slack
        if (out.residual < 0.97 * best) {
            best = out.residual;
            since_best = 0;
        } else if (++since_best >= 8) {
            tau_cap = std::max(0.5 * tau_cap, 0.02);
            since_best = 0;
        }
        tau = std::min(tau * 1.3, tau_cap);
    }
    out.u = std::move(u);
    out.objective = E;
    return out;
}

double rayleigh_omega(const ScalarField& u, const ProblemParams& pp) {
    return -real_inner(energy_gradient(u, pp), u) / (2.0 * mass_of(u));
}

} // namespace

ScalarField energy_gradient(const ScalarField& u, const ProblemParams& params) {
    const double fd = 4.0 / params.d;
    const double p = params.p;
    const int n = u.grid.points_per_axis;
    const auto& w = wavenumbers(u.grid);
    std::vector<cplx> spec = fft2(u);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            spec[static_cast<std::size_t>(j) * n + k] *= w.k2_axis[j] + w.k2_axis[k];
    ScalarField g = ifft2(u.grid, std::move(spec)); // -lap u
    for (std::size_t i = 0; i < g.v.size(); ++i) {
        const double au = std::abs(u.v[i]);
        g.v[i] = 2.0 * (g.v[i] - std::pow(au, fd) * u.v[i] + std::pow(au, p - 1.0) * u.v[i]);
    }
    return g;
}

FlowResult minimize_fixed_mass(double m, const ProblemParams& params, const GridSpec& grid,
                               double q_mass, const std::optional<ScalarField>& init,
                               const FlowOptions& opts) {
    params.validate();
    if (params.critical_only()) throw InvalidArgument("flow needs the full equation");
    if (!(m > q_mass)) throw MassTooSmall("need m > int q^2");
    const double alpha = opts.alpha > 0.0 ? opts.alpha : 0.15;
    ScalarField u0 = init ? *init : gaussian_init(grid, m, 3.0);
    if (!all_finite(u0)) throw InvalidField("non-finite init");
    InnerFlow flow = fixed_mass_flow(std::move(u0), m, params, alpha, opts);
    if (!flow.converged) throw FlowStalled("fixed-mass flow did not converge");
    FlowResult res;
    res.lagrange_omega = rayleigh_omega(flow.u, params);
    res.objective = flow.objective;
    res.iterations = flow.iterations;
    res.residual = flow.residual;
    res.minimizer = std::move(flow.u);
    return res;
}

std::pair<double, ScalarField> pohozaev_rescale(const ScalarField& field,
                                                const ProblemParams& params) {
    params.validate();
    const int d = params.d;
    const double p = params.p;
    const double fd = 4.0 / d;
    const double mass_in = mass_of(field);
    if (mass_in == 0.0) throw DegenerateInput("zero field");
    const double G = grad_sq_integral(field);
    const double A = integrate_grid(field, [&](const cplx& z) { return std::pow(std::abs(z), 2.0 + fd); });
    const double B = integrate_grid(field, [&](const cplx& z) { return std::pow(std::abs(z), p + 1.0); });
    const double c2 = 2.0 * G - 2.0 * d / (d + 2.0) * A;
    const double cb = (p - 1.0) / (p + 1.0) * d * B;
    const double ex = d * (p - 1.0) / 2.0;
    auto I_lam = [&](double lam) { return std::pow(lam, 2.0) * c2 + std::pow(lam, ex) * cb; };
    double lo = 1e-3, hi = 1e3;
    if (!(I_lam(lo) * I_lam(hi) < 0.0))
        throw NoPohozaevRoot("I(u_lambda) has no sign change on [1e-3, 1e3]");
    for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (I_lam(lo) * I_lam(mid) <= 0.0) hi = mid;
        else lo = mid;
    }
    const double lam0 = 0.5 * (lo + hi);
    ScalarField out = resample_scaled(field, lam0);
    const double scale = std::pow(lam0, d / 2.0);
    for (cplx& z : out.v) z *= scale;
    rescale_mass(out, mass_in); // the scaling family is exactly mass-preserving
    return {lam0, std::move(out)};
}

FlowResult minimize_pohozaev(double omega, double m_cap, const ProblemParams& params,
                             const GridSpec& grid, double q_mass,
                             const std::optional<ScalarField>& init,
                             const FlowOptions& opts) {
    params.validate();
    if (params.critical_only()) throw InvalidArgument("flow needs the full equation");
    if (!(m_cap > q_mass)) throw WindowViolation("mass cap at or below int q^2");
    const double alpha = opts.alpha > 0.0 ? opts.alpha : std::max(omega, 0.05);
    const double m_lo = q_mass * (1.0 + 1e-7);

    auto solve_at = [&](double m, const std::optional<ScalarField>& warm) {
        ScalarField u0 = warm ? *warm : gaussian_init(grid, m, 1.2 / std::sqrt(omega));
        InnerFlow f = fixed_mass_flow(std::move(u0), m, params, alpha, opts);
        if (!f.converged) throw FlowStalled("inner fixed-mass flow stalled");
        return f;
    };

    double m1 = init ? mass_of(*init) : std::min(2.0 * q_mass, 0.5 * (q_mass + m_cap));
    if (!(m1 > m_lo && m1 <= m_cap))
        throw WindowViolation("initial mass outside (int q^2, m_cap]");
    InnerFlow cur = solve_at(m1, init);
    double w1 = rayleigh_omega(cur.u, params);
    int total_iters = cur.iterations;

    double m0 = m1, w0 = w1;
    bool have_prev = false;
    for (int outer = 0; outer < opts.max_outer; ++outer) {
        if (std::abs(w1 - omega) < opts.omega_tol) break;
        double m2;
        if (!have_prev) {
            // first correction: nudge mass along the monotone map
            m2 = m1 * (omega > w1 ? 1.25 : 0.8);
        } else {
            m2 = m1 + (m1 - m0) / (w1 - w0) * (omega - w1);
        }
        if (!(m2 > m_lo && m2 <= m_cap)) {
            const double clamped = std::clamp(m2, m_lo, m_cap);
            if (clamped == m1)
                throw WindowViolation("secant pushed mass outside (int q^2, m_cap]");
            m2 = clamped;
        }
        InnerFlow nxt = solve_at(m2, cur.u); // warm start; rescaled inside
        m0 = m1;
        w0 = w1;
        have_prev = true;
        m1 = m2;
        cur = std::move(nxt);
        w1 = rayleigh_omega(cur.u, params);
        total_iters += cur.iterations;
    }
    if (std::abs(w1 - omega) >= opts.omega_tol)
        throw FlowStalled("multiplier matching did not converge");

    auto [lam0, projected] = pohozaev_rescale(cur.u, params);
    (void)lam0; // ~1 at convergence; kept for the projection contract
    FlowResult res;
    res.lagrange_omega = w1;
    res.objective = energy_of(projected, params) + omega * mass_of(projected);
    res.iterations = total_iters;
    res.residual = cur.residual;
    res.minimizer = std::move(projected);
    return res;
}

std::vector<MassFrequencySample> mass_frequency_map(const std::vector<double>& omegas,
                                                    const ProblemParams& params,
                                                    double r_max_factor, int n_nodes) {
    params.validate();
    std::vector<MassFrequencySample> map;
    map.reserve(omegas.size());
    for (double om : omegas) {
        MassFrequencySample s;
        s.omega = om;
        try {
            const double r_max = r_max_factor / std::sqrt(om);
            RadialProfile prof = shoot_profile(params, om, r_max, n_nodes);
            const double fd = 4.0 / params.d;
            const double dr = prof.dr();
            const auto du = radial_derivative(prof.values, dr);
            std::vector<double> tmp(prof.values.size());
            for (std::size_t i = 0; i < tmp.size(); ++i) tmp[i] = du[i] * du[i];
            const double G = radial_integral(tmp, dr, params.d);
            for (std::size_t i = 0; i < tmp.size(); ++i)
                tmp[i] = std::pow(prof.values[i], 2.0 + fd);
            const double A = radial_integral(tmp, dr, params.d);
            for (std::size_t i = 0; i < tmp.size(); ++i)
                tmp[i] = std::pow(prof.values[i], params.p + 1.0);
            const double B = radial_integral(tmp, dr, params.d);
            s.mass = prof.mass;
            s.energy = G - A / (1.0 + 2.0 / params.d) + 2.0 / (params.p + 1.0) * B;
            s.d_value = s.energy + om * s.mass;
            s.converged = true;
        } catch (const Error& e) {
            s.error = e.kind();
        }
        map.push_back(std::move(s));
    }
    std::sort(map.begin(), map.end(),
              [](const MassFrequencySample& a, const MassFrequencySample& b) {
                  return a.omega < b.omega;
              });
    return map;
}

double estimate_omega_q(const std::vector<MassFrequencySample>& map, double q_mass,
                        const ProblemParams& params, double tol, double r_max_factor,
                        int n_nodes) {
    if (map.empty()) throw InvalidArgument("empty mass-frequency map");
    auto mass_at = [&](double om) {
        return shoot_profile(params, om, r_max_factor / std::sqrt(om), n_nodes).mass;
    };
    const MassFrequencySample* below = nullptr;
    const MassFrequencySample* above = nullptr;
    for (const auto& s : map) {
        if (!s.converged) continue;
        if (s.mass > q_mass) {
            above = &s;
            break;
        }
        below = &s;
    }
    if (!above) throw NoBigSolitonInRange("no sampled mass exceeds int q^2");
    if (!below) return 0.0; // every sample is supercritical; omega_q >= 0 binds
    double lo = below->omega, hi = above->omega;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mass_at(mid) > q_mass) hi = mid;
        else lo = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace solitonlab
