#include "solitonlab/groundstate.hpp"

#include "solitonlab/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace solitonlab {

namespace {

// Scaled modified Bessel: e^z sqrt(z) K0(z), Abramowitz-Stegun 9.8.6 (z >= 2).
double k0_scaled(double z) {
    const double t = 2.0 / z;
    return 1.25331414 +
           t * (-0.07832358 +
                t * (0.02189568 +
                     t * (-0.01062446 +
                          t * (0.00587872 + t * (-0.00251540 + t * 0.00053208)))));
}

// Far-field ratio u(r)/u(r0) of the linearized radial equation
// u'' + (d-1)/r u' = omega u: K0(sqrt(omega) r) for d=2, e^{-sqrt(omega) r}/r for d=3.
double tail_ratio(int d, double sqrt_omega, double r, double r0) {
    const double z = sqrt_omega * r, z0 = sqrt_omega * r0;
    if (d == 2)
        return std::exp(z0 - z) * (k0_scaled(z) / k0_scaled(z0)) * std::sqrt(z0 / z);
    return std::exp(z0 - z) * (r0 / r);
}

struct Rhs {
    int d;
    double p;
    double omega;
    double cp; // 1 for the full equation, 0 for the critical q-equation

    // u'' = g(u) - (d-1)/r u'  with  g(u) = omega u + cp u^p - u^{1+4/d}
    double g(double u) const {
        const double au = std::abs(u);
        const double fd = 4.0 / d;
        return omega * u + cp * std::pow(au, p - 1.0) * u - std::pow(au, fd) * u;
    }
    double gprime(double u) const {
        const double au = std::abs(u);
        const double fd = 4.0 / d;
        return omega + cp * p * std::pow(au, p - 1.0) - (1.0 + fd) * std::pow(au, fd);
    }
};

enum class Shot { Crossed, Turned, Decayed };

// Integrate from the regularized origin; returns classification and fills
// `out` (if non-null) with u on the nodes actually reached.
Shot integrate_shot(const Rhs& rhs, double a, double r_max, int n, const ShootOptions& opts,
                    std::vector<double>* out) {
    const double dr = r_max / n;
    const int d = rhs.d;
    if (out) {
        out->assign(n + 1, 0.0);
        (*out)[0] = a;
    }
    // series start u = a + b r^2 + c r^4 removes the (d-1)/r singularity
    const double b = rhs.g(a) / (2.0 * d);
    const double c = rhs.gprime(a) * rhs.g(a) / (8.0 * d * (d + 2.0));
    double u = a + b * dr * dr + c * dr * dr * dr * dr;
    double w = 2.0 * b * dr + 4.0 * c * dr * dr * dr;
    if (out) (*out)[1] = u;

    auto fu = [&](double r, double uu, double ww) { return rhs.g(uu) - (d - 1) / r * ww; };
    for (int i = 1; i < n; ++i) {
        const double r = i * dr;
        const double k1u = w, k1w = fu(r, u, w);
        const double k2u = w + 0.5 * dr * k1w, k2w = fu(r + 0.5 * dr, u + 0.5 * dr * k1u, w + 0.5 * dr * k1w);
        const double k3u = w + 0.5 * dr * k2w, k3w = fu(r + 0.5 * dr, u + 0.5 * dr * k2u, w + 0.5 * dr * k2w);
        const double k4u = w + dr * k3w, k4w = fu(r + dr, u + dr * k3u, w + dr * k3w);
        u += dr / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
        w += dr / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
        if (out) (*out)[i + 1] = u;
        if (u < 0.0) return Shot::Crossed;
        if (u > opts.diverge_factor * a) return Shot::Turned;
        if (w > 0.0 && u > opts.turn_threshold * a) return Shot::Turned;
    }
    return Shot::Decayed;
}

// Positive zeros of chi(s) = s^{4/d} - cp s^{p-1} - omega bracketing the
// admissible peak amplitudes. For cp=0 only the balance point exists.
struct AmplitudeWindow {
    double lo = 0.0;
    double hi = 0.0;
    bool bounded = true;
};

AmplitudeWindow amplitude_window(const Rhs& rhs) {
    const double fd = 4.0 / rhs.d;
    if (rhs.cp == 0.0) {
        // chi(s) = s^{4/d} - omega, single zero; peaks are unbounded above
        return {std::pow(rhs.omega, 1.0 / fd), 0.0, false};
    }
    auto chi = [&](double s) {
        return std::pow(s, fd) - std::pow(s, rhs.p - 1.0) - rhs.omega;
    };
    const double s_star = std::pow(fd / (rhs.p - 1.0), 1.0 / (rhs.p - 1.0 - fd));
    if (!(chi(s_star) > 0.0)) throw BracketFailure("no admissible amplitude window");
    auto bisect_zero = [&](double lo, double hi, bool rising) {
        for (int it = 0; it < 200 && (hi - lo) > 1e-15 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            const bool pos = chi(mid) > 0.0;
            if (pos == rising) hi = mid;
            else lo = mid;
        }
        return 0.5 * (lo + hi);
    };
    // chi < 0 near 0 and for large s; rises through s_lo, falls through s_hi
    double tiny = s_star;
    while (chi(tiny) > 0.0) tiny *= 0.5;
    const double s_lo = bisect_zero(tiny, s_star, true);
    double big = s_star;
    while (chi(big) > 0.0) big *= 2.0;
    double lo = s_star, hi = big;
    for (int it = 0; it < 200 && (hi - lo) > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (chi(mid) > 0.0) lo = mid;
        else hi = mid;
    }
    const double s_hi = 0.5 * (lo + hi);
    return {s_lo, s_hi, true};
}

struct Bracket {
    double lo = 0.0; // turned
    double hi = 0.0; // crossed
};

Bracket find_bracket(const Rhs& rhs, double r_max, int n, const ShootOptions& opts) {
    const AmplitudeWindow win = amplitude_window(rhs);
    auto classify = [&](double a) { return integrate_shot(rhs, a, r_max, n, opts, nullptr); };

    if (!win.bounded) {
        // critical q-equation: expand upward until a crossing appears
        double prev = win.lo * 1.05;
        Shot prev_cls = classify(prev);
        for (int j = 0; j < opts.bracket_steps; ++j) {
            const double a = prev * 1.15;
            const Shot cls = classify(a);
            if (prev_cls != Shot::Crossed && cls == Shot::Crossed) return {prev, a};
            prev = a;
            prev_cls = cls;
        }
        throw BracketFailure("no crossing found while expanding the peak amplitude");
    }

    double prev = 0.0;
    Shot prev_cls = Shot::Turned;
    bool have_prev = false;
    for (int j = 1; j <= opts.bracket_steps; ++j) {
        const double a = win.lo + (win.hi - win.lo) * j / (opts.bracket_steps + 1.0);
        const Shot cls = classify(a);
        if (have_prev && prev_cls != Shot::Crossed && cls == Shot::Crossed) return {prev, a};
        prev = a;
        prev_cls = cls;
        have_prev = true;
    }
    // flat-top regime near omega_p: the transition hugs the upper amplitude
    // zero; refine geometrically toward it
    double gap = (win.hi - win.lo) / (opts.bracket_steps + 1.0);
    double lo_a = win.hi - gap;
    Shot lo_cls = classify(lo_a);
    for (int j = 0; j < 40; ++j) {
        gap *= 0.5;
        const double a = win.hi - gap;
        const Shot cls = classify(a);
        if (lo_cls != Shot::Crossed && cls == Shot::Crossed) return {lo_a, a};
        lo_a = a;
        lo_cls = cls;
    }
    throw BracketFailure("no sign change in the amplitude scan");
}

RadialProfile shoot_impl(const ProblemParams& params, const Rhs& rhs, double omega_record,
                         double r_max, int n_nodes, const ShootOptions& opts) {
    if (n_nodes < 16 || n_nodes % 2 != 0)
        throw InvalidArgument("n_nodes must be even and >= 16");
    Bracket br = find_bracket(rhs, r_max, n_nodes, opts);
    while (br.hi - br.lo > opts.bisect_rel_width * br.hi) {
        const double mid = 0.5 * (br.lo + br.hi);
        if (integrate_shot(rhs, mid, r_max, n_nodes, opts, nullptr) == Shot::Crossed)
            br.hi = mid;
        else
            br.lo = mid;
    }
    const double a = 0.5 * (br.lo + br.hi);

    std::vector<double> u;
    integrate_shot(rhs, a, r_max, n_nodes, opts, &u);

    // replace the separatrix-unstable tail by the linear far field
    const double dr = r_max / n_nodes;
    const double sqrt_omega = std::sqrt(rhs.omega);
    int istar = -1;
    for (int i = 1; i <= n_nodes; ++i) {
        if (u[i] <= 0.0) break;
        if (u[i] < opts.graft_threshold * a && u[i] < u[i - 1]) {
            istar = i;
            break;
        }
    }
    if (istar < 0) throw ShootFailure("trajectory never reached the graft threshold");
    for (int i = istar + 1; i <= n_nodes; ++i)
        u[i] = u[istar] * tail_ratio(params.d, sqrt_omega, i * dr, istar * dr);

    RadialProfile prof;
    prof.params = params;
    prof.omega = omega_record;
    prof.r_max = r_max;
    prof.n_nodes = n_nodes;
    prof.values = std::move(u);
    prof.center_value = a;
    prof.mass = profile_mass(prof);
    prof.validate();
    return prof;
}

} // namespace

void ProblemParams::validate() const {
    if (critical_only()) {
        if (d != 2 && d != 3) throw InvalidArgument("d must be 2 or 3");
        return;
    }
    validate_exponents(d, p);
}

void RadialProfile::validate() const {
    if (static_cast<int>(values.size()) != n_nodes + 1)
        throw ShootFailure("profile node count mismatch");
    for (int i = 0; i <= n_nodes; ++i) {
        if (!(values[i] > 0.0)) throw ShootFailure("profile not strictly positive");
        if (i >= 2 && !(values[i] < values[i - 1]))
            throw ShootFailure("profile not strictly decreasing");
    }
    if (!(values[n_nodes] < 1e-8 * center_value))
        throw ShootFailure("tail not small enough; increase r_max");
}

double omega_p(const ProblemParams& params) {
    params.validate();
    if (params.critical_only()) throw InvalidArgument("omega_p needs the full equation");
    const double fd = 4.0 / params.d;
    const double p = params.p;
    const double pref = 2.0 * (p - 1.0 - fd) / ((2.0 + fd) * (p - 1.0));
    const double base = (p + 1.0) * fd / ((2.0 + fd) * (p - 1.0));
    return pref * std::pow(base, fd / (p - 1.0 - fd));
}

bool existence_check(const ProblemParams& params, double omega) {
    params.validate();
    if (!(omega > 0.0)) throw InvalidArgument("omega must be positive");
    const double fd = 4.0 / params.d;
    const double p = params.p;
    auto F = [&](double z) {
        return std::pow(z, 2.0 + fd) / (2.0 + fd) - std::pow(z, p + 1.0) / (p + 1.0) -
               0.5 * omega * z * z;
    };
    // stationary points of F' solve chi(s) = s^{4/d} - s^{p-1} - omega = 0
    Rhs rhs{params.d, p, omega, 1.0};
    try {
        const AmplitudeWindow win = amplitude_window(rhs);
        return F(win.hi) > 0.0; // F increases across the window; max is at s_hi
    } catch (const BracketFailure&) {
        return false;
    }
}

RadialProfile shoot_profile(const ProblemParams& params, double omega, double r_max,
                            int n_nodes, const ShootOptions& opts) {
    params.validate();
    if (params.critical_only()) throw InvalidArgument("use solve_q for the critical equation");
    if (!(omega > 0.0 && omega < omega_p(params)))
        throw BracketFailure("omega outside the existence window (0, omega_p)");
    if (!(r_max >= 12.0 / std::sqrt(omega)))
        throw InvalidArgument("r_max must be at least 12/sqrt(omega)");
    Rhs rhs{params.d, params.p, omega, 1.0};
    return shoot_impl(params, rhs, omega, r_max, n_nodes, opts);
}

RadialProfile solve_q(int d, double r_max, int n_nodes, const ShootOptions& opts) {
    ProblemParams params{d, 0.0};
    params.validate();
    Rhs rhs{d, 0.0, 1.0, 0.0};
    return shoot_impl(params, rhs, 1.0, r_max, n_nodes, opts);
}

double radial_integral(const std::vector<double>& f, double dr, int d) {
    const int n = static_cast<int>(f.size()) - 1;
    if (n < 2 || n % 2 != 0) throw InvalidArgument("radial integral needs an even node count");
    const double ang = (d == 2) ? 2.0 * std::numbers::pi : 4.0 * std::numbers::pi;
    auto weighted = [&](int i) { return f[i] * std::pow(i * dr, d - 1); };
    // composite Simpson, pairwise over panels
    const double s = pairwise_map_sum(static_cast<std::size_t>(n / 2), [&](std::size_t m) {
        const int i = static_cast<int>(2 * m);
        return weighted(i) + 4.0 * weighted(i + 1) + weighted(i + 2);
    });
    return ang * s * dr / 3.0;
}

double profile_mass(const RadialProfile& profile) {
    std::vector<double> f(profile.values.size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = profile.values[i] * profile.values[i];
    return radial_integral(f, profile.dr(), profile.params.d);
}

std::vector<double> radial_derivative(const std::vector<double>& u, double dr) {
    const int n = static_cast<int>(u.size()) - 1;
    std::vector<double> du(u.size());
    for (int i = 2; i <= n - 2; ++i)
        du[i] = (u[i - 2] - 8.0 * u[i - 1] + 8.0 * u[i + 1] - u[i + 2]) / (12.0 * dr);
    auto one_sided = [&](int i, int s) {
        // 4-point one-sided, 3rd order
        return s * (-11.0 * u[i] + 18.0 * u[i + s] - 9.0 * u[i + 2 * s] + 2.0 * u[i + 3 * s]) /
               (6.0 * dr);
    };
    du[0] = one_sided(0, +1);
    du[1] = one_sided(1, +1);
    du[n - 1] = one_sided(n - 1, -1);
    du[n] = one_sided(n, -1);
    return du;
}

std::array<double, 2> pohozaev_residuals(const RadialProfile& profile) {
    const ProblemParams& pp = profile.params;
    if (pp.critical_only())
        throw InvalidArgument("pohozaev residuals apply to the full equation");
    const int d = pp.d;
    const double p = pp.p;
    const double fd = 4.0 / d;
    const double dr = profile.dr();
    const auto& u = profile.values;

    std::vector<double> tmp(u.size());
    const auto du = radial_derivative(u, dr);
    for (std::size_t i = 0; i < u.size(); ++i) tmp[i] = du[i] * du[i];
    const double G = radial_integral(tmp, dr, d);
    for (std::size_t i = 0; i < u.size(); ++i) tmp[i] = std::pow(u[i], 2.0 + fd);
    const double A = radial_integral(tmp, dr, d);
    for (std::size_t i = 0; i < u.size(); ++i) tmp[i] = std::pow(u[i], p + 1.0);
    const double B = radial_integral(tmp, dr, d);
    const double M = profile.mass;
    const double om = profile.omega;

    // identity with the |u|^{p+1} term eliminated
    const double c1 = 2.0 * d / (p + 1.0) + 2.0 - d;
    const double c2 = d * d / (d + 2.0) - 2.0 * d / (p + 1.0);
    const double c3 = (2.0 * d / (p + 1.0) - d) * om;
    const double r1 = std::abs(c1 * G + c2 * A + c3 * M) /
                      std::max({std::abs(c1 * G), std::abs(c2 * A), std::abs(c3 * M)});
    // I(u) = 0
    const double t1 = 2.0 * G, t2 = 2.0 * d / (d + 2.0) * A,
                 t3 = (p - 1.0) / (p + 1.0) * d * B;
    const double r2 = std::abs(t1 - t2 + t3) / std::max({t1, t2, t3});
    return {r1, r2};
}

DecayFit decay_fit(const RadialProfile& profile) {
    const int n = profile.n_nodes;
    const int i0 = n / 2, i1 = 3 * n / 4;
    const double dr = profile.dr();
    for (int i = i0; i <= i1; ++i)
        if (!(profile.values[i] > 1e-14))
            throw TailUnderflow("tail window below 1e-14; reduce r_max");
    // least squares slope of -log u against r
    double sr = 0, sy = 0, srr = 0, sry = 0;
    const int m = i1 - i0 + 1;
    for (int i = i0; i <= i1; ++i) {
        const double r = i * dr, y = -std::log(profile.values[i]);
        sr += r;
        sy += y;
        srr += r * r;
        sry += r * y;
    }
    DecayFit fit;
    fit.fitted_rate = (m * sry - sr * sy) / (m * srr - sr * sr);
    fit.bound_rate = 0.5 * std::sqrt(profile.omega);
    return fit;
}

double interp_radial(const RadialProfile& profile, double r) {
    const int n = profile.n_nodes;
    const double dr = profile.dr();
    if (r >= (n - 2) * dr) return 0.0;
    double t = r / dr;
    int i = std::max(1, static_cast<int>(t));
    i = std::min(i, n - 3);
    const double s = t - i;
    auto at = [&](int j) { return profile.values[j < 0 ? -j : j]; }; // even at r=0
    const double um1 = at(i - 1), u0 = at(i), u1 = at(i + 1), u2 = at(i + 2);
    return u0 + 0.5 * s *
                    (u1 - um1 +
                     s * (2.0 * um1 - 5.0 * u0 + 4.0 * u1 - u2 +
                          s * (3.0 * (u0 - u1) + u2 - um1)));
}

ScalarField embed_profile(const RadialProfile& profile, const GridSpec& grid,
                          const SolitonSpec& spec, double t) {
    if (profile.params.d != 2 && !profile.params.critical_only())
        throw ParamMismatch("grid embedding supports d=2 dynamics");
    if (std::abs(profile.omega - spec.omega) > 1e-12 * std::max(1.0, std::abs(spec.omega)))
        throw ParamMismatch("profile omega differs from the soliton spec");
    const int n = grid.points_per_axis;
    const double L = grid.box_half_length;
    const double c1 = spec.x0[0] + spec.v[0] * t;
    const double c2 = spec.x0[1] + spec.v[1] * t;
    const double vsq = spec.v[0] * spec.v[0] + spec.v[1] * spec.v[1];
    const double phase_t = -0.25 * vsq * t + spec.omega * t + spec.gamma;
    auto wrap = [L](double x) {
        while (x >= L) x -= 2.0 * L;
        while (x < -L) x += 2.0 * L;
        return x;
    };
    ScalarField out(grid);
    for (int j = 0; j < n; ++j) {
        const double x = grid.coord(j);
        const double dx = wrap(x - c1);
        for (int k = 0; k < n; ++k) {
            const double y = grid.coord(k);
            const double dy = wrap(y - c2);
            const double amp = interp_radial(profile, std::sqrt(dx * dx + dy * dy));
            if (amp == 0.0) continue;
            const double phase = 0.5 * (spec.v[0] * x + spec.v[1] * y) + phase_t;
            out.at(j, k) = std::polar(amp, phase);
        }
    }
    return out;
}

} // namespace solitonlab
