#pragma once

#include <array>
#include <optional>
#include <vector>

#include "solitonlab/grid.hpp"

namespace solitonlab {

// Exponent window: d in {2,3}, 1 + 4/d < p (< (d+2)/(d-2) for d=3).
// p == 0 is the sentinel for the critical equation solved by q, which has no
// defocusing power.
struct ProblemParams {
    int d = 2;
    double p = 5.0;

    bool critical_only() const { return p == 0.0; }
    void validate() const;

    bool operator==(const ProblemParams&) const = default;
};

// Real radial profile u(r_i), r_i = i * dr, dr = r_max / n_nodes.
// values.size() == n_nodes + 1. Positive, decaying; houses Q_omega and q.
struct RadialProfile {
    ProblemParams params;
    double omega = 0.0;
    double r_max = 0.0;
    int n_nodes = 0;
    std::vector<double> values;
    double center_value = 0.0;
    double mass = 0.0; // int u^2 with the d-dimensional radial weight

    double dr() const { return r_max / n_nodes; }
    void validate() const; // positivity, monotone decay, small tail
};

struct DecayFit {
    double fitted_rate = 0.0; // least-squares slope of -log u on the tail window
    double bound_rate = 0.0;  // sqrt(omega)/2, the bound of the decay estimate
};

struct ShootOptions {
    int bracket_steps = 64;
    double bisect_rel_width = 1e-13;
    double diverge_factor = 1.5;     // diverge when u > factor * a
    double turn_threshold = 1e-8;    // "turned upward" while u > threshold * a
    double graft_threshold = 1e-6;   // switch to the linear far-field below this * a
};

// Closed-form existence threshold omega_p of the stationary equation.
double omega_p(const ProblemParams& params);

// True iff max_{zeta>0} [zeta^{2+4/d}/(2+4/d) - zeta^{p+1}/(p+1) - omega zeta^2/2] > 0.
bool existence_check(const ProblemParams& params, double omega);

// Shooting solution of u'' + (d-1)/r u' + u^{1+4/d} - u^p - omega u = 0.
RadialProfile shoot_profile(const ProblemParams& params, double omega, double r_max,
                            int n_nodes, const ShootOptions& opts = {});

// Shooting solution of u'' + (d-1)/r u' + u^{1+4/d} - u = 0 (omega recorded as 1).
RadialProfile solve_q(int d, double r_max, int n_nodes, const ShootOptions& opts = {});

// Normalized residuals of the two solution identities tied to the stationary
// equation (gradient/nonlinear-power balance and the vanishing of I).
std::array<double, 2> pohozaev_residuals(const RadialProfile& profile);

DecayFit decay_fit(const RadialProfile& profile);

// One soliton of the travelling ansatz: parameters (omega, x0, v, gamma).
struct SolitonSpec {
    double omega = 0.0;
    std::array<double, 2> x0{0.0, 0.0};
    std::array<double, 2> v{0.0, 0.0};
    double gamma = 0.0;
};

// Q_omega(|x - x0 - v t|) e^{i(v.x/2 - |v|^2 t/4 + omega t + gamma)} sampled on
// the grid; cubic interpolation of the radial samples, zero beyond r_max.
ScalarField embed_profile(const RadialProfile& profile, const GridSpec& grid,
                          const SolitonSpec& spec, double t);

// Radial quadrature helpers (composite Simpson with weight r^{d-1} and the
// full angular factor). f is sampled on the profile nodes.
double radial_integral(const std::vector<double>& f, double dr, int d);
double profile_mass(const RadialProfile& profile);

// 4th-order finite-difference derivative on the radial nodes.
std::vector<double> radial_derivative(const std::vector<double>& u, double dr);

// Cubic interpolation of radial samples (even reflection at 0, zero past the tail).
double interp_radial(const RadialProfile& profile, double r);

} // namespace solitonlab
