#pragma once

#include <optional>
#include <string>
#include <vector>

#include "solitonlab/functionals.hpp"
#include "solitonlab/groundstate.hpp"

namespace solitonlab {

// One point of the mass-frequency map m(omega) = int Q_omega^2.
struct MassFrequencySample {
    double omega = 0.0;
    double mass = 0.0;
    double energy = 0.0;
    double d_value = 0.0; // E + omega M, the scalar D(omega)
    bool converged = false;
    std::string error; // error kind for skipped entries
};

struct FlowResult {
    ScalarField minimizer;
    double lagrange_omega = 0.0;
    double objective = 0.0;
    int iterations = 0;
    double residual = 0.0;
};

struct FlowOptions {
    int max_iter = 5000;
    double tol = 1e-8;          // fixed-point residual in H^1
    double alpha = 0.0;         // preconditioner shift; 0 = auto (omega scale)
    double tau_probe = 0.9;     // step used by the convergence probe (and initial tau)
    double omega_tol = 1e-6;    // multiplier matching in minimize_pohozaev
    int max_outer = 30;
};

// Gradient of E at u w.r.t. the real L^2 pairing: 2(-lap u - |u|^{4/d}u + |u|^{p-1}u).
ScalarField energy_gradient(const ScalarField& u, const ProblemParams& params);

// Cazenave-Lions problem: minimize E over int|u|^2 = m (m > int q^2) by a
// normalized, tangent-projected, (alpha - lap)^{-1}-preconditioned descent
// with monotone backtracking. The multiplier comes from the Rayleigh quotient.
FlowResult minimize_fixed_mass(double m, const ProblemParams& params, const GridSpec& grid,
                               double q_mass, const std::optional<ScalarField>& init = {},
                               const FlowOptions& opts = {});

// Root lambda0 of I(u_lambda) along u_lambda = lambda^{d/2} u(lambda x)
// (bisection on [1e-3, 1e3]) and the mass-preserving rescaled field.
std::pair<double, ScalarField> pohozaev_rescale(const ScalarField& field,
                                                const ProblemParams& params);

// Minimize E + omega M over the constraint set {I = 0, q_mass < M <= m_cap}.
// The stationary point with multiplier 0 for I is located by closing the loop
// on the fixed-mass Lagrange multiplier (secant on m inside the window), with
// a Pohozaev rescale applied to each outer iterate.
FlowResult minimize_pohozaev(double omega, double m_cap, const ProblemParams& params,
                             const GridSpec& grid, double q_mass,
                             const std::optional<ScalarField>& init = {},
                             const FlowOptions& opts = {});

// Shoot Q_omega per frequency and record (omega, m, E, D); failures are kept
// as non-converged entries. Sorted by omega.
std::vector<MassFrequencySample> mass_frequency_map(const std::vector<double>& omegas,
                                                    const ProblemParams& params,
                                                    double r_max_factor = 20.0,
                                                    int n_nodes = 20000);

// Smallest frequency whose ground state has supercritical mass, refined by
// bisection between the bracketing samples to `tol`.
double estimate_omega_q(const std::vector<MassFrequencySample>& map, double q_mass,
                        const ProblemParams& params, double tol = 1e-4,
                        double r_max_factor = 20.0, int n_nodes = 20000);

} // namespace solitonlab
