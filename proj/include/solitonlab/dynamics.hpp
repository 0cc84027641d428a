#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "solitonlab/functionals.hpp"
#include "solitonlab/groundstate.hpp"

namespace solitonlab {

// K-soliton configuration. Velocities must have strictly increasing first
// components; sigmas are the midpoints (v_{k-1,1}+v_{k,1})/2 separating the
// moving half-planes of the localized quantities.
struct MultiSolitonConfig {
    std::vector<SolitonSpec> specs;
    double cutoff_width = 4.0;

    std::vector<double> sigmas() const;
    double theta0() const; // (min{velocity gaps, sqrt(omega_k)} / 16)^2
    void validate() const;
};

struct EvolutionTrace {
    std::vector<double> times;
    std::vector<double> mass_series;
    std::vector<double> energy_series;
    std::vector<std::array<double, 2>> momentum_series;
    std::vector<double> residual_series;
    std::vector<std::vector<double>> localized_mass_series;     // [probe][k]
    std::vector<std::vector<std::array<double, 2>>> localized_momentum_series;
    std::vector<std::pair<double, ScalarField>> snapshots;
};

struct ProbeConfig {
    double probe_dt = 0.1;
    int snapshot_stride = 0; // in probes; 0 disables snapshots
    std::function<double(const ScalarField&, double)> residual;
    std::function<void(const ScalarField&, double, EvolutionTrace&)> extra;
};

// One Strang step: exact nonlinear phase half-step, exact linear Fourier
// step, second half-step. Unitary in L^2 at machine precision.
ScalarField step_strang(const ScalarField& field, double dt, const ProblemParams& params);

// Linear Schrodinger step only (Fourier multiplier e^{-i dt |k|^2}).
ScalarField step_linear(const ScalarField& field, double dt);

// March from t0 to t1 (backward allowed when t1 < t0 and dt < 0), sampling
// the conserved quantities at the probe stride.
EvolutionTrace evolve(const ScalarField& field, double t0, double t1, double dt,
                      const ProblemParams& params, const ProbeConfig& probes);

// inf over (theta, y) of |phi - e^{i theta} Q(. + y)|_{H^1}: correlation-peak
// initialization in Fourier space, then coordinate refinement of the shift
// with the phase closed in analytic form.
struct ModulationResult {
    double distance = 0.0;
    double theta = 0.0;
    std::array<double, 2> y{0.0, 0.0};
};
ModulationResult modulated_distance(const ScalarField& field, const RadialProfile& profile);

ScalarField build_multisoliton(const MultiSolitonConfig& config,
                               const std::vector<RadialProfile>& profiles,
                               const GridSpec& grid, double t);

// The C^3 monotone cutoff: 0 below -1, 1 above 1, quartic matching near the
// ends, septic Hermite blend between.
double cutoff_y(double s);

// Localized masses I_k = int |phi|^2 y_k and momenta M_k = Im int grad(phi)
// conj(phi) y_k with the moving thresholds sigma_k t.
struct LocalizedQuantities {
    std::vector<double> masses;
    std::vector<std::array<double, 2>> momenta;
};
LocalizedQuantities localized_quantities(const ScalarField& field,
                                         const MultiSolitonConfig& config, double t);

struct ExperimentOptions {
    double probe_dt = 0.25;
    std::uint64_t seed = 20240817;
    int snapshot_stride = 0;
    bool backward = false; // integrate from the ansatz at T back to 0
};

// Perturbed-soliton run; residual_series is the modulated distance to Q_omega.
EvolutionTrace stability_experiment(const RadialProfile& profile, double perturbation_size,
                                    double T, const ProblemParams& params,
                                    const GridSpec& grid, double dt,
                                    const ExperimentOptions& opts = {});

// Multi-soliton run; residual_series is |phi(t) - R(t)|_{H^1} against the
// exact ansatz, with the localized quantities recorded per probe.
EvolutionTrace multisoliton_experiment(const MultiSolitonConfig& config,
                                       const std::vector<RadialProfile>& profiles, double T,
                                       const ProblemParams& params, const GridSpec& grid,
                                       double dt, const ExperimentOptions& opts = {});

} // namespace solitonlab
