#pragma once

#include <vector>

#include "solitonlab/groundstate.hpp"

namespace solitonlab {

enum class LinearizedBranch { Plus, Minus };

// Radial discretization of the operators linearized about Q_omega:
//   plus  potential: -(1+4/d) Q^{4/d} + p Q^{p-1}   (acts on the real part)
//   minus potential: -Q^{4/d} + Q^{p-1}             (acts on the imaginary part)
// Finite-volume form with measure r^{d-1} dr, Dirichlet at r_max, regularity
// cell at r=0 for l=0, Dirichlet at the origin for l>=1. The similarity
// transform by sqrt(weights) makes the tridiagonal matrix symmetric.
struct RadialOperator {
    ProblemParams params;
    double omega = 0.0;
    int angular_mode = 0;
    double dr = 0.0;
    int n_nodes = 0;
    int first_node = 0; // 0 for l=0, 1 for l>=1
    std::vector<double> potential_plus;
    std::vector<double> potential_minus;
    std::vector<double> weights; // finite-volume cell weights of the unknowns
};

struct SpectralReport {
    double omega = 0.0;
    std::vector<double> lowest_eigs_plus;    // l=0 block
    std::vector<double> lowest_eigs_plus_l1; // l=1 block
    std::vector<double> lowest_eigs_minus;   // l=0 block
    int n_negative_plus = 0;                 // eigenvalues below -1e-8, l=0 plus block
    double kernel_residual_minus = 0.0;      // |L- Q| / |Q|
    double kernel_residual_plus_translation = 0.0; // |L+(l=1) Q'| / |Q'|
    double vk_slope = 0.0;                   // centered dm/domega
    double dprime2 = 0.0;                    // equals vk_slope (D'' identity)
    double de_domega_residual = 0.0;         // |dE/dw + w dm/dw| / |dE/dw|
    double lambda_minus = 0.0;               // scalar of the pointwise eigen relation
    double lambda_minus_residual = 0.0;      // |L+ Q - lambda_- Q| / |Q|, reported as data
    std::string verdict;                     // "stable-candidate" or "unstable-candidate"
};

RadialOperator build_operators(const RadialProfile& profile, int angular_mode);

// Symmetric tridiagonal of the chosen branch: (diag, offdiag).
std::pair<std::vector<double>, std::vector<double>>
operator_tridiagonal(const RadialOperator& op, LinearizedBranch branch);

// k smallest eigenvalues by Sturm-sequence bisection (deterministic).
std::vector<double> lowest_eigs(const RadialOperator& op, int k,
                                LinearizedBranch branch = LinearizedBranch::Plus);

// Number of eigenvalues strictly below x.
int eigen_count_below(const std::vector<double>& diag, const std::vector<double>& off,
                      double x);

// Apply the raw 3-point stencil of the branch to samples of a radial function
// (the boundary sample enters instead of the Dirichlet zero, so applying the
// operator to the profile itself measures the true equation residual).
std::vector<double> apply_stencil(const RadialOperator& op, LinearizedBranch branch,
                                  const std::vector<double>& values);

// Weighted-norm residual |L v| / |v| with v sampled on the profile nodes.
double kernel_residual(const RadialOperator& op, LinearizedBranch branch,
                       const std::vector<double>& values);

std::vector<SpectralReport> vk_report(std::vector<RadialProfile> profiles, int n_eigs = 3);

} // namespace solitonlab
