#pragma once

#include <array>

#include "solitonlab/grid.hpp"

namespace solitonlab {

// Conserved/variational quantities of one field:
//   mass     M = int |phi|^2
//   energy   E = int |grad phi|^2 - 1/(1+2/d) int |phi|^{2+4/d} + 2/(p+1) int |phi|^{p+1}
//   momentum P = Im int conj(phi) grad phi
//   pohozaev I = 2 int |grad phi|^2 - 2d/(d+2) int |phi|^{2+4/d} + (p-1)/(p+1) d int |phi|^{p+1}
struct FunctionalReport {
    double mass = 0.0;
    double energy = 0.0;
    std::array<double, 2> momentum{0.0, 0.0};
    double pohozaev = 0.0;
    double h1_sq = 0.0;
};

void validate_exponents(int d, double p);

FunctionalReport compute_functionals(const ScalarField& field, int d, double p);

// Ratio of the two sides of the sharp Gagliardo-Nirenberg inequality; <= 1,
// with equality exactly at the critical ground state q. q_mass = int q^2.
double gn_ratio(const ScalarField& field, double q_mass, int d);

// Discrete symmetric-decreasing rearrangement: |values| sorted descending,
// assigned to nodes ordered by distance from the origin (lexicographic
// tie-break). Output is real-valued.
ScalarField rearrange_decreasing(const ScalarField& field);

double h1_norm(const ScalarField& f);
double h1_distance(const ScalarField& a, const ScalarField& b);

} // namespace solitonlab
