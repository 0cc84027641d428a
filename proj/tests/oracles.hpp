#pragma once

// Independent reference computations for the test suites. Everything here is
// deliberately implemented without touching the library's solver paths:
// different integrator (Cash-Karp 4(5) in long double), different bracket
// search, different quadrature (Boole's rule).

#include <complex>
#include <vector>

namespace oracle {

struct RadialSolution {
    long double center = 0.0L;
    long double mass = 0.0L; // int u^2 r^{d-1} dr * angular factor
};

// Decaying positive solution of u'' + (d-1)/r u' + u^{1+4/d} - cp u^p - omega u = 0.
RadialSolution shoot_reference(int d, double p, double omega, bool critical,
                               double r_max, int steps);

// H^1 inner product pieces by direct O(N^4) discrete Fourier sums (small N only).
double h1_sq_direct(const std::vector<std::complex<double>>& v, int n, double L);

// Free-Schrodinger Gaussian: i phi_t + lap phi = 0, phi(0) = e^{-|x|^2/2}, d=2.
std::complex<double> free_gaussian(double t, double x, double y);

} // namespace oracle
