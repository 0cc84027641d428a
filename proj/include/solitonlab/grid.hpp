#pragma once

#include <array>
#include <complex>
#include <vector>

#include "solitonlab/errors.hpp"
#include "solitonlab/reduce.hpp"

namespace solitonlab {

using cplx = std::complex<double>;

// Uniform periodic square grid on [-L, L)^2 with N points per axis.
struct GridSpec {
    double box_half_length = 0.0; // L
    int points_per_axis = 0;      // N, power of two, >= 16

    double spacing() const { return 2.0 * box_half_length / points_per_axis; }
    std::size_t size() const {
        return static_cast<std::size_t>(points_per_axis) * points_per_axis;
    }
    double coord(int j) const { return -box_half_length + j * spacing(); }

    bool operator==(const GridSpec&) const = default;
};

GridSpec make_grid(double box_half_length, int points_per_axis);

// Complex scalar field phi(x) sampled row-major: index (j,k) -> x=(coord(j), coord(k)).
struct ScalarField {
    GridSpec grid;
    std::vector<cplx> v;

    ScalarField() = default;
    explicit ScalarField(const GridSpec& g) : grid(g), v(g.size(), cplx{0.0, 0.0}) {}

    cplx& at(int j, int k) { return v[static_cast<std::size_t>(j) * grid.points_per_axis + k]; }
    const cplx& at(int j, int k) const {
        return v[static_cast<std::size_t>(j) * grid.points_per_axis + k];
    }
};

bool all_finite(const ScalarField& f);

// Wavenumbers of the 2L-periodic box: k[m] = (pi/L) * m~ with m~ the signed
// index. deriv[m] is the first-derivative multiplier with the Nyquist mode
// zeroed; k2 keeps the full |k|^2 (used in unitary Fourier multipliers).
struct WaveNumbers {
    std::vector<double> deriv;
    std::vector<double> k2_axis;
};
const WaveNumbers& wavenumbers(const GridSpec& g);

// Unnormalized forward DFT (FFTW sign convention e^{-i k x}); inverse applies 1/N^2.
std::vector<cplx> fft2(const ScalarField& f);
ScalarField ifft2(const GridSpec& g, std::vector<cplx> spectrum);

// Spectral first derivatives (Nyquist zeroed); d/dx1 and d/dx2.
std::array<ScalarField, 2> gradient(const ScalarField& f);

// int |grad phi|^2 dx evaluated in Fourier space with the derivative convention.
double grad_sq_integral(const ScalarField& f);

// Plain Riemann quadrature sum(f) * h^2 over the grid, pairwise-reduced.
template <class F>
double integrate_grid(const ScalarField& f, const F& fn) {
    const double cell = f.grid.spacing() * f.grid.spacing();
    return cell * pairwise_map_sum(f.v.size(), [&](std::size_t i) { return fn(f.v[i]); });
}

// Translate by y (continuous shift, Fourier phase): returns phi(. - y).
ScalarField fourier_shift(const ScalarField& f, double y1, double y2);

// Sample the band-limited interpolant at the scaled lattice lam*x (separable
// trigonometric evaluation); used by the Pohozaev rescaling.
ScalarField resample_scaled(const ScalarField& f, double lam);

// max boundary-row amplitude / max amplitude; the CLI warns above 1e-8.
double boundary_amplitude_ratio(const ScalarField& f);

// Deterministic band-limited complex noise (|mode index| <= kmax_index),
// normalized to unit H^1 norm. Bit-stable across platforms (explicit
// Box-Muller over mt19937_64 draws).
ScalarField band_limited_noise(const GridSpec& g, std::uint64_t seed, int kmax_index);

} // namespace solitonlab
