#include "solitonlab/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <numbers>
#include <random>

namespace solitonlab {

namespace {

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// FFTW plans are cached per N and created with FFTW_ESTIMATE so planning is
// deterministic run to run. FFTW_UNALIGNED lets the plans execute on any
// caller buffer. Plan creation is serialized; execution is thread-safe.
struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

PlanPair& plans_for(int n) {
    static std::mutex mtx;
    static std::map<int, PlanPair> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<cplx> buf(static_cast<std::size_t>(n) * n);
    auto* p = reinterpret_cast<fftw_complex*>(buf.data());
    PlanPair pp;
    pp.fwd = fftw_plan_dft_2d(n, n, p, p, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    pp.bwd = fftw_plan_dft_2d(n, n, p, p, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    return cache.emplace(n, pp).first->second;
}

} // namespace

GridSpec make_grid(double box_half_length, int points_per_axis) {
    if (!(box_half_length > 0.0))
        throw InvalidArgument("box half-length must be positive");
    if (points_per_axis < 16 || !power_of_two(points_per_axis))
        throw InvalidArgument("points per axis must be a power of two >= 16");
    return GridSpec{box_half_length, points_per_axis};
}

bool all_finite(const ScalarField& f) {
    for (const cplx& z : f.v)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

const WaveNumbers& wavenumbers(const GridSpec& g) {
    static std::mutex mtx;
    static std::map<std::pair<double, int>, WaveNumbers> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto key = std::make_pair(g.box_half_length, g.points_per_axis);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    const int n = g.points_per_axis;
    const double base = std::numbers::pi / g.box_half_length;
    WaveNumbers w;
    w.deriv.resize(n);
    w.k2_axis.resize(n);
    for (int m = 0; m < n; ++m) {
        const int ms = (m <= n / 2 - 1) ? m : m - n;
        const double k = base * ms;
        w.k2_axis[m] = k * k;
        w.deriv[m] = (m == n / 2) ? 0.0 : k; // Nyquist derivative zeroed
    }
    return cache.emplace(key, std::move(w)).first->second;
}

std::vector<cplx> fft2(const ScalarField& f) {
    std::vector<cplx> out = f.v;
    auto* p = reinterpret_cast<fftw_complex*>(out.data());
    fftw_execute_dft(plans_for(f.grid.points_per_axis).fwd, p, p);
    return out;
}

ScalarField ifft2(const GridSpec& g, std::vector<cplx> spectrum) {
    ScalarField out(g);
    out.v = std::move(spectrum);
    auto* p = reinterpret_cast<fftw_complex*>(out.v.data());
    fftw_execute_dft(plans_for(g.points_per_axis).bwd, p, p);
    const double scale = 1.0 / static_cast<double>(g.size());
    for (cplx& z : out.v) z *= scale;
    return out;
}

std::array<ScalarField, 2> gradient(const ScalarField& f) {
    const int n = f.grid.points_per_axis;
    const auto& w = wavenumbers(f.grid);
    std::vector<cplx> spec = fft2(f);
    std::vector<cplx> sx(spec.size()), sy(spec.size());
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            const std::size_t i = static_cast<std::size_t>(j) * n + k;
            sx[i] = cplx(0.0, w.deriv[j]) * spec[i];
            sy[i] = cplx(0.0, w.deriv[k]) * spec[i];
        }
    }
    return {ifft2(f.grid, std::move(sx)), ifft2(f.grid, std::move(sy))};
}

double grad_sq_integral(const ScalarField& f) {
    const int n = f.grid.points_per_axis;
    const auto& w = wavenumbers(f.grid);
    std::vector<cplx> spec = fft2(f);
    // Parseval: sum |k|^2 |phi_hat|^2 * h^2 / N^2, with the derivative k-grid.
    const double cell = f.grid.spacing() * f.grid.spacing() / f.grid.size();
    const double s = pairwise_map_sum(spec.size(), [&](std::size_t i) {
        const int j = static_cast<int>(i) / n;
        const int k = static_cast<int>(i) % n;
        const double k2 = w.deriv[j] * w.deriv[j] + w.deriv[k] * w.deriv[k];
        return k2 * std::norm(spec[i]);
    });
    return cell * s;
}

ScalarField fourier_shift(const ScalarField& f, double y1, double y2) {
    const int n = f.grid.points_per_axis;
    const auto& w = wavenumbers(f.grid);
    std::vector<cplx> spec = fft2(f);
    std::vector<cplx> ph1(n), ph2(n);
    for (int m = 0; m < n; ++m) {
        ph1[m] = std::polar(1.0, -w.deriv[m] * y1);
        ph2[m] = std::polar(1.0, -w.deriv[m] * y2);
    }
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            spec[static_cast<std::size_t>(j) * n + k] *= ph1[j] * ph2[k];
    return ifft2(f.grid, std::move(spec));
}

ScalarField resample_scaled(const ScalarField& f, double lam) {
    const int n = f.grid.points_per_axis;
    const double L = f.grid.box_half_length;
    const double h = f.grid.spacing();
    std::vector<cplx> spec = fft2(f);
    // Evaluation phases e^{2 pi i m j'/N} at fractional indices j' = (lam x_j + L)/h.
    std::vector<cplx> E(static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j) {
        const double frac = (lam * f.grid.coord(j) + L) / h;
        for (int m = 0; m < n; ++m) {
            const int ms = (m <= n / 2 - 1) ? m : m - n;
            E[static_cast<std::size_t>(j) * n + m] =
                std::polar(1.0, 2.0 * std::numbers::pi * ms * frac / n);
        }
    }
    // tmp(j', k2) = sum_m E(j',m) spec(m, k2)
    std::vector<cplx> tmp(static_cast<std::size_t>(n) * n, cplx{0, 0});
    for (int j = 0; j < n; ++j) {
        for (int m = 0; m < n; ++m) {
            const cplx e = E[static_cast<std::size_t>(j) * n + m];
            const cplx* src = &spec[static_cast<std::size_t>(m) * n];
            cplx* dst = &tmp[static_cast<std::size_t>(j) * n];
            for (int k = 0; k < n; ++k) dst[k] += e * src[k];
        }
    }
    // out(j', k') = sum_m tmp(j', m) E(k', m)
    ScalarField out(f.grid);
    for (int j = 0; j < n; ++j) {
        const cplx* row = &tmp[static_cast<std::size_t>(j) * n];
        for (int k = 0; k < n; ++k) {
            cplx acc{0, 0};
            const cplx* e = &E[static_cast<std::size_t>(k) * n];
            for (int m = 0; m < n; ++m) acc += row[m] * e[m];
            out.at(j, k) = acc / static_cast<double>(f.grid.size());
        }
    }
    return out;
}

double boundary_amplitude_ratio(const ScalarField& f) {
    const int n = f.grid.points_per_axis;
    double peak = 0.0, edge = 0.0;
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            const double a = std::abs(f.at(j, k));
            peak = std::max(peak, a);
            if (j == 0 || k == 0) edge = std::max(edge, a);
        }
    return peak > 0.0 ? edge / peak : 0.0;
}

ScalarField band_limited_noise(const GridSpec& g, std::uint64_t seed, int kmax_index) {
    const int n = g.points_per_axis;
    std::mt19937_64 rng(seed);
    auto uniform01 = [&rng]() {
        return (rng() >> 11) * 0x1.0p-53; // 53-bit uniform in [0,1)
    };
    std::vector<cplx> spec(g.size(), cplx{0, 0});
    for (int j = 0; j < n; ++j) {
        const int mj = (j <= n / 2 - 1) ? j : j - n;
        for (int k = 0; k < n; ++k) {
            const int mk = (k <= n / 2 - 1) ? k : k - n;
            if (mj * mj + mk * mk > kmax_index * kmax_index) continue;
            // explicit Box-Muller keeps the stream implementation-independent
            const double u1 = std::max(uniform01(), 1e-300);
            const double u2 = uniform01();
            const double r = std::sqrt(-2.0 * std::log(u1));
            spec[static_cast<std::size_t>(j) * n + k] =
                cplx(r * std::cos(2.0 * std::numbers::pi * u2),
                     r * std::sin(2.0 * std::numbers::pi * u2));
        }
    }
    ScalarField noise = ifft2(g, std::move(spec));
    double nrm = std::sqrt(integrate_grid(noise, [](const cplx& z) { return std::norm(z); }) +
                           grad_sq_integral(noise));
    if (nrm == 0.0) throw DegenerateInput("noise field is identically zero");
    for (cplx& z : noise.v) z /= nrm;
    return noise;
}

} // namespace solitonlab
