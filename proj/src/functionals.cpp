#include "solitonlab/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace solitonlab {

void validate_exponents(int d, double p) {
    if (d != 2 && d != 3) throw InvalidArgument("d must be 2 or 3");
    if (!(p > 1.0 + 4.0 / d))
        throw InvalidExponent("need p > 1 + 4/d");
    if (d == 3 && !(p < 5.0))
        throw InvalidExponent("need p < (d+2)/(d-2) for d=3");
}

FunctionalReport compute_functionals(const ScalarField& field, int d, double p) {
    validate_exponents(d, p);
    if (!all_finite(field)) throw InvalidField("non-finite field entries");

    const double fd = 4.0 / d;
    FunctionalReport r;
    r.mass = integrate_grid(field, [](const cplx& z) { return std::norm(z); });
    const double grad = grad_sq_integral(field);
    const double a_int =
        integrate_grid(field, [&](const cplx& z) { return std::pow(std::abs(z), 2.0 + fd); });
    const double b_int =
        integrate_grid(field, [&](const cplx& z) { return std::pow(std::abs(z), p + 1.0); });

    r.energy = grad - a_int / (1.0 + 2.0 / d) + 2.0 / (p + 1.0) * b_int;
    r.pohozaev = 2.0 * grad - 2.0 * d / (d + 2.0) * a_int + (p - 1.0) / (p + 1.0) * d * b_int;
    r.h1_sq = r.mass + grad;

    const auto gr = gradient(field);
    const double cell = field.grid.spacing() * field.grid.spacing();
    for (int c = 0; c < 2; ++c) {
        const auto& gc = gr[c].v;
        r.momentum[c] = cell * pairwise_map_sum(field.v.size(), [&](std::size_t i) {
            return std::imag(std::conj(field.v[i]) * gc[i]);
        });
    }
    return r;
}

double gn_ratio(const ScalarField& field, double q_mass, int d) {
    if (d != 2 && d != 3) throw InvalidArgument("d must be 2 or 3");
    if (!(q_mass > 0.0)) throw InvalidArgument("q_mass must be positive");
    const double fd = 4.0 / d;
    const double mass = integrate_grid(field, [](const cplx& z) { return std::norm(z); });
    const double grad = grad_sq_integral(field);
    if (mass == 0.0 || grad == 0.0)
        throw DivisionByZeroField("gn_ratio needs a nonzero field");
    const double lhs =
        integrate_grid(field, [&](const cplx& z) { return std::pow(std::abs(z), 2.0 + fd); });
    const double rhs = (2.0 + d) / d * std::pow(q_mass, -2.0 / d) * grad * std::pow(mass, 2.0 / d);
    return lhs / rhs;
}

ScalarField rearrange_decreasing(const ScalarField& field) {
    const int n = field.grid.points_per_axis;
    const std::size_t total = field.grid.size();

    std::vector<double> amp(total);
    for (std::size_t i = 0; i < total; ++i) amp[i] = std::abs(field.v[i]);
    std::sort(amp.begin(), amp.end(), std::greater<double>());

    // nodes sorted by squared distance from the origin, lexicographic tie-break
    std::vector<std::size_t> order(total);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<double> r2(total);
    for (std::size_t i = 0; i < total; ++i) {
        const double x = field.grid.coord(static_cast<int>(i) / n);
        const double y = field.grid.coord(static_cast<int>(i) % n);
        r2[i] = x * x + y * y;
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (r2[a] != r2[b]) return r2[a] < r2[b];
        return a < b;
    });

    ScalarField out(field.grid);
    for (std::size_t i = 0; i < total; ++i) out.v[order[i]] = cplx(amp[i], 0.0);
    return out;
}

double h1_norm(const ScalarField& f) {
    return std::sqrt(integrate_grid(f, [](const cplx& z) { return std::norm(z); }) +
                     grad_sq_integral(f));
}

double h1_distance(const ScalarField& a, const ScalarField& b) {
    if (!(a.grid == b.grid)) throw GridMismatch("h1_distance needs matching grids");
    ScalarField diff(a.grid);
    for (std::size_t i = 0; i < a.v.size(); ++i) diff.v[i] = a.v[i] - b.v[i];
    return h1_norm(diff);
}

} // namespace solitonlab
