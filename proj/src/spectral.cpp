#include "solitonlab/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace solitonlab {

namespace {

double conductance(double r_half, int d, double dr) {
    return std::pow(r_half, d - 1) / dr;
}

} // namespace

RadialOperator build_operators(const RadialProfile& profile, int angular_mode) {
    if (angular_mode < 0) throw InvalidArgument("angular mode must be >= 0");
    RadialOperator op;
    op.params = profile.params;
    op.omega = profile.omega;
    op.angular_mode = angular_mode;
    op.dr = profile.dr();
    op.n_nodes = profile.n_nodes;
    op.first_node = angular_mode == 0 ? 0 : 1;

    const int d = profile.params.d;
    const double p = profile.params.p;
    const double fd = 4.0 / d;
    const bool crit = profile.params.critical_only();
    op.potential_plus.resize(profile.values.size());
    op.potential_minus.resize(profile.values.size());
    for (std::size_t i = 0; i < profile.values.size(); ++i) {
        const double q = profile.values[i];
        const double qfd = std::pow(q, fd);
        const double qp = crit ? 0.0 : std::pow(q, p - 1.0);
        op.potential_plus[i] = -(1.0 + fd) * qfd + (crit ? 0.0 : p * qp);
        op.potential_minus[i] = -qfd + qp;
    }

    const int m = op.n_nodes - op.first_node; // unknowns: first_node .. n_nodes-1
    op.weights.resize(m);
    for (int j = 0; j < m; ++j) {
        const int i = op.first_node + j;
        op.weights[j] = (i == 0) ? std::pow(0.5 * op.dr, d) / d
                                 : std::pow(i * op.dr, d - 1) * op.dr;
    }
    return op;
}

std::pair<std::vector<double>, std::vector<double>>
operator_tridiagonal(const RadialOperator& op, LinearizedBranch branch) {
    const int d = op.params.d;
    const double dr = op.dr;
    const int i0 = op.first_node;
    const int m = op.n_nodes - i0;
    const auto& V = branch == LinearizedBranch::Plus ? op.potential_plus : op.potential_minus;
    const int ell = op.angular_mode;

    std::vector<double> diag(m), off(m - 1);
    for (int j = 0; j < m; ++j) {
        const int i = i0 + j;
        const double fr = conductance((i + 0.5) * dr, d, dr);
        // l=0 keeps the regularity cell at r=0 (no inner flux there);
        // l>=1 has a Dirichlet origin, so node 1 keeps its inner conductance.
        const double fl = (i == 0) ? 0.0 : conductance((i - 0.5) * dr, d, dr);
        double a = (fl + fr) / op.weights[j] + op.omega + V[i];
        if (ell > 0) {
            const double r = i * dr;
            a += ell * (ell + d - 2.0) / (r * r);
        }
        diag[j] = a;
        if (j + 1 < m)
            off[j] = -fr / std::sqrt(op.weights[j] * op.weights[j + 1]);
    }
    return {std::move(diag), std::move(off)};
}

int eigen_count_below(const std::vector<double>& diag, const std::vector<double>& off,
                      double x) {
    // Sturm sequence via the LDL^T recurrence
    int count = 0;
    double q = diag[0] - x;
    if (q < 0.0) ++count;
    for (std::size_t i = 1; i < diag.size(); ++i) {
        if (q == 0.0) q = -1e-300;
        q = diag[i] - x - off[i - 1] * off[i - 1] / q;
        if (q < 0.0) ++count;
    }
    return count;
}

std::vector<double> lowest_eigs(const RadialOperator& op, int k, LinearizedBranch branch) {
    if (k < 1 || k > 8) throw InvalidArgument("k must be in [1, 8]");
    auto [diag, off] = operator_tridiagonal(op, branch);
    // Gershgorin bounds
    double lo = diag[0], hi = diag[0];
    for (std::size_t i = 0; i < diag.size(); ++i) {
        double radius = 0.0;
        if (i > 0) radius += std::abs(off[i - 1]);
        if (i + 1 < diag.size()) radius += std::abs(off[i]);
        lo = std::min(lo, diag[i] - radius);
        hi = std::max(hi, diag[i] + radius);
    }
    std::vector<double> eigs(k);
    for (int j = 0; j < k; ++j) {
        double a = lo, b = hi;
        while (b - a > 1e-12 * std::max(1.0, std::abs(b)) + 1e-13) {
            const double mid = 0.5 * (a + b);
            if (eigen_count_below(diag, off, mid) >= j + 1) b = mid;
            else a = mid;
        }
        eigs[j] = 0.5 * (a + b);
    }
    return eigs;
}

std::vector<double> apply_stencil(const RadialOperator& op, LinearizedBranch branch,
                                  const std::vector<double>& values) {
    if (static_cast<int>(values.size()) != op.n_nodes + 1)
        throw InvalidArgument("stencil input must live on the profile nodes");
    const int d = op.params.d;
    const double dr = op.dr;
    const int i0 = op.first_node;
    const int m = op.n_nodes - i0;
    const auto& V = branch == LinearizedBranch::Plus ? op.potential_plus : op.potential_minus;
    std::vector<double> out(m);
    for (int j = 0; j < m; ++j) {
        const int i = i0 + j;
        const double fr = conductance((i + 0.5) * dr, d, dr);
        const double fl = (i == 0) ? 0.0 : conductance((i - 0.5) * dr, d, dr);
        const double left = (i == 0) ? 0.0 : values[i - 1];
        double a = -(fr * (values[i + 1] - values[i]) - fl * (values[i] - left)) / op.weights[j];
        a += (op.omega + V[i]) * values[i];
        if (op.angular_mode > 0) {
            const double r = i * dr;
            a += op.angular_mode * (op.angular_mode + d - 2.0) / (r * r) * values[i];
        }
        out[j] = a;
    }
    return out;
}

double kernel_residual(const RadialOperator& op, LinearizedBranch branch,
                       const std::vector<double>& values) {
    const std::vector<double> av = apply_stencil(op, branch, values);
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < av.size(); ++j) {
        const double w = op.weights[j];
        num += w * av[j] * av[j];
        const double v = values[op.first_node + j];
        den += w * v * v;
    }
    if (den == 0.0) throw DegenerateInput("zero vector in kernel residual");
    return std::sqrt(num / den);
}

std::vector<SpectralReport> vk_report(std::vector<RadialProfile> profiles, int n_eigs) {
    if (profiles.size() < 3)
        throw InsufficientSamples("need at least 3 profiles for centered differences");
    std::sort(profiles.begin(), profiles.end(),
              [](const RadialProfile& a, const RadialProfile& b) { return a.omega < b.omega; });
    for (const auto& pr : profiles)
        if (!(pr.params == profiles.front().params))
            throw ParamMismatch("profiles mix (d, p) parameter sets");

    const ProblemParams pp = profiles.front().params;
    const double fd = 4.0 / pp.d;

    auto energy_of = [&](const RadialProfile& prof) {
        const double dr = prof.dr();
        const auto du = radial_derivative(prof.values, dr);
        std::vector<double> tmp(prof.values.size());
        for (std::size_t i = 0; i < tmp.size(); ++i) tmp[i] = du[i] * du[i];
        const double G = radial_integral(tmp, dr, pp.d);
        for (std::size_t i = 0; i < tmp.size(); ++i) tmp[i] = std::pow(prof.values[i], 2.0 + fd);
        const double A = radial_integral(tmp, dr, pp.d);
        for (std::size_t i = 0; i < tmp.size(); ++i) tmp[i] = std::pow(prof.values[i], pp.p + 1.0);
        const double B = radial_integral(tmp, dr, pp.d);
        return G - A / (1.0 + 2.0 / pp.d) + 2.0 / (pp.p + 1.0) * B;
    };

    std::vector<SpectralReport> reports;
    for (std::size_t i = 1; i + 1 < profiles.size(); ++i) {
        const RadialProfile& prof = profiles[i];
        SpectralReport rep;
        rep.omega = prof.omega;

        const RadialOperator op0 = build_operators(prof, 0);
        const RadialOperator op1 = build_operators(prof, 1);
        rep.lowest_eigs_plus = lowest_eigs(op0, n_eigs, LinearizedBranch::Plus);
        rep.lowest_eigs_minus = lowest_eigs(op0, n_eigs, LinearizedBranch::Minus);
        rep.lowest_eigs_plus_l1 = lowest_eigs(op1, n_eigs, LinearizedBranch::Plus);
        rep.n_negative_plus = 0;
        {
            auto [diag, off] = operator_tridiagonal(op0, LinearizedBranch::Plus);
            rep.n_negative_plus = eigen_count_below(diag, off, -1e-8);
        }
        rep.kernel_residual_minus = kernel_residual(op0, LinearizedBranch::Minus, prof.values);
        rep.kernel_residual_plus_translation =
            kernel_residual(op1, LinearizedBranch::Plus, radial_derivative(prof.values, prof.dr()));

        const double dw = profiles[i + 1].omega - profiles[i - 1].omega;
        rep.vk_slope = (profiles[i + 1].mass - profiles[i - 1].mass) / dw;
        rep.dprime2 = rep.vk_slope; // D''(omega) = dm/domega
        const double de = (energy_of(profiles[i + 1]) - energy_of(profiles[i - 1])) / dw;
        rep.de_domega_residual = std::abs(de + prof.omega * rep.vk_slope) / std::abs(de);

        // pointwise eigen relation scalar, reported as data (see report docs)
        {
            const double dr = prof.dr();
            std::vector<double> tmp(prof.values.size());
            for (std::size_t j = 0; j < tmp.size(); ++j)
                tmp[j] = -fd * std::pow(prof.values[j], fd + 2.0) +
                         (pp.p - 1.0) * std::pow(prof.values[j], pp.p + 1.0);
            rep.lambda_minus = radial_integral(tmp, dr, pp.d) / prof.mass;
            std::vector<double> shifted = apply_stencil(op0, LinearizedBranch::Plus, prof.values);
            double num = 0.0, den = 0.0;
            for (std::size_t j = 0; j < shifted.size(); ++j) {
                const double w = op0.weights[j];
                const double v = prof.values[op0.first_node + j];
                const double rres = shifted[j] - rep.lambda_minus * v;
                num += w * rres * rres;
                den += w * v * v;
            }
            rep.lambda_minus_residual = std::sqrt(num / den);
        }

        const bool structure_ok = rep.n_negative_plus == 1 &&
                                  rep.kernel_residual_minus < 1e-6 &&
                                  rep.kernel_residual_plus_translation < 1e-4;
        rep.verdict = (rep.vk_slope > 0.0 && structure_ok) ? "stable-candidate"
                                                           : "unstable-candidate";
        reports.push_back(std::move(rep));
    }
    return reports;
}

} // namespace solitonlab
