#include "wdw/family.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace wdw::family {

namespace {

// Integral of the Lagrange parabola through (x0,g0), (x1,g1), (x2,g2) over
// [a, b]. Coordinates are shifted to the middle node so the antiderivative
// does not cancel catastrophically far from the origin.
double parabola_segment(double x0, double x1, double x2, double g0, double g1, double g2,
                        double a, double b) {
    const double c = x1;
    const double t0 = x0 - c, t1 = 0.0, t2 = x2 - c, lo = a - c, hi = b - c;
    auto basis = [&](double xl, double xm, double xr) {
        // \int (t - xm)(t - xr) dt / ((xl - xm)(xl - xr)) over [lo, hi]
        auto prim = [&](double t) {
            return t * t * t / 3.0 - 0.5 * (xm + xr) * t * t + xm * xr * t;
        };
        return (prim(hi) - prim(lo)) / ((xl - xm) * (xl - xr));
    };
    return g0 * basis(t0, t1, t2) + g1 * basis(t1, t0, t2) + g2 * basis(t2, t0, t1);
}

}  // namespace

SampledFunction cumulative_integral(const ModelParams& p, const SampledFunction& u,
                                    std::optional<double> head_exponent) {
    p.validate();
    if (!(p.q > -1.0))
        throw ParameterDomainError("cumulative integral needs q > -1 for integrability at A = 0");
    const std::size_t n = u.size();
    const auto& x = u.grid.points();

    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = std::pow(x[i], p.q) * u.values[i] * u.values[i];

    // head segment [0, A_min] from the leading power u ~ c A^r
    const double a0 = x[0];
    double r;
    if (head_exponent) {
        r = *head_exponent;
    } else {
        if (std::abs(u.values[0]) < 1e-300)
            throw ParameterDomainError("cannot estimate leading exponent: u(A_min) = 0");
        r = a0 * u.derivs[0] / u.values[0];
    }
    const double expo = p.q + 2.0 * r + 1.0;
    if (!(expo > 0.0))
        throw ParameterDomainError("head segment not integrable: q + 2r + 1 <= 0 with r = " +
                                   std::to_string(r));
    const double head = u.values[0] * u.values[0] * std::pow(a0, p.q + 1.0) / expo;

    // cumulative composite Simpson: pairs of intervals share one parabola,
    // whose partial integral supplies the odd cumulative points
    std::vector<double> inc(n, 0.0);
    std::size_t i = 0;
    while (i + 2 < n) {
        inc[i + 1] = parabola_segment(x[i], x[i + 1], x[i + 2], g[i], g[i + 1], g[i + 2], x[i],
                                      x[i + 1]);
        inc[i + 2] = parabola_segment(x[i], x[i + 1], x[i + 2], g[i], g[i + 1], g[i + 2],
                                      x[i + 1], x[i + 2]);
        i += 2;
    }
    if (i + 2 == n)  // odd final interval: reuse the last available triple
        inc[n - 1] = parabola_segment(x[n - 3], x[n - 2], x[n - 1], g[n - 3], g[n - 2], g[n - 1],
                                      x[n - 2], x[n - 1]);

    std::vector<double> iv(n);
    iv[0] = head;
    for (std::size_t j = 1; j < n; ++j) {
        iv[j] = iv[j - 1] + inc[j];
        if (iv[j] < iv[j - 1]) iv[j] = iv[j - 1];  // integrand >= 0; clip quadrature wiggle
    }
    return SampledFunction(u.grid, std::move(iv), std::move(g));
}

void validate_lambda(double lambda, double i_max, bool allow_negative) {
    if (lambda >= 0.0) return;
    if (lambda > -1.0)
        throw ParameterDomainError("lambda = " + std::to_string(lambda) +
                                   " lies in (-1, 0): g(lambda) = sqrt(lambda(lambda+1)) "
                                   "would be imaginary");
    if (!allow_negative)
        throw ParameterDomainError("lambda = " + std::to_string(lambda) +
                                   " rejected: only lambda > 0 is accepted by default");
    if (!(lambda <= -1.0 - i_max))
        throw ParameterDomainError("negative lambda = " + std::to_string(lambda) +
                                   " must satisfy lambda <= -1 - I(A_max) = " +
                                   std::to_string(-1.0 - i_max));
}

namespace {

void check_shift_domain(const SampledFunction& i_gamma, double lambda) {
    // I + lambda must not cross zero anywhere on the grid
    double lo = i_gamma.values.front() + lambda;
    double hi = i_gamma.values.back() + lambda;
    if (lo * hi <= 0.0 || lo == 0.0)
        throw ParameterDomainError("I + lambda crosses zero on the grid for lambda = " +
                                   std::to_string(lambda));
}

}  // namespace

SampledFunction bernoulli_solution(const ModelParams& p, const SampledFunction& u,
                                   const SampledFunction& i_gamma, double lambda) {
    if (!(u.grid == i_gamma.grid)) throw ConfigError("u and I must share a grid");
    check_shift_domain(i_gamma, lambda);
    const std::size_t n = u.size();
    auto bad = susy::find_node_brackets(u);
    if (!bad.empty()) throw NodeInDomainError("seed vanishes inside the interval", std::move(bad));
    std::vector<double> y(n), yp(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double shift = i_gamma.values[i] + lambda;
        const double u2 = u.values[i] * u.values[i];
        const double aq = std::pow(u.grid[i], p.q);
        y[i] = shift / u2;
        yp[i] = aq - 2.0 * (u.derivs[i] / u.values[i]) * y[i];
    }
    return SampledFunction(u.grid, std::move(y), std::move(yp));
}

susy::SuperpotentialField shifted_superpotential(const ModelParams& p,
                                                 const susy::SuperpotentialField& w,
                                                 const SampledFunction& u,
                                                 const SampledFunction& i_gamma, double lambda) {
    if (!(u.grid == w.grid) || !(i_gamma.grid == w.grid))
        throw ConfigError("superpotential, seed and I must share a grid");
    check_shift_domain(i_gamma, lambda);
    const std::size_t n = u.size();
    std::vector<double> wh(n), whp(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double shift = i_gamma.values[i] + lambda;
        const double u2 = u.values[i] * u.values[i];
        const double aq = std::pow(u.grid[i], p.q);
        wh[i] = w.values[i] + u2 / shift;
        whp[i] = w.derivs[i] +
                 (2.0 * u.values[i] * u.derivs[i] * shift - aq * u2 * u2) / (shift * shift);
    }
    return susy::SuperpotentialField{w.grid, std::move(wh), std::move(whp),
                                     w.seed_ref + "+lambda"};
}

SampledFunction isospectral_potential(const ModelParams& p, const SampledFunction& u,
                                      const SampledFunction& i_gamma, double lambda) {
    check_shift_domain(i_gamma, lambda);
    const std::size_t n = u.size();
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = u.grid[i];
        const double shift = i_gamma.values[i] + lambda;
        const double u2 = u.values[i] * u.values[i];
        v[i] = potential(p, a) -
               4.0 * std::pow(a, 1.0 + p.q) * u.values[i] * u.derivs[i] / shift +
               2.0 * std::pow(a, 1.0 + 2.0 * p.q) * u2 * u2 / (shift * shift);
    }
    auto d = fd_derivative(u.grid, v);
    return SampledFunction(u.grid, std::move(v), std::move(d));
}

namespace {

void potential_routes(const ModelParams& p, const susy::SuperpotentialField& w,
                      const susy::SuperpotentialField& w_hat, const SampledFunction& u,
                      const SampledFunction& i_gamma, double lambda,
                      std::vector<double>& direct, std::vector<double>& expanded) {
    if (!(w.grid == w_hat.grid)) throw ConfigError("W and W^ must share a grid");
    check_shift_domain(i_gamma, lambda);
    const std::size_t n = u.size();
    direct.resize(n);
    expanded.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = u.grid[i];
        const double a12q = std::pow(a, 1.0 + 2.0 * p.q);
        const double a1q = std::pow(a, 1.0 + p.q);
        direct[i] = a12q * w_hat.values[i] * w_hat.values[i] - a1q * w_hat.derivs[i];
        const double shift = i_gamma.values[i] + lambda;
        const double u2 = u.values[i] * u.values[i];
        const double vplus = a12q * w.values[i] * w.values[i] - a1q * w.derivs[i];
        expanded[i] = vplus - 4.0 * a1q * u.values[i] * u.derivs[i] / shift +
                      2.0 * a12q * u2 * u2 / (shift * shift);
    }
}

}  // namespace

double family_potential_route_difference(const ModelParams& p,
                                         const susy::SuperpotentialField& w,
                                         const susy::SuperpotentialField& w_hat,
                                         const SampledFunction& u,
                                         const SampledFunction& i_gamma, double lambda) {
    std::vector<double> direct, expanded;
    potential_routes(p, w, w_hat, u, i_gamma, lambda, direct, expanded);
    double scale = 0.0, worst = 0.0;
    for (double v : direct) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < direct.size(); ++i)
        worst = std::max(worst, std::abs(direct[i] - expanded[i]) / (scale + 1e-300));
    return worst;
}

SampledFunction family_potential(const ModelParams& p, const susy::SuperpotentialField& w,
                                 const susy::SuperpotentialField& w_hat,
                                 const SampledFunction& u, const SampledFunction& i_gamma,
                                 double lambda) {
    std::vector<double> direct, expanded;
    potential_routes(p, w, w_hat, u, i_gamma, lambda, direct, expanded);
    double scale = 0.0;
    for (double v : direct) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < direct.size(); ++i)
        if (std::abs(direct[i] - expanded[i]) > 1e-6 * (scale + 1e-300))
            throw InternalConsistencyError(
                "family potential routes disagree at A = " + std::to_string(u.grid[i]) +
                " (likely a derivative-stencil problem)");
    auto d = fd_derivative(u.grid, direct);
    return SampledFunction(u.grid, std::move(direct), std::move(d));
}

SampledFunction family_wavefunction(const ModelParams& p, const SampledFunction& u,
                                    const SampledFunction& i_gamma, double lambda) {
    if (!(u.grid == i_gamma.grid)) throw ConfigError("u and I must share a grid");
    if (lambda > -1.0 && lambda < 0.0)
        throw ParameterDomainError("lambda in (-1, 0): g(lambda) would be imaginary");
    check_shift_domain(i_gamma, lambda);
    const double g = std::sqrt(lambda * (lambda + 1.0));
    const std::size_t n = u.size();
    std::vector<double> v(n), d(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double shift = i_gamma.values[i] + lambda;
        const double aq = std::pow(u.grid[i], p.q);
        v[i] = g * u.values[i] / shift;
        d[i] = g *
               (u.derivs[i] * shift - u.values[i] * aq * u.values[i] * u.values[i]) /
               (shift * shift);
    }
    return SampledFunction(u.grid, std::move(v), std::move(d));
}

double verify_family_member(const ModelParams& p, const FamilyMember& member) {
    return relative_residual(p, member.u_hat, &member.v_hat.values);
}

FamilyMember build_family_member(const ModelParams& p, const susy::SuperpotentialField& w,
                                 const SampledFunction& u, const SampledFunction& i_gamma,
                                 double lambda, bool allow_negative) {
    validate_lambda(lambda, i_gamma.values.back(), allow_negative);
    auto w_hat = shifted_superpotential(p, w, u, i_gamma, lambda);
    auto v_hat = family_potential(p, w, w_hat, u, i_gamma, lambda);
    auto u_hat = family_wavefunction(p, u, i_gamma, lambda);
    return FamilyMember{lambda, std::move(w_hat), std::move(v_hat), std::move(u_hat),
                        i_gamma};
}

}  // namespace wdw::family
