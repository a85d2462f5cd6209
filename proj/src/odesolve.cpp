#include "wdw/odesolve.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace wdw::ode {

IndicialRoots frobenius_exponents(const ModelParams& p) {
    p.validate();
    IndicialRoots out;
    const double matter_exp = -3.0 * p.gamma + 2.0;
    if (p.matter > 0.0 && matter_exp < -1.0 - 1e-12)
        throw DomainError("potential too singular at the origin (3 gamma > 3 with matter > 0)");
    if (p.matter > 0.0 && std::abs(matter_exp + 1.0) <= 1e-12) {
        // A V(A) contributes the constant 384 matter to the indicial polynomial:
        // r^2 - (1+q) r + 384 matter = 0.
        const double b = 1.0 + p.q;
        const double disc = b * b - 4.0 * 384.0 * p.matter;
        if (disc >= 0.0) {
            const double s = std::sqrt(disc);
            out.r1 = 0.5 * (b - s);
            out.r2 = 0.5 * (b + s);
            out.real_part = 0.5 * b;
        } else {
            out.complex_pair = true;
            out.real_part = 0.5 * b;
            out.imag_part = 0.5 * std::sqrt(-disc);
            out.r1 = out.r2 = out.real_part;
        }
        return out;
    }
    out.r1 = std::min(0.0, 1.0 + p.q);
    out.r2 = std::max(0.0, 1.0 + p.q);
    out.real_part = 0.5 * (out.r1 + out.r2);
    return out;
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
// Dense-output coefficients.
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

constexpr double kOverflowCap = 1e300;

using State = std::array<double, 2>;  // (u, u')

}  // namespace

SampledFunction integrate(const ModelParams& p, const Grid& grid, double init_value,
                          double init_deriv, const IntegrateOptions& opt) {
    p.validate();
    const double a_start = grid.front();
    const double a_end = grid.back();
    const std::size_t n = grid.size();

    const auto rhs = [&p](double a, const State& y) -> State {
        return {y[1], (p.q * y[1] + potential(p, a) * y[0]) / a};
    };

    std::vector<double> values(n), derivs(n);
    values[0] = init_value;
    derivs[0] = init_deriv;
    std::size_t next_out = 1;

    State y{init_value, init_deriv};
    double t = a_start;
    State k1 = rhs(t, y);

    const double span = a_end - a_start;
    const double hmax = (opt.max_step > 0.0) ? std::min(opt.max_step, span) : span;
    double h = std::min(hmax, 1e-4 * span + 1e-12);

    for (std::size_t step = 0; step < opt.max_steps; ++step) {
        if (next_out >= n) break;
        bool final_step = false;
        if (t + h >= a_end) {
            h = a_end - t;
            final_step = true;
        }
        if (h < 1e-14 * std::max(1.0, std::abs(t)))
            throw IntegrationError("step size underflow at A = " + std::to_string(t), t);

        State k2, k3, k4, k5, k6, k7, ynew;
        State yt;
        yt = {y[0] + h * a21 * k1[0], y[1] + h * a21 * k1[1]};
        k2 = rhs(t + h / 5.0, yt);
        yt = {y[0] + h * (a31 * k1[0] + a32 * k2[0]), y[1] + h * (a31 * k1[1] + a32 * k2[1])};
        k3 = rhs(t + 3.0 * h / 10.0, yt);
        yt = {y[0] + h * (a41 * k1[0] + a42 * k2[0] + a43 * k3[0]),
              y[1] + h * (a41 * k1[1] + a42 * k2[1] + a43 * k3[1])};
        k4 = rhs(t + 4.0 * h / 5.0, yt);
        yt = {y[0] + h * (a51 * k1[0] + a52 * k2[0] + a53 * k3[0] + a54 * k4[0]),
              y[1] + h * (a51 * k1[1] + a52 * k2[1] + a53 * k3[1] + a54 * k4[1])};
        k5 = rhs(t + 8.0 * h / 9.0, yt);
        yt = {y[0] + h * (a61 * k1[0] + a62 * k2[0] + a63 * k3[0] + a64 * k4[0] + a65 * k5[0]),
              y[1] + h * (a61 * k1[1] + a62 * k2[1] + a63 * k3[1] + a64 * k4[1] + a65 * k5[1])};
        k6 = rhs(t + h, yt);
        ynew = {y[0] + h * (b1 * k1[0] + b3 * k3[0] + b4 * k4[0] + b5 * k5[0] + b6 * k6[0]),
                y[1] + h * (b1 * k1[1] + b3 * k3[1] + b4 * k4[1] + b5 * k5[1] + b6 * k6[1])};
        k7 = rhs(t + h, ynew);

        double err = 0.0;
        for (int i = 0; i < 2; ++i) {
            const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                   e6 * k6[i] + e7 * k7[i]);
            const double sk = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            err += (ei / sk) * (ei / sk);
        }
        err = std::sqrt(0.5 * err);

        if (err <= 1.0) {
            if (std::abs(ynew[0]) > kOverflowCap || !std::isfinite(ynew[0]) ||
                !std::isfinite(ynew[1]))
                throw IntegrationError("solution magnitude exceeded 1e300 at A = " +
                                           std::to_string(t),
                                       t);
            // dense output over (t, t+h]; the final step takes every
            // remaining grid point so rounding in t + h cannot orphan A_end
            if (next_out < n && (final_step || grid[next_out] <= t + h)) {
                State rc1 = y;
                State rc2{ynew[0] - y[0], ynew[1] - y[1]};
                State rc3{h * k1[0] - rc2[0], h * k1[1] - rc2[1]};
                State rc4{rc2[0] - h * k7[0] - rc3[0], rc2[1] - h * k7[1] - rc3[1]};
                State rc5{h * (d1 * k1[0] + d3 * k3[0] + d4 * k4[0] + d5 * k5[0] + d6 * k6[0] +
                               d7 * k7[0]),
                          h * (d1 * k1[1] + d3 * k3[1] + d4 * k4[1] + d5 * k5[1] + d6 * k6[1] +
                               d7 * k7[1])};
                while (next_out < n && (final_step || grid[next_out] <= t + h)) {
                    const double th = std::min((grid[next_out] - t) / h, 1.0);
                    const double th1 = 1.0 - th;
                    values[next_out] =
                        rc1[0] + th * (rc2[0] + th1 * (rc3[0] + th * (rc4[0] + th1 * rc5[0])));
                    derivs[next_out] =
                        rc1[1] + th * (rc2[1] + th1 * (rc3[1] + th * (rc4[1] + th1 * rc5[1])));
                    ++next_out;
                }
            }
            t += h;
            y = ynew;
            k1 = k7;  // FSAL
            const double fac = std::clamp(0.9 * std::pow(err + 1e-30, -0.2), 0.2, 5.0);
            h = std::min(hmax, h * fac);
            if (next_out >= n || t >= a_end) break;
        } else {
            const double fac = std::clamp(0.9 * std::pow(err, -0.2), 0.2, 1.0);
            h *= fac;
        }
    }
    if (next_out < n)
        throw IntegrationError("integration stalled before A = " + std::to_string(grid[next_out]),
                               t);
    return SampledFunction(grid, std::move(values), std::move(derivs));
}

std::vector<double> generalized_wronskian(const ModelParams& p, const SolutionBasis& basis) {
    const std::size_t n = basis.u1.size();
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = basis.u1.grid[i];
        w[i] = std::pow(a, -p.q) * (basis.u1.values[i] * basis.u2.derivs[i] -
                                    basis.u1.derivs[i] * basis.u2.values[i]);
    }
    return w;
}

SolutionBasis solve_basis(const ModelParams& p, const Grid& grid, const IntegrateOptions& opt) {
    const auto roots = frobenius_exponents(p);
    const double a0 = grid.front();
    if (!roots.complex_pair && std::abs(roots.r2 - roots.r1) < 1e-9)
        throw DegenerateIndicialError(
            "indicial roots coincide; logarithmic solutions are not implemented");

    double v1, d1i, v2, d2i;
    if (roots.complex_pair) {
        // Real equation, complex exponents: generic real data still spans the
        // solution space.
        v1 = 1.0;
        d1i = 0.0;
        v2 = 0.0;
        d2i = 1.0;
    } else {
        v1 = std::pow(a0, roots.r1);
        d1i = roots.r1 * std::pow(a0, roots.r1 - 1.0);
        v2 = std::pow(a0, roots.r2);
        d2i = roots.r2 * std::pow(a0, roots.r2 - 1.0);
    }
    SolutionBasis basis{integrate(p, grid, v1, d1i, opt), integrate(p, grid, v2, d2i, opt), 1.0,
                        0.0};
    const auto w = generalized_wronskian(p, basis);
    if (std::abs(w.front()) < 1e-12)
        throw DegenerateBasisError("solution basis has vanishing generalized Wronskian");
    return basis;
}

}  // namespace wdw::ode
