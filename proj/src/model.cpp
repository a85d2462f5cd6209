#include "wdw/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace wdw {

void ModelParams::validate() const {
    if (kappa != -1 && kappa != 0 && kappa != 1)
        throw ConfigError("kappa must be one of {-1, 0, +1}, got " + std::to_string(kappa));
    if (!(matter >= 0.0))
        throw ConfigError("matter coupling pi*G*M_gamma must be >= 0, got " +
                          std::to_string(matter));
    if (!std::isfinite(gamma) || !std::isfinite(cc) || !std::isfinite(q))
        throw ConfigError("non-finite model parameter");
}

double msq(const ModelParams& p) { return -p.cc / 3.0 + (8.0 / 3.0) * p.matter; }

ModelParams with_msq(ModelParams p, double msq_target) {
    p.matter = (3.0 / 8.0) * (msq_target + p.cc / 3.0);
    if (p.matter < 0.0)
        throw ConfigError("requested m^2 needs matter < 0 at this cosmological constant");
    return p;
}

Grid::Grid(std::vector<double> points) : points_(std::move(points)) {
    if (points_.size() < 16)
        throw ConfigError("grid needs at least 16 points, got " +
                          std::to_string(points_.size()));
    if (!(points_.front() > 0.0))
        throw ConfigError("grid must start at A > 0; A = 0 is a singular point");
    for (std::size_t i = 0; i + 1 < points_.size(); ++i)
        if (!(points_[i] < points_[i + 1]))
            throw ConfigError("grid points must be strictly increasing");
    for (double a : points_)
        if (!std::isfinite(a)) throw ConfigError("non-finite grid point");
}

Grid Grid::uniform(double a_min, double a_max, std::size_t n) {
    if (!(a_min > 0.0) || !(a_max > a_min))
        throw ConfigError("grid bounds must satisfy 0 < a_min < a_max");
    if (n < 16) throw ConfigError("grid needs at least 16 points");
    std::vector<double> pts(n);
    const double h = (a_max - a_min) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) pts[i] = a_min + h * static_cast<double>(i);
    pts.back() = a_max;
    return Grid(std::move(pts));
}

Grid Grid::restricted(std::size_t begin, std::size_t end) const {
    if (begin >= end || end > points_.size())
        throw ConfigError("invalid grid restriction range");
    return Grid(std::vector<double>(points_.begin() + begin, points_.begin() + end));
}

SampledFunction::SampledFunction(Grid g, std::vector<double> v, std::vector<double> d)
    : grid(std::move(g)), values(std::move(v)), derivs(std::move(d)) {
    if (values.size() != grid.size() || derivs.size() != grid.size())
        throw ConfigError("sampled function: values/derivs length does not match grid");
    for (std::size_t i = 0; i < values.size(); ++i)
        if (!std::isfinite(values[i]) || !std::isfinite(derivs[i]))
            throw NumericRangeError("sampled function has non-finite entry at index " +
                                    std::to_string(i));
}

SampledFunction SampledFunction::restricted(std::size_t begin, std::size_t end) const {
    return SampledFunction(grid.restricted(begin, end),
                           std::vector<double>(values.begin() + begin, values.begin() + end),
                           std::vector<double>(derivs.begin() + begin, derivs.begin() + end));
}

double SampledFunction::max_abs_value() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

namespace {

// Fornberg weights for the m-th derivative at x0 over the given nodes.
std::vector<double> fornberg_weights(double x0, const double* x, std::size_t n, int order) {
    const std::size_t m = static_cast<std::size_t>(order);
    std::vector<std::vector<double>> c(n, std::vector<double>(m + 1, 0.0));
    double c1 = 1.0;
    double c4 = x[0] - x0;
    c[0][0] = 1.0;
    for (std::size_t i = 1; i < n; ++i) {
        const std::size_t mn = std::min(i, m);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = x[i] - x0;
        for (std::size_t j = 0; j < i; ++j) {
            const double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (std::size_t k = mn; k >= 1; --k)
                    c[i][k] = c1 * (static_cast<double>(k) * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (std::size_t k = mn; k >= 1; --k)
                c[j][k] = (c4 * c[j][k] - static_cast<double>(k) * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = c[i][m];
    return w;
}

}  // namespace

std::vector<double> fd_derivative(const Grid& grid, const std::vector<double>& values) {
    const std::size_t n = grid.size();
    if (values.size() != n) throw ConfigError("fd_derivative: length mismatch");
    const std::size_t window = 2 * kFdHalfWidth + 1;
    if (n < window)
        throw ConfigError("grid too coarse for the derivative stencil");
    const double* xs = grid.points().data();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t s = (i > kFdHalfWidth) ? i - kFdHalfWidth : 0;
        s = std::min(s, n - window);
        const auto w = fornberg_weights(xs[i], xs + s, window, 1);
        double acc = 0.0;
        for (std::size_t j = 0; j < window; ++j) acc += w[j] * values[s + j];
        out[i] = acc;
    }
    return out;
}

double potential(const ModelParams& p, double a) {
    if (!(a > 0.0)) throw DomainError("potential requires a > 0");
    const double a3 = a * a * a;
    const double v = 144.0 * p.kappa * a3 + 48.0 * p.cc * a3 * a * a -
                     384.0 * p.matter * std::pow(a, -3.0 * p.gamma + 2.0);
    if (!std::isfinite(v))
        throw NumericRangeError("potential overflowed at a = " + std::to_string(a));
    return v;
}

std::vector<double> potential_samples(const ModelParams& p, const Grid& grid) {
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) v[i] = potential(p, grid[i]);
    return v;
}

SampledFunction apply_h0(const ModelParams& p, const SampledFunction& f,
                         const std::vector<double>* v_override) {
    p.validate();
    if (v_override && v_override->size() != f.size())
        throw ConfigError("apply_h0: potential override length mismatch");
    const auto fpp = fd_derivative(f.grid, f.derivs);
    std::vector<double> out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double a = f.grid[i];
        const double va = v_override ? (*v_override)[i] : potential(p, a);
        out[i] = -a * fpp[i] + p.q * f.derivs[i] + va * f.values[i];
    }
    auto d = fd_derivative(f.grid, out);
    return SampledFunction(f.grid, std::move(out), std::move(d));
}

SampledFunction apply_hplus(const ModelParams& p, const SampledFunction& f,
                            const std::vector<double>* v_override) {
    p.validate();
    if (v_override && v_override->size() != f.size())
        throw ConfigError("apply_hplus: potential override length mismatch");
    const auto fpp = fd_derivative(f.grid, f.derivs);
    std::vector<double> out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double a = f.grid[i];
        const double am = std::pow(a, -1.0 - 2.0 * p.q);
        const double va = v_override ? (*v_override)[i] : potential(p, a);
        out[i] = -std::pow(a, -2.0 * p.q) * fpp[i] + p.q * am * f.derivs[i] +
                 am * va * f.values[i];
    }
    auto d = fd_derivative(f.grid, out);
    return SampledFunction(f.grid, std::move(out), std::move(d));
}

double ordering_identity_check(const ModelParams& p, const SampledFunction& f) {
    const std::size_t n = f.size();
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = std::pow(f.grid[i], -p.q) * f.derivs[i];
    const auto gp = fd_derivative(f.grid, g);
    const auto fpp = fd_derivative(f.grid, f.derivs);
    double worst = 0.0;
    for (std::size_t i = interior_begin(n); i < interior_end(n); ++i) {
        const double a = f.grid[i];
        const double lhs = std::pow(a, p.q - 1.0) * gp[i];
        const double rhs = (fpp[i] - p.q * f.derivs[i] / a) / a;
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

double relative_residual(const ModelParams& p, const SampledFunction& f,
                         const std::vector<double>* v_override) {
    const std::size_t n = f.size();
    if (v_override && v_override->size() != n)
        throw ConfigError("relative_residual: potential override length mismatch");
    const auto fpp = fd_derivative(f.grid, f.derivs);
    std::vector<double> num(n, 0.0), den(n, 0.0);
    double scale = 0.0;
    for (std::size_t i = interior_begin(n); i < interior_end(n); ++i) {
        const double a = f.grid[i];
        const double va = v_override ? (*v_override)[i] : potential(p, a);
        const double t1 = -a * fpp[i];
        const double t2 = p.q * f.derivs[i];
        const double t3 = va * f.values[i];
        num[i] = std::abs(t1 + t2 + t3);
        den[i] = std::abs(t1) + std::abs(t2) + std::abs(t3);
        scale = std::max(scale, den[i]);
    }
    // The pointwise term sum can vanish (at q = 0 the two surviving terms
    // cancel together wherever V crosses zero), so the denominator is floored
    // at a fraction of the working operator scale.
    const double eps = 1e-2 * scale + 1e-300;
    double worst = 0.0;
    for (std::size_t i = interior_begin(n); i < interior_end(n); ++i)
        worst = std::max(worst, num[i] / (den[i] + eps));
    return worst;
}

}  // namespace wdw
