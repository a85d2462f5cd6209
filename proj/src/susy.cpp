#include "wdw/susy.hpp"

#include <algorithm>
#include <cmath>

namespace wdw::susy {

std::vector<std::pair<std::size_t, std::size_t>> find_node_brackets(const SampledFunction& u) {
    std::vector<std::pair<std::size_t, std::size_t>> brackets;
    const double floor_abs = kNodeTol * u.max_abs_value();
    for (std::size_t i = 0; i + 1 < u.size(); ++i) {
        const double a = u.values[i], b = u.values[i + 1];
        if (a * b < 0.0 || std::abs(a) <= floor_abs || std::abs(b) <= floor_abs)
            brackets.emplace_back(i, i + 1);
    }
    return brackets;
}

std::vector<std::pair<std::size_t, std::size_t>> split_node_free(const SampledFunction& u,
                                                                 std::size_t margin,
                                                                 std::size_t min_points) {
    const auto brackets = find_node_brackets(u);
    std::vector<std::pair<std::size_t, std::size_t>> out;
    std::size_t begin = 0;
    auto push = [&](std::size_t b, std::size_t e) {
        // trim near nodes, not at the outer grid boundary
        if (b > 0) b = std::min(b + margin, u.size());
        if (e < u.size()) e = (e > margin) ? e - margin : 0;
        if (e > b && e - b >= std::max<std::size_t>(min_points, 16)) out.emplace_back(b, e);
    };
    for (const auto& [lo, hi] : brackets) {
        if (lo > begin) push(begin, lo + 1);
        begin = hi;
    }
    push(begin, u.size());
    return out;
}

SuperpotentialField superpotential_from_seed(const ModelParams& p, const SampledFunction& u,
                                             std::string seed_ref) {
    p.validate();
    auto brackets = find_node_brackets(u);
    if (!brackets.empty())
        throw NodeInDomainError("seed has " + std::to_string(brackets.size()) +
                                    " node(s) inside the interval",
                                std::move(brackets));
    const std::size_t n = u.size();
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i)
        w[i] = -std::pow(u.grid[i], -p.q) * u.derivs[i] / u.values[i];
    auto wp = fd_derivative(u.grid, w);
    return SuperpotentialField{u.grid, std::move(w), std::move(wp), std::move(seed_ref)};
}

SampledFunction riccati_potential(const ModelParams& p, const SuperpotentialField& w) {
    const std::size_t n = w.values.size();
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = w.grid[i];
        v[i] = std::pow(a, 1.0 + 2.0 * p.q) * w.values[i] * w.values[i] -
               std::pow(a, 1.0 + p.q) * w.derivs[i];
    }
    auto d = fd_derivative(w.grid, v);
    return SampledFunction(w.grid, std::move(v), std::move(d));
}

SampledFunction partner_potential(const ModelParams& p, const SuperpotentialField& w) {
    const std::size_t n = w.values.size();
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = w.grid[i];
        v[i] = std::pow(a, 1.0 + 2.0 * p.q) * w.values[i] * w.values[i] +
               std::pow(a, 1.0 + p.q) * w.derivs[i];
    }
    auto d = fd_derivative(w.grid, v);
    return SampledFunction(w.grid, std::move(v), std::move(d));
}

namespace {

SampledFunction first_order_op(const ModelParams& p, const SuperpotentialField& w,
                               const SampledFunction& f, double deriv_sign) {
    if (!(f.grid == w.grid))
        throw ConfigError("operand must share the superpotential grid");
    const std::size_t n = f.size();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = deriv_sign * std::pow(f.grid[i], -p.q) * f.derivs[i] +
                 w.values[i] * f.values[i];
    auto d = fd_derivative(f.grid, out);
    return SampledFunction(f.grid, std::move(out), std::move(d));
}

}  // namespace

SampledFunction apply_aminus(const ModelParams& p, const SuperpotentialField& w,
                             const SampledFunction& f) {
    return first_order_op(p, w, f, +1.0);
}

SampledFunction apply_aplus(const ModelParams& p, const SuperpotentialField& w,
                            const SampledFunction& f) {
    return first_order_op(p, w, f, -1.0);
}

}  // namespace wdw::susy
