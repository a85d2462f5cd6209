#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "wdw/errors.hpp"

namespace wdw {

// Parameters of one Wheeler-DeWitt problem for the barotropic FRW model,
//
//   H0 u = -A u'' + q u' + V(A) u = 0,
//   V(A) = 144 kappa A^3 + 48 cc A^5 - 384 matter A^(-3 gamma + 2).
//
// `matter` stores the combined coupling pi*G*M_gamma; G and M_gamma never
// appear separately.
struct ModelParams {
    double gamma = 0.0;   // barotropic index of the fluid
    int kappa = 0;        // curvature index, one of {-1, 0, +1}
    double cc = 0.0;      // cosmological constant Lambda
    double matter = 0.0;  // pi*G*M_gamma, >= 0
    double q = 0.0;       // factor-ordering parameter (real)

    void validate() const;
};

// m^2 = -Lambda/3 + (8/3) * matter, the inflationary mass parameter.
double msq(const ModelParams& p);

// Set `matter` so that msq() equals the requested value at the configured cc.
ModelParams with_msq(ModelParams p, double msq_target);

// Strictly increasing scale-factor grid, all points > 0 (the origin A = 0 is
// a singular point of the equation and is excluded), at least 16 points.
class Grid {
public:
    explicit Grid(std::vector<double> points);
    static Grid uniform(double a_min, double a_max, std::size_t n);

    const std::vector<double>& points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }
    double operator[](std::size_t i) const noexcept { return points_[i]; }
    double front() const noexcept { return points_.front(); }
    double back() const noexcept { return points_.back(); }

    Grid restricted(std::size_t begin, std::size_t end) const;

    bool operator==(const Grid& other) const = default;

private:
    std::vector<double> points_;
};

// A function of the scale factor sampled on a Grid together with its first
// derivative du/dA. All entries must be finite.
struct SampledFunction {
    Grid grid;
    std::vector<double> values;
    std::vector<double> derivs;

    SampledFunction(Grid g, std::vector<double> v, std::vector<double> d);

    template <typename F, typename DF>
    static SampledFunction from_functions(const Grid& g, F&& f, DF&& df) {
        std::vector<double> v(g.size()), d(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) {
            v[i] = f(g[i]);
            d[i] = df(g[i]);
        }
        return SampledFunction(g, std::move(v), std::move(d));
    }

    SampledFunction restricted(std::size_t begin, std::size_t end) const;

    std::size_t size() const noexcept { return values.size(); }
    double max_abs_value() const;
};

// A (value, d/dA) pair, the natural output of analytic evaluators.
struct ValueDeriv {
    double value = 0.0;
    double deriv = 0.0;
};

// --- finite differences ------------------------------------------------
//
// First derivative of sampled values with 9-point stencils (8th order on a
// uniform interior, one-sided near the edges), Fornberg weights, so
// non-uniform grids are handled transparently. Residual metrics are taken
// over the interior where the full central stencil applies.

inline constexpr std::size_t kFdHalfWidth = 4;

std::vector<double> fd_derivative(const Grid& grid, const std::vector<double>& values);

inline std::size_t interior_begin(std::size_t) { return kFdHalfWidth; }
inline std::size_t interior_end(std::size_t n) { return n - kFdHalfWidth; }

// --- operators ----------------------------------------------------------

// V(A) at a single point. Throws NumericRangeError if the result is not
// finite.
double potential(const ModelParams& p, double a);

std::vector<double> potential_samples(const ModelParams& p, const Grid& grid);

// Samples of -A f'' + q f' + V(A) f. f'' is estimated by differentiating the
// stored first derivative; endpoints use one-sided stencils. v_override
// replaces V(A) when given (family potentials, Riccati-rebuilt potentials).
SampledFunction apply_h0(const ModelParams& p, const SampledFunction& f,
                         const std::vector<double>* v_override = nullptr);

// Samples of -A^(-2q) f'' + q A^(-1-2q) f' + A^(-1-2q) V(A) f, built from the
// same stencil values as apply_h0.
SampledFunction apply_hplus(const ModelParams& p, const SampledFunction& f,
                            const std::vector<double>* v_override = nullptr);

// Max-norm difference between A^(-1+q) d/dA(A^(-q) f') and
// A^(-1)(f'' - q A^(-1) f'), the two sides of the factor-ordering expansion.
// Vanishes to discretization accuracy.
double ordering_identity_check(const ModelParams& p, const SampledFunction& f);

// Pointwise relative residual of f under H0, maximized over the interior:
//   max |-A f'' + q f' + V f| / (|A f''| + |q f'| + |V f| + eps),
// with eps = 1e-2 of the largest pointwise term sum, so isolated points where
// every term vanishes at once do not dominate the metric.
// When v_override is given it replaces V(A) (used for family potentials).
double relative_residual(const ModelParams& p, const SampledFunction& f,
                         const std::vector<double>* v_override = nullptr);

}  // namespace wdw
