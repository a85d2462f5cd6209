#pragma once

#include <cstddef>

#include "wdw/model.hpp"

namespace wdw::ode {

// Indicial roots of A u'' - q u' + V(A) u = 0 at the regular singular point
// A = 0. For -3 gamma + 2 > -1 (or matter = 0) the roots are {0, 1+q}; the
// stiff-fluid case gamma = 1 with matter > 0 shifts them to the roots of
// r^2 - (1+q) r + 384 matter = 0, which may form a complex pair.
struct IndicialRoots {
    bool complex_pair = false;
    double r1 = 0.0;  // smaller root when real
    double r2 = 0.0;  // larger root when real
    double real_part = 0.0;
    double imag_part = 0.0;  // nonzero only for a complex pair
};

IndicialRoots frobenius_exponents(const ModelParams& p);

struct IntegrateOptions {
    double rtol = 1e-9;
    double atol = 1e-12;
    double max_step = 0.0;  // 0 = no cap
    std::size_t max_steps = 2'000'000;
};

// Integrate the Wheeler-DeWitt equation as the first-order system (u, u')
// with an adaptive Dormand-Prince 5(4) pair, resampling the dense output onto
// the caller's grid. Initial data are given at grid.front().
// Throws IntegrationError (carrying the last good A) on step-size underflow
// or when |u| exceeds 1e300.
SampledFunction integrate(const ModelParams& p, const Grid& grid, double init_value,
                          double init_deriv, const IntegrateOptions& opt = {});

// Two independent solutions with superposition coefficients. The generalized
// Wronskian A^(-q) (u1 u2' - u1' u2) is an exact constant of the equation.
struct SolutionBasis {
    SampledFunction u1;
    SampledFunction u2;
    double c1 = 1.0;
    double c2 = 0.0;
};

// Pointwise samples of the generalized Wronskian of a basis.
std::vector<double> generalized_wronskian(const ModelParams& p, const SolutionBasis& basis);

// Seeds the two Frobenius behaviors u ~ A^{r1}, u ~ A^{r2} at grid.front()
// and integrates each. For a complex indicial pair (stiff fluid, large
// matter) the equation is still real; two generic real data sets are used.
// Throws DegenerateIndicialError when |r1 - r2| < 1e-9.
SolutionBasis solve_basis(const ModelParams& p, const Grid& grid,
                          const IntegrateOptions& opt = {});

}  // namespace wdw::ode
