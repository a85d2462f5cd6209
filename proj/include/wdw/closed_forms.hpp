#pragma once

#include <array>
#include <string>

#include "wdw/model.hpp"

namespace wdw::closed {

// The analytically solvable corners of the (gamma, kappa, q) parameter space.
enum class CaseId {
    InflationMPos,        // gamma=-1, q=1, m^2 > 0: ordinary Bessel of order 1/3
    InflationMNeg,        // gamma=-1, q=1, m^2 < 0: modified Bessel of order 1/3
    InflationMZeroClosed, // gamma=-1, m^2 = 0, kappa=+1: I/K of order (1+q)/4
    InflationMZeroOpen,   // gamma=-1, m^2 = 0, kappa=-1: J/Y of order (1+q)/4
    DustFlat,             // gamma=0, kappa=0: confluent hypergeometric
    StiffFlat,            // gamma=1, kappa=0: Bessel of order mu in A^3
};

std::string case_name(CaseId id);

// One closed-form solution family: a case, its parameters and the two
// superposition coefficients.
struct ClosedForm {
    CaseId case_id;
    ModelParams params;
    std::array<double, 2> coeffs{1.0, 0.0};
};

// Validates the case/parameter consistency rules and returns the form.
ClosedForm make_closed_form(CaseId id, const ModelParams& params,
                            std::array<double, 2> coeffs);

// Chooses the case implied by the parameters, or throws ConfigError when no
// closed form applies.
CaseId deduce_case(const ModelParams& params);

// (u, du/dA) at a single point; derivatives are analytic (chain rule plus the
// special-function recurrences), never finite differences.
ValueDeriv evaluate(const ClosedForm& cf, double a);

// Samples over a grid.
SampledFunction sample(const ClosedForm& cf, const Grid& grid);

}  // namespace wdw::closed
