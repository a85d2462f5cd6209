#pragma once

#include <optional>

#include "wdw/model.hpp"
#include "wdw/susy.hpp"

namespace wdw::family {

// One member of the strictly isospectral one-parameter family built from a
// seed solution u: the shifted superpotential, the family potential, the
// family wavefunction and the cumulative integral that generates them.
struct FamilyMember {
    double lambda_param = 0.0;
    susy::SuperpotentialField w_hat;
    SampledFunction v_hat;
    SampledFunction u_hat;
    SampledFunction i_gamma;
};

// I(A) = \int_0^A x^q u(x)^2 dx on the grid: an analytic head segment
// [0, A_min] from the leading power u ~ c x^r (closed form
// c^2 A_min^(q+2r+1)/(q+2r+1)), plus cumulative composite-Simpson sums.
// head_exponent overrides the log-derivative estimate of r at the left edge.
// The result's derivs hold the exact integrand A^q u^2.
SampledFunction cumulative_integral(const ModelParams& p, const SampledFunction& u,
                                    std::optional<double> head_exponent = {});

// Default lambda rule: lambda > 0 (keeps I + lambda > 0 and g real). With
// allow_negative, lambda <= -1 - I(A_max) is also accepted; anything else is
// rejected. Throws ParameterDomainError with the reason.
void validate_lambda(double lambda, double i_max, bool allow_negative = false);

// y = u^(-2) (I + lambda), the general solution of the Bernoulli equation
// y' - 2 W A^q y = A^q. Derivative analytic. Needs a node-free u.
SampledFunction bernoulli_solution(const ModelParams& p, const SampledFunction& u,
                                   const SampledFunction& i_gamma, double lambda);

// W^ = W + u^2/(I + lambda), with the analytic derivative
// W^' = W' + [2 u u' (I+lambda) - A^q u^4]/(I+lambda)^2.
susy::SuperpotentialField shifted_superpotential(const ModelParams& p,
                                                 const susy::SuperpotentialField& w,
                                                 const SampledFunction& u,
                                                 const SampledFunction& i_gamma, double lambda);

// Family potential, computed two ways - directly as A^(1+2q) W^^2 - A^(1+q) W^'
// and through the expansion V+ - 4 A^(1+q) u u'/(I+lambda)
// + 2 A^(1+2q) u^4/(I+lambda)^2 - and checked against each other to 1e-6
// relative (InternalConsistencyError otherwise). Returns the direct form.
SampledFunction family_potential(const ModelParams& p, const susy::SuperpotentialField& w,
                                 const susy::SuperpotentialField& w_hat,
                                 const SampledFunction& u, const SampledFunction& i_gamma,
                                 double lambda);

// Max relative disagreement of the two family-potential routes (diagnostic
// form of the family_potential assertion).
double family_potential_route_difference(const ModelParams& p,
                                         const susy::SuperpotentialField& w,
                                         const susy::SuperpotentialField& w_hat,
                                         const SampledFunction& u,
                                         const SampledFunction& i_gamma, double lambda);

// Expansion-route family potential using the analytic model V(A); regular
// across nodes of u, so usable on the full grid.
SampledFunction isospectral_potential(const ModelParams& p, const SampledFunction& u,
                                      const SampledFunction& i_gamma, double lambda);

// u^ = g(lambda) u/(I + lambda), g = sqrt(lambda (lambda + 1)); derivative
// analytic. lambda in (-1, 0) is rejected (g would be imaginary).
SampledFunction family_wavefunction(const ModelParams& p, const SampledFunction& u,
                                    const SampledFunction& i_gamma, double lambda);

// Max-norm relative residual of -A u^'' + q u^' + V^ u^ over the interior.
double verify_family_member(const ModelParams& p, const FamilyMember& member);

// Assembles a full member on the (node-free) interval of w.
FamilyMember build_family_member(const ModelParams& p, const susy::SuperpotentialField& w,
                                 const SampledFunction& u, const SampledFunction& i_gamma,
                                 double lambda, bool allow_negative = false);

}  // namespace wdw::family
