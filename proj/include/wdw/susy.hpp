#pragma once

#include <string>
#include <utility>
#include <vector>

#include "wdw/model.hpp"

namespace wdw::susy {

// Superpotential W(A) = -A^(-q) u'/u on a node-free interval of the seed u,
// with its derivative W'(A) obtained by differentiating the sampled W.
struct SuperpotentialField {
    Grid grid;
    std::vector<double> values;
    std::vector<double> derivs;
    std::string seed_ref;
};

inline constexpr double kNodeTol = 1e-10;

// Pairs of adjacent indices bracketing each sign change or near-vanishing
// point of u. Empty means u is node-free on its interval.
std::vector<std::pair<std::size_t, std::size_t>> find_node_brackets(const SampledFunction& u);

// Index ranges [begin, end) of maximal node-free subintervals of u, trimmed
// by `margin` points next to each detected node (W, 1/u and u^-2 degrade
// there). Ranges shorter than min_points are dropped.
std::vector<std::pair<std::size_t, std::size_t>> split_node_free(const SampledFunction& u,
                                                                 std::size_t margin = 16,
                                                                 std::size_t min_points = 16);

// Throws NodeInDomainError (with the bracketing indices of every sign change)
// if u has a node on its interval.
SuperpotentialField superpotential_from_seed(const ModelParams& p, const SampledFunction& u,
                                             std::string seed_ref = "seed");

// V+ = A^(1+2q) W^2 - A^(1+q) W'. For W built from a true solution this
// reproduces the model potential (Riccati closure).
SampledFunction riccati_potential(const ModelParams& p, const SuperpotentialField& w);

// V- = A^(1+2q) W^2 + A^(1+q) W' = V+ + 2 A^(1+q) W'.
SampledFunction partner_potential(const ModelParams& p, const SuperpotentialField& w);

// A- f = A^(-q) f' + W f. Annihilates the seed of w.
SampledFunction apply_aminus(const ModelParams& p, const SuperpotentialField& w,
                             const SampledFunction& f);

// A+ f = -A^(-q) f' + W f. Annihilates 1/u_seed.
SampledFunction apply_aplus(const ModelParams& p, const SuperpotentialField& w,
                            const SampledFunction& f);

}  // namespace wdw::susy
