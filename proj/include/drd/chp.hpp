#pragma once

// Complete homogeneous symmetric polynomials (CHP) and the hyperedge weight
// built from them.
//
// The total weight of all cardinality-k multisets over a mass vector x is
// CHP_k(x). Multisets whose support lies inside one region are removed by
// subtracting, for every shared-region set z of size m <= k,
//
//     w(z) = prod_{g in z} x_g * CHP_{k-m}(z),
//
// which counts exactly the multisets whose support is z. What remains is the
// weight of the splitting hyperedges.
//
// Every function is instantiated for double and Rational.

#include <span>
#include <vector>

#include "drd/arith.hpp"
#include "drd/core.hpp"
#include "drd/hypergraph.hpp"

namespace drd {

/// result[j] = sum_i values[i]^j for j = 0..max_degree (result[0] is the
/// number of values).
template <class Scalar>
std::vector<Scalar> power_sums(std::span<const Scalar> values, int max_degree);

/// CHP_0..CHP_degree from power sums PS_0..PS_degree via the Newton-Girard
/// recurrence CHP_i = (1/i) * sum_{j=1..i} CHP_{i-j} * PS_j.
template <class Scalar>
std::vector<Scalar> chp_from_power_sums(std::span<const Scalar> power_sums, int degree);

/// CHP_0..CHP_degree of `values`, O(degree * |values|) plus O(degree^2).
template <class Scalar>
std::vector<Scalar> chp_table(std::span<const Scalar> values, int degree);

template <class Scalar>
Scalar chp(std::span<const Scalar> values, int degree);

/// Weight of all cardinality-k multisets whose support is exactly `members`
/// (the member masses).
template <class Scalar>
Scalar zeta_weight(std::span<const Scalar> members, int k);

/// Total hyperedge weight for subregion masses aligned with `index`. Float
/// results in [-1e-9, 0) are clamped to zero; anything more negative (or any
/// negative rational) throws InternalInconsistency.
template <class Scalar>
Scalar hyperedge_weight(std::span<const Scalar> masses, const SubregionIndex& index);

/// Subregion masses of the given hypotheses under the prior.
template <class Scalar>
std::vector<Scalar> subregion_masses(const ProblemInstance& instance,
                                     const SubregionIndex& index,
                                     std::span<const HypothesisId> hypotheses);

/// Weight of every hyperedge (nothing observed).
template <class Scalar>
Scalar total_hyperedge_weight(const ProblemInstance& instance, const SubregionIndex& index);

/// f_HEC(S): hyperedge mass cut by the evidence.
template <class Scalar>
Scalar objective_f(const ProblemInstance& instance, const Evidence& evidence,
                   const SubregionIndex& index);

}  // namespace drd
