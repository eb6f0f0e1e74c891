#pragma once

// Brute-force oracles and property checkers for small instances. None of the
// oracles call the code they certify: edge weights are summed multiset by
// multiset, subregions are regrouped from the region lists, and the optimal
// policy comes from exhaustive search over version spaces.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "drd/arith.hpp"
#include "drd/core.hpp"

namespace drd {

struct SeedRange {
  std::uint64_t begin = 0;
  std::uint64_t end = 0;  // exclusive

  std::uint64_t size() const { return end > begin ? end - begin : 0; }
};

/// Parameters of the random instances used by the checks.
struct RandomInstanceParams {
  std::size_t min_hypotheses = 4;
  std::size_t max_hypotheses = 10;
  std::size_t min_tests = 3;
  std::size_t max_tests = 8;
  std::size_t min_regions = 2;
  std::size_t max_regions = 5;
  int max_arity = 3;                 // arities drawn from [2, max_arity]
  double overlap_probability = 0.3;  // per (hypothesis, extra region)
  int max_weight = 10;               // integer weights in [1, max_weight]
  bool uniform_prior = false;
  bool singleton_regions = false;    // every hypothesis its own region
};

ProblemInstance random_instance(std::uint64_t seed, const RandomInstanceParams& params = {});

struct OracleGrouping {
  std::vector<std::vector<RegionId>> signatures;
  std::vector<std::vector<HypothesisId>> members;
};

/// Subregions regrouped from the region member lists by a hash on the
/// signature; order is first appearance by hypothesis id.
OracleGrouping group_by_signature(const ProblemInstance& instance);

/// Sum of mass products over every cardinality-k multiset of subregions that
/// no single region contains. Throws LimitExceeded past the limits.
template <class Scalar>
Scalar brute_force_edge_weight(std::span<const Scalar> masses,
                               const std::vector<std::vector<RegionId>>& memberships, int k,
                               std::size_t max_subregions = 10, int max_k = 5);

/// Exact minimum expected number of tests over all feasible policies, by
/// memoized search over version spaces. Throws LimitExceeded for
/// |H| > max_hypotheses or |T| > max_tests and InfeasiblePolicy when some
/// reachable unsolved state has no splitting test.
double optimal_policy_cost(const ProblemInstance& instance, std::size_t max_hypotheses = 10,
                           std::size_t max_tests = 8);

/// EC2 edge-cutting gain computed hypothesis by hypothesis on a partition
/// instance: edges join hypotheses of different regions.
double ec2_gain(const ProblemInstance& instance, const Evidence& evidence, TestId test);

/// Expected prior mass eliminated by `test` (the GBS criterion).
double gbs_eliminated_mass(const ProblemInstance& instance, const Evidence& evidence,
                           TestId test);

struct Counterexample {
  std::uint64_t seed = 0;
  std::string evidence;
  std::string detail;
};

struct OracleReport {
  std::string name;
  std::size_t instances = 0;
  std::size_t skipped = 0;
  std::size_t checks = 0;
  double max_deviation = 0.0;
  double worst_ratio = 0.0;  // greedy-bound check only: max C(HEC) / C(opt)
  double seconds = 0.0;
  std::vector<Counterexample> counterexamples;

  bool passed() const { return counterexamples.empty(); }
  std::string summary() const;
};

std::string describe(const Evidence& evidence);

// The checks below take a `k_floor`: each index uses max(formula k, k_floor).
// Raising k keeps every certified property intact, so a floor exercises the
// same claims on larger hyperedges.

/// hyperedge_weight vs brute_force_edge_weight on instances with
/// |G| <= max_subregions and k <= max_k (others are skipped). Each instance
/// is checked on its prior masses and on `mass_draws` random mass vectors
/// with some zero entries.
OracleReport check_weight_equivalence(SeedRange seeds, ArithMode arith,
                                      std::size_t max_subregions = 8, int max_k = 4,
                                      int mass_draws = 3, int k_floor = 0);

/// Direct solved check vs "every hyperedge cut" along random truthful walks.
OracleReport check_theorem1(SeedRange seeds, int walks_per_instance,
                            ArithMode arith = ArithMode::kRational, int k_floor = 0);

/// Diminishing gains along random evidence chains and monotonicity of f_HEC
/// under every truthful one-step extension.
OracleReport check_adaptive_properties(SeedRange seeds, int chains_per_instance,
                                       ArithMode arith, int k_floor = 0);

/// C(HEC) <= (k ln(1/p_min) + 1) C(opt) on tiny instances.
OracleReport check_theorem3(SeedRange seeds, std::size_t max_hypotheses = 8,
                            std::size_t max_tests = 6, int k_floor = 0);

/// On partition instances, HEC's per-step argmax set equals the EC2 argmax
/// set along HEC trajectories.
OracleReport check_partition_equivalence(SeedRange seeds, int walks_per_instance = 3);

/// On singleton-region, binary-test, uniform-prior instances, HEC's choice
/// maximizes the expected eliminated mass.
OracleReport check_gbs_agreement(SeedRange seeds, int walks_per_instance = 3);

}  // namespace drd
