#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "drd/chp.hpp"
#include "drd/oracle.hpp"
#include "drd/rng.hpp"
#include "fixtures.hpp"

using namespace drd;
using drd::fixtures::make_data;

namespace {

// Sum of products over all size-d multisets, by recursion on the first
// element used.
double multiset_sum(const std::vector<double>& x, int d, std::size_t from = 0) {
  if (d == 0) return 1.0;
  double total = 0.0;
  for (std::size_t i = from; i < x.size(); ++i) total += x[i] * multiset_sum(x, d - 1, i);
  return total;
}

}  // namespace

TEST_CASE("power_sums examples") {
  const std::vector<double> x{0.2, 0.3, 0.5};
  const auto ps = power_sums<double>(x, 3);
  CHECK(ps[1] == doctest::Approx(1.0));
  CHECK(ps[3] == doctest::Approx(0.008 + 0.027 + 0.125));

  const std::vector<double> halves{0.5, 0.5};
  CHECK(power_sums<double>(halves, 2)[2] == doctest::Approx(0.5));

  const std::vector<double> empty;
  const auto zero = power_sums<double>(empty, 4);
  for (int j = 1; j <= 4; ++j) CHECK(zero[j] == 0.0);
}

TEST_CASE("chp examples") {
  const std::vector<double> x{0.3, 0.7, 0.1};
  CHECK(chp<double>(x, 0) == 1.0);
  const std::vector<double> single{0.4};
  CHECK(chp<double>(single, 5) == doctest::Approx(std::pow(0.4, 5)));
  const std::vector<double> halves{0.5, 0.5};
  CHECK(chp<double>(halves, 2) == doctest::Approx(0.75));
}

TEST_CASE("chp equals multiset enumeration and satisfies the recurrence") {
  CounterRng rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<double> x(1 + rng.below(6));
    for (double& v : x) v = rng.uniform();
    const int degree = static_cast<int>(rng.below(6));
    CHECK(chp<double>(x, degree) == doctest::Approx(multiset_sum(x, degree)).epsilon(1e-12));

    const auto table = chp_table<double>(x, degree);
    const auto ps = power_sums<double>(x, degree);
    CHECK(table[0] == 1.0);
    for (int i = 1; i <= degree; ++i) {
      double sum = 0.0;
      for (int j = 1; j <= i; ++j) sum += table[i - j] * ps[j];
      CHECK(table[i] == doctest::Approx(sum / i).epsilon(1e-12));
    }
  }
}

TEST_CASE("chp is exact in rational mode") {
  const std::vector<Rational> x{Rational(1, 3), Rational(1, 6), Rational(1, 2)};
  // Degree 2: sum of squares plus pairwise products.
  const Rational expected = Rational(1, 9) + Rational(1, 36) + Rational(1, 4) + Rational(1, 18) +
                            Rational(1, 6) + Rational(1, 12);
  CHECK(chp<Rational>(x, 2) == expected);
}

TEST_CASE("zeta_weight examples") {
  const std::vector<double> three{0.2, 0.3, 0.5};
  CHECK(zeta_weight<double>(three, 3) == doctest::Approx(0.03));
  const std::vector<double> one{0.4};
  CHECK(zeta_weight<double>(one, 3) == doctest::Approx(0.064));
  const std::vector<double> pair{0.3, 0.2};
  // {a,a,b} and {a,b,b}: 0.3*0.3*0.2 + 0.3*0.2*0.2.
  CHECK(zeta_weight<double>(pair, 3) == doctest::Approx(0.018 + 0.012));
  CHECK(zeta_weight<double>(pair, 3) == doctest::Approx(0.03));
  CHECK_THROWS_AS(zeta_weight<double>(three, 2), std::invalid_argument);
}

TEST_CASE("hyperedge_weight when everything shares a region") {
  const auto instance = fixtures::all_shared_instance(5);
  const auto index = SubregionIndex::build(instance);
  CHECK(total_hyperedge_weight<double>(instance, index) == 0.0);
  CHECK(total_hyperedge_weight<Rational>(instance, index) == 0);
}

TEST_CASE("hyperedge_weight on two overlapping regions") {
  const auto index = SubregionIndex::build(fixtures::overlap_instance());
  const std::vector<double> p{0.2, 0.5, 0.3};
  const double p1 = p[0], p2 = p[1], p3 = p[2];
  // CHP_3 minus the singleton and pair corrections.
  const std::vector<double> g12{p1, p2}, g23{p2, p3};
  const double expected = chp<double>(p, 3) - (p1 * p1 * p1 + p2 * p2 * p2 + p3 * p3 * p3) -
                          (p1 * p2 * chp<double>(g12, 1) + p2 * p3 * chp<double>(g23, 1));
  CHECK(hyperedge_weight<double>(p, index) == doctest::Approx(expected).epsilon(1e-14));
  // Edges are the multisets holding both g1 and g3: {1,1,3}, {1,3,3}, {1,2,3}.
  CHECK(hyperedge_weight<double>(p, index) ==
        doctest::Approx(p1 * p1 * p3 + p1 * p3 * p3 + p1 * p2 * p3).epsilon(1e-14));

  const std::vector<Rational> q{Rational(1, 5), Rational(1, 2), Rational(3, 10)};
  CHECK(hyperedge_weight<Rational>(q, index) ==
        q[0] * q[0] * q[2] + q[0] * q[2] * q[2] + q[0] * q[1] * q[2]);
}

TEST_CASE("hyperedge_weight equals brute-force enumeration") {
  const auto floating = check_weight_equivalence({0, 120}, ArithMode::kFloat);
  CHECK(floating.passed());
  CHECK(floating.max_deviation <= 1e-9);
  const auto exact = check_weight_equivalence({0, 120}, ArithMode::kRational);
  CHECK(exact.passed());
  CHECK(exact.max_deviation == 0.0);
  CHECK(exact.instances >= 80);
}

TEST_CASE("hyperedge_weight is homogeneous of degree k") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto instance = random_instance(seed);
    const auto index = SubregionIndex::build(instance);
    std::vector<HypothesisId> all(instance.num_hypotheses());
    for (HypothesisId h = 0; h < all.size(); ++h) all[h] = h;
    auto masses = subregion_masses<Rational>(instance, index, all);
    const Rational w = hyperedge_weight<Rational>(masses, index);
    const Rational c(7, 3);
    for (auto& m : masses) m *= c;
    Rational scale = 1;
    for (int i = 0; i < index.k(); ++i) scale *= c;
    CHECK(hyperedge_weight<Rational>(masses, index) == w * scale);
  }
}

TEST_CASE("a zero-mass subregion behaves as if deleted") {
  // Four singleton regions with the last mass zero vs three singletons.
  const auto full = SubregionIndex::build(fixtures::orthogonal_instance());
  const auto reduced_instance = ProblemInstance::build(
      make_data({1, 1, 1}, {2, 2}, {{0, 0}, {0, 1}, {1, 0}}, {{0}, {1}, {2}}));
  const auto reduced = SubregionIndex::build(reduced_instance, full.k());
  const std::vector<double> with_zero{0.1, 0.25, 0.4, 0.0};
  const std::vector<double> without{0.1, 0.25, 0.4};
  const double w = hyperedge_weight<double>(without, reduced);
  CHECK(w == doctest::Approx(0.1 * 0.25 + 0.1 * 0.4 + 0.25 * 0.4));
  CHECK(hyperedge_weight<double>(with_zero, full) == doctest::Approx(w).epsilon(1e-12));
}

TEST_CASE("objective_f examples") {
  const auto instance = fixtures::overlap_instance();
  const auto index = SubregionIndex::build(instance);
  CHECK(objective_f<double>(instance, Evidence{}, index) == 0.0);
  const double total = total_hyperedge_weight<double>(instance, index);
  CHECK(total > 0.0);
  CHECK(objective_f<double>(instance, Evidence{{{0, 0}}}, index) == doctest::Approx(total));
  CHECK(objective_f<Rational>(instance, Evidence{{{1, 0}}}, index) ==
        total_hyperedge_weight<Rational>(instance, index));
}

TEST_CASE("objective_f matches a naive edge-set evaluation along chains") {
  // f(S) = mass of edges with some endpoint subregion emptied, computed from
  // the explicit multiset list with prior masses.
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto instance = random_instance(seed);
    const auto index = SubregionIndex::build(instance);
    if (index.size() > 8 || index.k() > 4) continue;
    const auto grouping = group_by_signature(instance);
    CounterRng rng(seed);
    const HypothesisId truth = rng.below(instance.num_hypotheses());
    Evidence evidence;
    for (TestId t = 0; t < instance.num_tests(); ++t) {
      evidence = evidence.with(t, instance.outcome(truth, t));
      const auto vs = consistent_hypotheses(instance, evidence);
      std::vector<Rational> prior_masses(grouping.members.size(), 0);
      std::vector<Rational> surviving(grouping.members.size(), 0);
      const auto priors = priors_as<Rational>(instance);
      for (std::size_t g = 0; g < grouping.members.size(); ++g) {
        for (HypothesisId h : grouping.members[g]) {
          prior_masses[g] += priors[h];
          if (std::find(vs.consistent.begin(), vs.consistent.end(), h) != vs.consistent.end()) {
            surviving[g] += priors[h];
          }
        }
      }
      const Rational all = brute_force_edge_weight<Rational>(prior_masses, grouping.signatures,
                                                              index.k());
      const Rational left =
          brute_force_edge_weight<Rational>(surviving, grouping.signatures, index.k());
      CHECK(objective_f<Rational>(instance, evidence, index) == all - left);
    }
  }
}
