#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "drd/core.hpp"
#include "drd/oracle.hpp"
#include "drd/rng.hpp"
#include "fixtures.hpp"

using namespace drd;
using drd::fixtures::make_data;

TEST_CASE("validate_instance accepts a minimal well-formed instance") {
  const auto data = make_data({0.5, 0.5}, {2}, {{0}, {1}}, {{0, 1}});
  CHECK(validate_instance(data, CoverageMode::kStrict).empty());
}

TEST_CASE("validate_instance reports zero prior weight") {
  const auto data = make_data({0.0, 1.0}, {2}, {{0}, {1}}, {{0, 1}});
  const auto report = validate_instance(data, CoverageMode::kStrict);
  CHECK(report.has_errors());
  CHECK(report.contains("zero prior weight"));
  CHECK_THROWS_AS(ProblemInstance::build(data), InvalidInstance);
}

TEST_CASE("validate_instance coverage is an error only in strict mode") {
  const auto data = make_data({1, 1}, {2}, {{0}, {1}}, {{0}});
  const auto strict = validate_instance(data, CoverageMode::kStrict);
  CHECK(strict.has_errors());
  CHECK(strict.contains("uncovered hypothesis"));
  const auto wrap = validate_instance(data, CoverageMode::kWrap);
  CHECK_FALSE(wrap.has_errors());
  CHECK(wrap.contains("uncovered hypothesis"));

  const auto instance = ProblemInstance::build(data, CoverageMode::kWrap);
  CHECK(instance.num_regions() == 2);
  CHECK(instance.wrapped_regions() == 1);
  CHECK(instance.region(1) == std::vector<HypothesisId>{1});
}

TEST_CASE("validate_instance structural problems") {
  CHECK(validate_instance(make_data({1, 1}, {2}, {{0}, {2}}, {{0, 1}}), CoverageMode::kStrict)
            .contains("out-of-range outcome"));
  CHECK(validate_instance(make_data({1, 1}, {2}, {{0}, {}}, {{0, 1}}), CoverageMode::kStrict)
            .contains("missing outcome entries"));
  CHECK(validate_instance(make_data({1, 1}, {2}, {{0}}, {{0, 1}}), CoverageMode::kStrict)
            .contains("missing outcome entries"));
  CHECK(validate_instance(make_data({1, 1}, {0}, {{0}, {0}}, {{0, 1}}), CoverageMode::kStrict)
            .contains("arity < 1"));
  CHECK(validate_instance(make_data({1, 1}, {2}, {{0}, {1}}, {{0, 5}}), CoverageMode::kStrict)
            .contains("references unknown hypothesis"));
  const auto empty_region =
      validate_instance(make_data({1, 1}, {2}, {{0}, {1}}, {{0, 1}, {}}), CoverageMode::kStrict);
  CHECK(empty_region.contains("empty region"));
  CHECK_FALSE(empty_region.has_errors());
  const auto unnormalized =
      validate_instance(make_data({2, 3}, {2}, {{0}, {1}}, {{0, 1}}), CoverageMode::kStrict);
  CHECK(unnormalized.contains("non-normalized prior"));
  CHECK_FALSE(unnormalized.has_errors());
}

TEST_CASE("priors are normalized at build") {
  const auto instance =
      ProblemInstance::build(make_data({2, 3, 5}, {2}, {{0}, {1}, {0}}, {{0, 1, 2}}));
  double total = 0.0;
  for (double p : instance.priors()) total += p;
  CHECK(std::abs(total - 1.0) <= 1e-12);
  CHECK(instance.prior(2) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(instance.raw_weight(1) == 3.0);
}

TEST_CASE("consistent_hypotheses examples") {
  const auto two = fixtures::two_point_instance();
  const auto all = consistent_hypotheses(two, Evidence{});
  CHECK(all.consistent == std::vector<HypothesisId>{0, 1});
  CHECK(all.total_mass == doctest::Approx(1.0));

  const auto one = consistent_hypotheses(two, Evidence{{{0, 0}}});
  CHECK(one.consistent == std::vector<HypothesisId>{0});

  // Both hypotheses answer t1 with 0, so (t1, 1) leaves nothing.
  CHECK_THROWS_AS(consistent_hypotheses(two, Evidence{{{1, 1}}}), ContradictoryEvidence);
}

TEST_CASE("consistent_hypotheses matches a per-hypothesis filter on a random instance") {
  RandomInstanceParams params;
  params.min_hypotheses = params.max_hypotheses = 20;
  params.min_tests = params.max_tests = 10;
  const auto instance = random_instance(11, params);
  CounterRng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    // Three observations answered by a random hypothesis, on distinct tests.
    const HypothesisId truth = rng.below(instance.num_hypotheses());
    std::vector<TestId> tests{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    for (std::size_t i = 0; i < 3; ++i) std::swap(tests[i], tests[i + rng.below(10 - i)]);
    Evidence evidence;
    for (std::size_t i = 0; i < 3; ++i) {
      evidence = evidence.with(tests[i], instance.outcome(truth, tests[i]));
    }
    std::vector<HypothesisId> expected;
    double mass = 0.0;
    for (HypothesisId h = 0; h < instance.num_hypotheses(); ++h) {
      bool keep = true;
      for (std::size_t i = 0; i < 3; ++i) {
        keep = keep && instance.data().outcomes[h][tests[i]] == instance.outcome(truth, tests[i]);
      }
      if (keep) {
        expected.push_back(h);
        mass += instance.prior(h);
      }
    }
    const auto vs = consistent_hypotheses(instance, evidence);
    CHECK(vs.consistent == expected);
    CHECK(vs.total_mass == doctest::Approx(mass).epsilon(1e-12));
  }
}

TEST_CASE("posterior examples") {
  const auto four = fixtures::orthogonal_instance();
  const auto prior = posterior(four, Evidence{});
  for (HypothesisId h = 0; h < 4; ++h) CHECK(prior[h] == doctest::Approx(0.25));

  const auto half = posterior(four, Evidence{{{0, 1}}});
  CHECK(half == std::vector<double>{0.0, 0.0, 0.5, 0.5});

  const auto skewed =
      ProblemInstance::build(make_data({0.1, 0.2, 0.7}, {2}, {{0}, {0}, {1}}, {{0, 1, 2}}));
  const auto post = posterior(skewed, Evidence{{{0, 0}}});
  CHECK(post[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(post[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(post[2] == 0.0);
  double total = 0.0;
  for (double p : post) total += p;
  CHECK(std::abs(total - 1.0) <= 1e-12);
}

TEST_CASE("is_solved examples") {
  CHECK(is_solved(fixtures::all_shared_instance(), Evidence{}) == RegionId{0});
  CHECK_FALSE(is_solved(fixtures::two_point_instance(), Evidence{}).has_value());

  const auto instance = random_instance(3);
  for (HypothesisId h = 0; h < instance.num_hypotheses(); ++h) {
    // Observing every test isolates h's indistinguishability class; a single
    // survivor is always inside one of its regions under strict coverage.
    Evidence evidence;
    for (TestId t = 0; t < instance.num_tests(); ++t) {
      evidence = evidence.with(t, instance.outcome(h, t));
    }
    const auto vs = consistent_hypotheses(instance, evidence);
    if (vs.consistent.size() != 1) continue;
    const auto region = is_solved(instance, evidence);
    REQUIRE(region.has_value());
    const auto& members = instance.region(*region);
    CHECK(std::find(members.begin(), members.end(), h) != members.end());
  }
}

TEST_CASE("is_solved picks the lowest containing region and stays solved") {
  const auto instance = fixtures::overlap_instance();
  // (t0, 0) removes h2: {h0, h1} lies in r0 only.
  CHECK(is_solved(instance, Evidence{{{0, 0}}}) == RegionId{0});
  CHECK(is_solved(instance, Evidence{{{0, 0}, {1, 0}}}) == RegionId{0});
  CHECK(is_solved(instance, Evidence{{{1, 0}}}) == RegionId{1});
  CHECK_FALSE(is_solved(instance, Evidence{}).has_value());
}

TEST_CASE("apply_test examples") {
  const Evidence empty;
  const Evidence one = apply_test(empty, 0, 1);
  CHECK(one.observations() == std::vector<Observation>{{0, 1}});
  CHECK(empty.empty());

  const Evidence two = Evidence{{{3, 0}, {1, 1}}};
  const Evidence three = apply_test(two, 2, 0);
  CHECK(three.observations() == std::vector<Observation>{{3, 0}, {1, 1}, {2, 0}});
  CHECK(two.size() == 2);

  CHECK_THROWS_AS(apply_test(two, 1, 0), DuplicateTest);
  CHECK_THROWS_AS(Evidence({{1, 0}, {1, 1}}), DuplicateTest);
  CHECK(three.without_last() == two);
}

TEST_CASE("version space is monotone and order independent") {
  const auto instance = random_instance(21);
  CounterRng rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    const HypothesisId truth = rng.below(instance.num_hypotheses());
    std::vector<Observation> pairs;
    for (TestId t = 0; t < instance.num_tests(); ++t) pairs.push_back({t, instance.outcome(truth, t)});
    std::vector<Observation> reversed(pairs.rbegin(), pairs.rend());
    Evidence forward;
    std::vector<HypothesisId> previous = consistent_hypotheses(instance, forward).consistent;
    for (const Observation& o : pairs) {
      forward = forward.with(o.test, o.outcome);
      const auto now = consistent_hypotheses(instance, forward).consistent;
      CHECK(std::includes(previous.begin(), previous.end(), now.begin(), now.end()));
      previous = now;
    }
    const Evidence backward(reversed);
    CHECK(consistent_hypotheses(instance, backward).consistent ==
          consistent_hypotheses(instance, forward).consistent);
    CHECK(is_solved(instance, backward) == is_solved(instance, forward));
  }
}

TEST_CASE("coverage and arithmetic modes parse") {
  CHECK(parse_coverage_mode("strict") == CoverageMode::kStrict);
  CHECK(parse_coverage_mode("wrap") == CoverageMode::kWrap);
  CHECK_THROWS(parse_coverage_mode("loose"));
}
