#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>

#include "drd/hypergraph.hpp"
#include "drd/oracle.hpp"
#include "fixtures.hpp"

using namespace drd;
using drd::fixtures::make_data;

namespace {

// Signature of every hypothesis straight from the region lists.
std::map<std::vector<RegionId>, std::vector<HypothesisId>> signature_groups(
    const ProblemInstance& instance) {
  std::vector<std::vector<RegionId>> sig(instance.num_hypotheses());
  for (RegionId r = 0; r < instance.num_regions(); ++r) {
    for (HypothesisId h : instance.region(r)) sig[h].push_back(r);
  }
  std::map<std::vector<RegionId>, std::vector<HypothesisId>> groups;
  for (HypothesisId h = 0; h < sig.size(); ++h) groups[sig[h]].push_back(h);
  return groups;
}

// All subsets of size 1..k of subregions sharing a region, without pruning.
std::set<std::vector<SubregionId>> all_shared_subsets(const SubregionIndex& index) {
  std::set<std::vector<SubregionId>> result;
  const std::size_t g = index.size();
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << g); ++mask) {
    std::vector<SubregionId> members;
    for (SubregionId i = 0; i < g; ++i) {
      if (mask >> i & 1) members.push_back(i);
    }
    if (members.size() > static_cast<std::size_t>(index.k())) continue;
    for (RegionId r = 0; r < index.num_regions(); ++r) {
      bool all = true;
      for (SubregionId m : members) {
        const auto& sig = index.subregions()[m].signature;
        all = all && std::find(sig.begin(), sig.end(), r) != sig.end();
      }
      if (all) {
        result.insert(members);
        break;
      }
    }
  }
  return result;
}

}  // namespace

TEST_CASE("compute_subregions on two overlapping regions") {
  const auto subs = compute_subregions(fixtures::overlap_instance());
  REQUIRE(subs.size() == 3);
  // Lexicographic by signature: {r0} < {r0, r1} < {r1}.
  CHECK(subs[0].signature == std::vector<RegionId>{0});
  CHECK(subs[0].members == std::vector<HypothesisId>{0});
  CHECK(subs[1].signature == std::vector<RegionId>{0, 1});
  CHECK(subs[1].members == std::vector<HypothesisId>{1});
  CHECK(subs[2].signature == std::vector<RegionId>{1});
  CHECK(subs[2].members == std::vector<HypothesisId>{2});
  CHECK(subs[1].mass == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("compute_subregions on disjoint singleton regions") {
  const auto subs = compute_subregions(fixtures::orthogonal_instance());
  CHECK(subs.size() == 4);
  for (SubregionId g = 0; g < 4; ++g) CHECK(subs[g].members.size() == 1);
}

TEST_CASE("compute_subregions matches a map-by-signature regrouping") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto instance = random_instance(seed);
    const auto subs = compute_subregions(instance);
    const auto groups = signature_groups(instance);
    REQUIRE(subs.size() == groups.size());
    std::size_t i = 0;
    double total = 0.0;
    for (const auto& [sig, members] : groups) {
      CHECK(subs[i].signature == sig);
      CHECK(subs[i].members == members);
      total += subs[i].mass;
      ++i;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("cardinality_k examples") {
  // Every hypothesis in exactly two regions, at least two subregions per
  // region: a ring of three regions.
  const auto ring = ProblemInstance::build(
      make_data({1, 1, 1}, {2}, {{0}, {1}, {0}}, {{0, 2}, {0, 1}, {1, 2}}));
  CHECK(cardinality_k(ring) == 3);

  // h0 in six regions; r0 holds seven distinct signatures, so the degree
  // term (6) is the minimum.
  std::vector<std::vector<HypothesisId>> regions(6);
  for (auto& r : regions) r.push_back(0);
  for (HypothesisId h = 1; h <= 5; ++h) {
    regions[0].push_back(h);
    regions[h].push_back(h);
  }
  regions[0].push_back(6);
  std::vector<std::vector<Outcome>> outcomes(7, std::vector<Outcome>{0});
  const auto six = ProblemInstance::build(make_data(std::vector<double>(7, 1.0), {2}, outcomes, regions));
  CHECK(cardinality_k(six) == 7);

  CHECK(cardinality_k(fixtures::orthogonal_instance()) == 2);
  CHECK(cardinality_k(fixtures::overlap_instance()) == 3);
}

TEST_CASE("k override below the formula value is rejected") {
  const auto instance = fixtures::overlap_instance();
  CHECK_THROWS_AS(SubregionIndex::build(instance, 2), std::invalid_argument);
  CHECK(SubregionIndex::build(instance, 4).k() == 4);
}

TEST_CASE("is_hyperedge examples") {
  const auto index = SubregionIndex::build(fixtures::overlap_instance());
  REQUIRE(index.k() == 3);
  const std::vector<SubregionId> same{1, 1, 1};
  CHECK_FALSE(is_hyperedge(same, index));
  const std::vector<SubregionId> spanning{0, 1, 2};
  CHECK(is_hyperedge(spanning, index));
  const std::vector<SubregionId> left{0, 0, 1};
  CHECK_FALSE(is_hyperedge(left, index));

  // The full edge set is exactly the multisets containing g1 and g3.
  for (SubregionId a = 0; a < 3; ++a) {
    for (SubregionId b = a; b < 3; ++b) {
      for (SubregionId c = b; c < 3; ++c) {
        const std::vector<SubregionId> m{a, b, c};
        const bool has_first = a == 0;
        const bool has_last = c == 2;
        CHECK(is_hyperedge(m, index) == (has_first && has_last));
      }
    }
  }
  const std::vector<SubregionId> short_multiset{0, 2};
  CHECK_THROWS_AS(is_hyperedge(short_multiset, index), std::invalid_argument);

  const auto disjoint = SubregionIndex::build(fixtures::orthogonal_instance());
  const std::vector<SubregionId> pair{0, 1};
  CHECK(is_hyperedge(pair, disjoint));
}

TEST_CASE("enumerate_shared_sets on two overlapping regions") {
  const auto index = SubregionIndex::build(fixtures::overlap_instance());
  const auto sets = enumerate_shared_sets(index);
  std::vector<std::vector<SubregionId>> members;
  for (const auto& s : sets) members.push_back(s.members);
  CHECK(members == std::vector<std::vector<SubregionId>>{{0}, {1}, {2}, {0, 1}, {1, 2}});
  // Lowest witness region: {g2} lies in r0 and r1.
  CHECK(sets[1].witness_region == 0);
  CHECK(sets[3].witness_region == 0);
  CHECK(sets[4].witness_region == 1);
}

TEST_CASE("enumerate_shared_sets on disjoint regions is singletons only") {
  const auto index = SubregionIndex::build(fixtures::orthogonal_instance());
  const auto sets = enumerate_shared_sets(index);
  CHECK(sets.size() == 4);
  for (const auto& s : sets) CHECK(s.members.size() == 1);
}

TEST_CASE("pruned enumeration equals the unpruned subset scan") {
  std::size_t checked = 0;
  for (std::uint64_t seed = 0; seed < 200 && checked < 100; ++seed) {
    const auto instance = random_instance(seed);
    const auto index = SubregionIndex::build(instance);
    if (index.size() > 8 || index.k() > 4) continue;
    ++checked;
    const auto expected = all_shared_subsets(index);
    const auto sets = enumerate_shared_sets(index);
    std::set<std::vector<SubregionId>> got;
    for (const auto& s : sets) {
      got.insert(s.members);
      // Witness really contains every member.
      for (SubregionId m : s.members) {
        const auto& sig = index.subregions()[m].signature;
        CHECK(std::find(sig.begin(), sig.end(), s.witness_region) != sig.end());
      }
    }
    CHECK(got.size() == sets.size());
    CHECK(got == expected);
    // Downward closure.
    for (const auto& s : got) {
      for (std::size_t drop = 0; drop < s.size() && s.size() > 1; ++drop) {
        auto sub = s;
        sub.erase(sub.begin() + static_cast<std::ptrdiff_t>(drop));
        CHECK(got.count(sub) == 1);
      }
    }
  }
  CHECK(checked >= 100);
}

TEST_CASE("solved_iff_edges_cut examples") {
  const auto shared = fixtures::all_shared_instance();
  const auto shared_index = SubregionIndex::build(shared);
  auto check = solved_iff_edges_cut(shared, Evidence{}, shared_index);
  CHECK(check.solved_direct);
  CHECK(check.edges_empty);

  const auto overlap = fixtures::overlap_instance();
  const auto index = SubregionIndex::build(overlap);
  // (t0, 0) eliminates g3.
  check = solved_iff_edges_cut(overlap, Evidence{{{0, 0}}}, index);
  CHECK(check.solved_direct);
  CHECK(check.edges_empty);
  check = solved_iff_edges_cut(overlap, Evidence{}, index, ArithMode::kFloat);
  CHECK_FALSE(check.solved_direct);
  CHECK_FALSE(check.edges_empty);
}

TEST_CASE("solved_iff_edges_cut agrees on random reachable states") {
  const auto report = check_theorem1({0, 20}, 10, ArithMode::kRational);
  CHECK(report.checks >= 200);
  CHECK(report.passed());
  const auto floating = check_theorem1({0, 20}, 10, ArithMode::kFloat);
  CHECK(floating.passed());
}

TEST_CASE("index is evidence independent") {
  const auto instance = random_instance(4);
  const auto index = SubregionIndex::build(instance);
  // Conditioning only changes masses: every hypothesis keeps its subregion.
  for (HypothesisId h = 0; h < instance.num_hypotheses(); ++h) {
    const auto& g = index.subregions()[index.subregion_of(h)];
    CHECK(std::find(g.members.begin(), g.members.end(), h) != g.members.end());
    CHECK(g.signature == instance.regions_of(h));
  }
}
