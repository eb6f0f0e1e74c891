#pragma once

// Small hand-built instances shared by the unit tests.

#include <vector>

#include "drd/core.hpp"

namespace drd::fixtures {

inline InstanceData make_data(std::vector<double> weights, std::vector<int> arities,
                              std::vector<std::vector<Outcome>> outcomes,
                              std::vector<std::vector<HypothesisId>> regions) {
  InstanceData d;
  d.weights = std::move(weights);
  d.arities = std::move(arities);
  d.outcomes = std::move(outcomes);
  d.regions = std::move(regions);
  return d;
}

// Two overlapping regions: h0 only in r0, h1 in both, h2 only in r1. The
// subregions are g1 = {h0}, g2 = {h1}, g3 = {h2} and k = 3. Test t0
// separates h2 from the rest, t1 separates h0 from the rest.
inline ProblemInstance overlap_instance(std::vector<double> weights = {1, 1, 1}) {
  return ProblemInstance::build(make_data(std::move(weights), {2, 2},
                                          {{0, 1}, {0, 0}, {1, 0}},
                                          {{0, 1}, {1, 2}}));
}

// Every hypothesis in every one of two regions.
inline ProblemInstance all_shared_instance(std::size_t n = 4) {
  std::vector<HypothesisId> all;
  std::vector<std::vector<Outcome>> outcomes;
  for (HypothesisId h = 0; h < n; ++h) {
    all.push_back(h);
    outcomes.push_back({static_cast<Outcome>(h % 2), static_cast<Outcome>(h / 2 % 2)});
  }
  return ProblemInstance::build(
      make_data(std::vector<double>(n, 1.0), {2, 2}, outcomes, {all, all}));
}

// Two hypotheses in disjoint singleton regions; t0 discriminates, t1 is
// constant.
inline ProblemInstance two_point_instance() {
  return ProblemInstance::build(make_data({1, 1}, {2, 2}, {{0, 0}, {1, 0}}, {{0}, {1}}));
}

// Four uniform hypotheses in singleton regions; t0 and t1 split them 2/2
// orthogonally.
inline ProblemInstance orthogonal_instance() {
  return ProblemInstance::build(make_data({1, 1, 1, 1}, {2, 2},
                                          {{0, 0}, {0, 1}, {1, 0}, {1, 1}},
                                          {{0}, {1}, {2}, {3}}));
}

}  // namespace drd::fixtures
