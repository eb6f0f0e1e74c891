#include "drd/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "drd/chp.hpp"
#include "drd/hypergraph.hpp"
#include "drd/policies.hpp"
#include "drd/rng.hpp"

namespace drd {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<TestId> shuffled_tests(std::size_t n, CounterRng& rng) {
  std::vector<TestId> order(n);
  std::iota(order.begin(), order.end(), TestId{0});
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  return order;
}

// Random truthful chain: the states reached by answering a random test order
// as hypothesis `truth`, from the empty evidence to every test observed.
std::vector<Evidence> truthful_chain(const ProblemInstance& instance, HypothesisId truth,
                                     CounterRng& rng) {
  std::vector<Evidence> states{Evidence{}};
  for (TestId t : shuffled_tests(instance.num_tests(), rng)) {
    states.push_back(states.back().with(t, instance.outcome(truth, t)));
  }
  return states;
}

void add_counterexample(OracleReport& report, std::uint64_t seed, const Evidence& evidence,
                        std::string detail) {
  // Keep the report bounded; the first few are enough for replay.
  if (report.counterexamples.size() < 20) {
    report.counterexamples.push_back({seed, describe(evidence), std::move(detail)});
  } else {
    report.counterexamples.back().detail = "(further counterexamples omitted)";
  }
}

std::optional<int> k_override_for(const ProblemInstance& instance, int k_floor) {
  if (k_floor > cardinality_k(instance)) return k_floor;
  return std::nullopt;
}

std::string fmt(double x) {
  std::ostringstream out;
  out.precision(17);
  out << x;
  return out.str();
}

}  // namespace

ProblemInstance random_instance(std::uint64_t seed, const RandomInstanceParams& params) {
  CounterRng rng = CounterRng(seed).derive({0x6f7261636c65ULL});
  const auto pick = [&rng](std::size_t lo, std::size_t hi) {
    return static_cast<std::size_t>(rng.between(static_cast<std::int64_t>(lo),
                                                static_cast<std::int64_t>(hi)));
  };
  const std::size_t n = pick(params.min_hypotheses, params.max_hypotheses);
  const std::size_t num_tests = pick(params.min_tests, params.max_tests);

  InstanceData data;
  data.weights.resize(n);
  for (auto& w : data.weights) {
    w = params.uniform_prior ? 1.0 : static_cast<double>(rng.between(1, params.max_weight));
  }
  data.arities.resize(num_tests);
  for (auto& a : data.arities) a = static_cast<int>(rng.between(2, params.max_arity));
  data.outcomes.assign(n, std::vector<Outcome>(num_tests));
  for (auto& row : data.outcomes) {
    for (TestId t = 0; t < num_tests; ++t) {
      row[t] = static_cast<Outcome>(rng.below(static_cast<std::uint64_t>(data.arities[t])));
    }
  }

  if (params.singleton_regions) {
    for (HypothesisId h = 0; h < n; ++h) data.regions.push_back({h});
  } else {
    const std::size_t num_regions = pick(params.min_regions, params.max_regions);
    data.regions.assign(num_regions, {});
    for (HypothesisId h = 0; h < n; ++h) {
      const std::size_t home = rng.below(num_regions);
      for (RegionId r = 0; r < num_regions; ++r) {
        if (r == home || rng.bernoulli(params.overlap_probability)) data.regions[r].push_back(h);
      }
    }
    // An empty region is legal but uninteresting; give it a random member.
    // Under a partition the member moves so regions stay disjoint.
    for (RegionId r = 0; r < num_regions; ++r) {
      if (!data.regions[r].empty()) continue;
      const HypothesisId h = rng.below(n);
      if (params.overlap_probability <= 0.0) {
        for (auto& other : data.regions) std::erase(other, h);
      }
      data.regions[r].push_back(h);
    }
    if (params.overlap_probability <= 0.0) {
      // Moving members may empty a region again; drop empties.
      std::erase_if(data.regions, [](const auto& region) { return region.empty(); });
    }
  }
  return ProblemInstance::build(std::move(data), CoverageMode::kStrict);
}

OracleGrouping group_by_signature(const ProblemInstance& instance) {
  const std::size_t n = instance.num_hypotheses();
  std::vector<std::vector<RegionId>> signature(n);
  for (RegionId r = 0; r < instance.num_regions(); ++r) {
    for (HypothesisId h : instance.region(r)) signature[h].push_back(r);
  }
  std::unordered_map<std::string, std::size_t> slot;
  OracleGrouping grouping;
  for (HypothesisId h = 0; h < n; ++h) {
    std::string key;
    for (RegionId r : signature[h]) key += std::to_string(r) + ",";
    auto [it, inserted] = slot.try_emplace(key, grouping.members.size());
    if (inserted) {
      grouping.signatures.push_back(signature[h]);
      grouping.members.emplace_back();
    }
    grouping.members[it->second].push_back(h);
  }
  return grouping;
}

template <class Scalar>
Scalar brute_force_edge_weight(std::span<const Scalar> masses,
                               const std::vector<std::vector<RegionId>>& memberships, int k,
                               std::size_t max_subregions, int max_k) {
  const std::size_t g = masses.size();
  if (memberships.size() != g) throw std::invalid_argument("memberships do not match masses");
  if (g > max_subregions) {
    throw LimitExceeded("brute force over " + std::to_string(g) + " subregions exceeds limit " +
                        std::to_string(max_subregions));
  }
  if (k < 1 || k > max_k) {
    throw LimitExceeded("brute force with k=" + std::to_string(k) + " exceeds limit " +
                        std::to_string(max_k));
  }
  Scalar total(0);
  if (g == 0) return total;
  // Nondecreasing index sequences enumerate each multiset exactly once.
  std::vector<std::size_t> pick(static_cast<std::size_t>(k), 0);
  while (true) {
    bool contained = false;
    for (RegionId r : memberships[pick[0]]) {
      bool all = true;
      for (std::size_t i = 1; i < pick.size() && all; ++i) {
        const auto& m = memberships[pick[i]];
        all = std::find(m.begin(), m.end(), r) != m.end();
      }
      if (all) {
        contained = true;
        break;
      }
    }
    if (!contained) {
      Scalar product(1);
      for (std::size_t i : pick) product *= masses[i];
      total += product;
    }
    // Advance to the next nondecreasing sequence.
    int pos = k - 1;
    while (pos >= 0 && pick[pos] == g - 1) --pos;
    if (pos < 0) break;
    ++pick[pos];
    for (int i = pos + 1; i < k; ++i) pick[i] = pick[pos];
  }
  return total;
}

template double brute_force_edge_weight<double>(std::span<const double>,
                                                const std::vector<std::vector<RegionId>>&, int,
                                                std::size_t, int);
template Rational brute_force_edge_weight<Rational>(std::span<const Rational>,
                                                    const std::vector<std::vector<RegionId>>&,
                                                    int, std::size_t, int);

double optimal_policy_cost(const ProblemInstance& instance, std::size_t max_hypotheses,
                           std::size_t max_tests) {
  const std::size_t n = instance.num_hypotheses();
  const std::size_t num_tests = instance.num_tests();
  if (n > max_hypotheses || n > 63) {
    throw LimitExceeded("optimal search over " + std::to_string(n) + " hypotheses");
  }
  if (num_tests > max_tests) {
    throw LimitExceeded("optimal search over " + std::to_string(num_tests) + " tests");
  }
  using Mask = std::uint64_t;
  std::vector<Mask> region_mask(instance.num_regions(), 0);
  for (RegionId r = 0; r < instance.num_regions(); ++r) {
    for (HypothesisId h : instance.region(r)) region_mask[r] |= Mask{1} << h;
  }
  const auto mass = [&](Mask v) {
    double m = 0.0;
    for (HypothesisId h = 0; h < n; ++h) {
      if (v >> h & 1) m += instance.raw_weight(h);
    }
    return m;
  };

  // A test already observed is constant on every reachable version space, so
  // it never splits again; the version space alone determines the state.
  std::unordered_map<Mask, double> memo;
  const double inf = std::numeric_limits<double>::infinity();
  auto solve = [&](auto&& self, Mask v) -> double {
    for (Mask r : region_mask) {
      if ((v & ~r) == 0) return 0.0;
    }
    if (auto it = memo.find(v); it != memo.end()) return it->second;
    const double total = mass(v);
    double best = inf;
    for (TestId t = 0; t < num_tests; ++t) {
      std::vector<Mask> child(static_cast<std::size_t>(instance.arity(t)), 0);
      for (HypothesisId h = 0; h < n; ++h) {
        if (v >> h & 1) child[static_cast<std::size_t>(instance.outcome(h, t))] |= Mask{1} << h;
      }
      if (std::count_if(child.begin(), child.end(), [](Mask c) { return c != 0; }) < 2) continue;
      double cost = 1.0;
      for (Mask c : child) {
        if (c == 0) continue;
        cost += mass(c) / total * self(self, c);
        if (cost >= best) break;
      }
      best = std::min(best, cost);
    }
    memo.emplace(v, best);
    return best;
  };
  const Mask all = n == 0 ? 0 : (Mask{1} << n) - 1;
  const double cost = solve(solve, all);
  if (!std::isfinite(cost)) {
    throw InfeasiblePolicy("some reachable unsolved state has no splitting test");
  }
  return cost;
}

namespace {

std::vector<HypothesisId> consistent_set(const ProblemInstance& instance,
                                         const Evidence& evidence) {
  std::vector<HypothesisId> v;
  for (HypothesisId h = 0; h < instance.num_hypotheses(); ++h) {
    bool ok = true;
    for (const Observation& o : evidence.observations()) {
      ok = ok && instance.outcome(h, o.test) == o.outcome;
    }
    if (ok) v.push_back(h);
  }
  return v;
}

// Edge weight between hypotheses of different classes, prior scale.
double ec2_weight(const ProblemInstance& instance, const std::vector<HypothesisId>& v,
                  const std::vector<RegionId>& class_of) {
  double w = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = i + 1; j < v.size(); ++j) {
      if (class_of[v[i]] != class_of[v[j]]) w += instance.prior(v[i]) * instance.prior(v[j]);
    }
  }
  return w;
}

}  // namespace

double ec2_gain(const ProblemInstance& instance, const Evidence& evidence, TestId test) {
  std::vector<RegionId> class_of(instance.num_hypotheses(), 0);
  std::vector<int> seen(instance.num_hypotheses(), 0);
  for (RegionId r = 0; r < instance.num_regions(); ++r) {
    for (HypothesisId h : instance.region(r)) {
      class_of[h] = r;
      ++seen[h];
    }
  }
  if (std::any_of(seen.begin(), seen.end(), [](int c) { return c != 1; })) {
    throw std::invalid_argument("ec2_gain requires a partition instance");
  }
  const auto v = consistent_set(instance, evidence);
  double total = 0.0;
  for (HypothesisId h : v) total += instance.prior(h);
  double expected_after = 0.0;
  for (Outcome o = 0; o < instance.arity(test); ++o) {
    std::vector<HypothesisId> child;
    double child_mass = 0.0;
    for (HypothesisId h : v) {
      if (instance.outcome(h, test) == o) {
        child.push_back(h);
        child_mass += instance.prior(h);
      }
    }
    if (!child.empty()) expected_after += child_mass / total * ec2_weight(instance, child, class_of);
  }
  return ec2_weight(instance, v, class_of) - expected_after;
}

double gbs_eliminated_mass(const ProblemInstance& instance, const Evidence& evidence,
                           TestId test) {
  const auto v = consistent_set(instance, evidence);
  double total = 0.0;
  std::vector<double> by_outcome(static_cast<std::size_t>(instance.arity(test)), 0.0);
  for (HypothesisId h : v) {
    total += instance.prior(h);
    by_outcome[static_cast<std::size_t>(instance.outcome(h, test))] += instance.prior(h);
  }
  double eliminated = 0.0;
  for (double m : by_outcome) eliminated += m / total * (total - m);
  return eliminated;
}

std::string describe(const Evidence& evidence) {
  std::string out = "{";
  for (const Observation& o : evidence.observations()) {
    if (out.size() > 1) out += ",";
    out += "t" + std::to_string(o.test) + "=" + std::to_string(o.outcome);
  }
  return out + "}";
}

std::string OracleReport::summary() const {
  std::ostringstream out;
  out << name << ": " << (passed() ? "PASS" : "FAIL") << " instances=" << instances
      << " skipped=" << skipped << " checks=" << checks << " max_deviation=" << max_deviation;
  if (worst_ratio > 0.0) out << " worst_ratio=" << worst_ratio;
  out << " counterexamples=" << counterexamples.size() << " seconds=" << seconds;
  for (const Counterexample& c : counterexamples) {
    out << "\n  seed=" << c.seed << " evidence=" << c.evidence << " " << c.detail;
  }
  return out.str();
}

namespace {

template <class Scalar>
Scalar random_mass(CounterRng& rng) {
  if (rng.bernoulli(0.25)) return Scalar(0);
  if constexpr (std::is_same_v<Scalar, Rational>) {
    Rational x(static_cast<long>(rng.between(1, 1000)), 997);
    x.canonicalize();
    return x;
  } else {
    return rng.uniform(0.0, 1.0);
  }
}

template <class Scalar>
void weight_equivalence_instance(OracleReport& report, std::uint64_t seed,
                                 std::size_t max_subregions, int max_k, int mass_draws,
                                 int k_floor) {
  const ProblemInstance instance = random_instance(seed);
  const OracleGrouping grouping = group_by_signature(instance);
  if (grouping.members.size() > max_subregions) {
    ++report.skipped;
    return;
  }
  const SubregionIndex index =
      SubregionIndex::build(instance, k_override_for(instance, k_floor));
  if (index.k() > max_k) {
    ++report.skipped;
    return;
  }
  ++report.instances;

  // The two groupings must agree as partitions of the hypotheses.
  std::vector<std::size_t> oracle_of(index.size(), 0);
  bool same_partition = grouping.members.size() == index.size();
  for (std::size_t o = 0; o < grouping.members.size() && same_partition; ++o) {
    const SubregionId g = index.subregion_of(grouping.members[o].front());
    same_partition = index.subregions()[g].members == grouping.members[o];
    oracle_of[g] = o;
  }
  ++report.checks;
  if (!same_partition) {
    add_counterexample(report, seed, Evidence{}, "subregion grouping differs from oracle");
    return;
  }

  CounterRng rng = CounterRng(seed).derive({0x6d61737365ULL});
  for (int draw = 0; draw <= mass_draws; ++draw) {
    std::vector<Scalar> oracle_masses(grouping.members.size(), Scalar(0));
    if (draw == 0) {
      const auto priors = priors_as<Scalar>(instance);
      for (std::size_t o = 0; o < grouping.members.size(); ++o) {
        for (HypothesisId h : grouping.members[o]) oracle_masses[o] += priors[h];
      }
    } else {
      for (auto& m : oracle_masses) m = random_mass<Scalar>(rng);
    }
    std::vector<Scalar> index_masses(index.size());
    for (SubregionId g = 0; g < index.size(); ++g) index_masses[g] = oracle_masses[oracle_of[g]];

    const Scalar expected = brute_force_edge_weight<Scalar>(
        oracle_masses, grouping.signatures, index.k(), max_subregions, max_k);
    const Scalar actual = hyperedge_weight<Scalar>(index_masses, index);
    ++report.checks;
    const double deviation = std::abs(to_double(Scalar(actual - expected)));
    report.max_deviation = std::max(report.max_deviation, deviation);
    bool bad;
    if constexpr (std::is_same_v<Scalar, Rational>) {
      bad = actual != expected;
    } else {
      bad = !(deviation <= 1e-9);
    }
    if (bad) {
      add_counterexample(report, seed, Evidence{},
                         "mass draw " + std::to_string(draw) + ": brute force " +
                             fmt(to_double(expected)) + " vs " + fmt(to_double(actual)));
    }
  }
}

template <class Scalar>
void adaptive_instance(OracleReport& report, std::uint64_t seed, int chains, int k_floor) {
  const ProblemInstance instance = random_instance(seed);
  const SubregionIndex index =
      SubregionIndex::build(instance, k_override_for(instance, k_floor));
  ++report.instances;
  GainEvaluator<Scalar> evaluator(instance, index);
  const auto priors = priors_as<Scalar>(instance);
  const std::size_t num_tests = instance.num_tests();
  CounterRng rng = CounterRng(seed).derive({0x636861696eULL});
  const bool exact = std::is_same_v<Scalar, Rational>;

  for (int c = 0; c < chains; ++c) {
    const HypothesisId truth = rng.below(instance.num_hypotheses());
    const auto states = truthful_chain(instance, truth, rng);
    // gains[i][t] = Delta(t | S_i) for t not in S_i.
    std::vector<std::vector<Scalar>> gains(states.size(), std::vector<Scalar>(num_tests));
    for (std::size_t i = 0; i < states.size(); ++i) {
      evaluator.set_evidence(states[i]);
      const Scalar& w = evaluator.current_weight();
      for (TestId t = 0; t < num_tests; ++t) {
        if (states[i].contains(t)) continue;
        gains[i][t] = evaluator.gain(t);

        // Strong monotonicity: no truthful answer can raise the surviving
        // hyperedge mass.
        for (Outcome o = 0; o < instance.arity(t); ++o) {
          std::vector<Scalar> masses(index.size(), Scalar(0));
          bool reachable = false;
          for (HypothesisId h : evaluator.consistent()) {
            if (instance.outcome(h, t) != o) continue;
            masses[index.subregion_of(h)] += priors[h];
            reachable = true;
          }
          if (!reachable) continue;
          const Scalar child = hyperedge_weight<Scalar>(masses, index);
          ++report.checks;
          const double rise = to_double(Scalar(child - w));
          report.max_deviation = std::max(report.max_deviation, rise);
          if (exact ? child > w : rise > 1e-9) {
            add_counterexample(report, seed, states[i].with(t, o),
                               "f decreased by " + fmt(rise));
          }
        }
      }
    }
    for (std::size_t i = 0; i < states.size(); ++i) {
      for (std::size_t j = i + 1; j < states.size(); ++j) {
        for (TestId t = 0; t < num_tests; ++t) {
          if (states[j].contains(t)) continue;
          ++report.checks;
          const double rise = to_double(Scalar(gains[j][t] - gains[i][t]));
          report.max_deviation = std::max(report.max_deviation, rise);
          if (exact ? gains[j][t] > gains[i][t] : rise > 1e-9) {
            add_counterexample(report, seed, states[j],
                               "gain of t" + std::to_string(t) + " grew by " + fmt(rise) +
                                   " from prefix of length " + std::to_string(i));
          }
        }
      }
    }
  }
}

}  // namespace

OracleReport check_weight_equivalence(SeedRange seeds, ArithMode arith,
                                      std::size_t max_subregions, int max_k, int mass_draws,
                                      int k_floor) {
  const auto start = Clock::now();
  OracleReport report;
  report.name = "weight-equivalence[" + to_string(arith) + "]";
  for (std::uint64_t seed = seeds.begin; seed < seeds.end; ++seed) {
    if (arith == ArithMode::kRational) {
      weight_equivalence_instance<Rational>(report, seed, max_subregions, max_k, mass_draws,
                                           k_floor);
    } else {
      weight_equivalence_instance<double>(report, seed, max_subregions, max_k, mass_draws,
                                         k_floor);
    }
  }
  report.seconds = seconds_since(start);
  return report;
}

OracleReport check_theorem1(SeedRange seeds, int walks_per_instance, ArithMode arith,
                            int k_floor) {
  const auto start = Clock::now();
  OracleReport report;
  report.name = "solved-iff-cut[" + to_string(arith) + "]";
  for (std::uint64_t seed = seeds.begin; seed < seeds.end; ++seed) {
    const ProblemInstance instance = random_instance(seed);
    const SubregionIndex index =
        SubregionIndex::build(instance, k_override_for(instance, k_floor));
    ++report.instances;
    CounterRng rng = CounterRng(seed).derive({0x77616c6bULL});
    for (int w = 0; w < walks_per_instance; ++w) {
      const HypothesisId truth = rng.below(instance.num_hypotheses());
      for (const Evidence& state : truthful_chain(instance, truth, rng)) {
        const SolvedCheck check = solved_iff_edges_cut(instance, state, index, arith);
        ++report.checks;
        if (check.solved_direct != check.edges_empty) {
          add_counterexample(report, seed, state,
                             std::string("solved_direct=") +
                                 (check.solved_direct ? "true" : "false") +
                                 " edges_empty=" + (check.edges_empty ? "true" : "false"));
        }
      }
    }
  }
  report.seconds = seconds_since(start);
  return report;
}

OracleReport check_adaptive_properties(SeedRange seeds, int chains_per_instance,
                                       ArithMode arith, int k_floor) {
  const auto start = Clock::now();
  OracleReport report;
  report.name = "adaptive-properties[" + to_string(arith) + "]";
  for (std::uint64_t seed = seeds.begin; seed < seeds.end; ++seed) {
    if (arith == ArithMode::kRational) {
      adaptive_instance<Rational>(report, seed, chains_per_instance, k_floor);
    } else {
      adaptive_instance<double>(report, seed, chains_per_instance, k_floor);
    }
  }
  report.seconds = seconds_since(start);
  return report;
}

OracleReport check_theorem3(SeedRange seeds, std::size_t max_hypotheses, std::size_t max_tests,
                            int k_floor) {
  const auto start = Clock::now();
  OracleReport report;
  report.name = "greedy-bound";
  RandomInstanceParams params;
  params.max_hypotheses = max_hypotheses;
  params.max_tests = max_tests;
  for (std::uint64_t seed = seeds.begin; seed < seeds.end; ++seed) {
    const ProblemInstance instance = random_instance(seed, params);
    double optimal = 0.0;
    try {
      optimal = optimal_policy_cost(instance, max_hypotheses, max_tests);
    } catch (const InfeasiblePolicy&) {
      ++report.skipped;
      continue;
    }
    ++report.instances;
    PolicyOptions options;
    options.k_override = k_override_for(instance, k_floor);
    const Policy policy(PolicyKind::kHec, instance, options);
    const double greedy = expected_cost(policy).expected_cost;
    const auto priors = instance.priors();
    const double p_min = *std::min_element(priors.begin(), priors.end());
    const double factor = policy.index().k() * std::log(1.0 / p_min) + 1.0;
    ++report.checks;
    if (optimal > 0.0) report.worst_ratio = std::max(report.worst_ratio, greedy / optimal);
    const double excess = greedy - factor * optimal;
    report.max_deviation = std::max(report.max_deviation, excess);
    if (excess > 1e-9) {
      add_counterexample(report, seed, Evidence{},
                         "greedy cost " + fmt(greedy) + " exceeds " + fmt(factor) + " * " +
                             fmt(optimal));
    }
  }
  report.seconds = seconds_since(start);
  return report;
}

namespace {

std::vector<TestId> argmax_set(const std::vector<std::pair<TestId, double>>& scores,
                               double tolerance) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& [t, s] : scores) best = std::max(best, s);
  std::vector<TestId> result;
  for (const auto& [t, s] : scores) {
    if (s >= best - tolerance) result.push_back(t);
  }
  return result;
}

// Walks HEC trajectories for random truths, calling `compare` at every
// unsolved state with the HEC gains of the remaining tests.
template <class Compare>
void hec_walks(OracleReport& report, std::uint64_t seed, const ProblemInstance& instance,
               int walks, Compare&& compare) {
  const SubregionIndex index = SubregionIndex::build(instance);
  GainEvaluator<double> evaluator(instance, index);
  CounterRng rng = CounterRng(seed).derive({0x68656377ULL});
  for (int w = 0; w < walks; ++w) {
    const HypothesisId truth = rng.below(instance.num_hypotheses());
    Evidence evidence;
    while (!is_solved(instance, evidence)) {
      evaluator.set_evidence(evidence);
      std::vector<std::pair<TestId, double>> gains;
      double best = 0.0;
      for (TestId t = 0; t < instance.num_tests(); ++t) {
        if (evidence.contains(t)) continue;
        gains.emplace_back(t, evaluator.gain(t));
        best = std::max(best, gains.back().second);
      }
      if (best <= kGainTolerance * evaluator.current_weight()) break;  // infeasible
      const double tolerance = 1e-9 * evaluator.current_weight();
      const auto hec = argmax_set(gains, tolerance);
      ++report.checks;
      compare(evidence, gains, hec);
      const TestId chosen = hec.front();
      evidence = evidence.with(chosen, instance.outcome(truth, chosen));
    }
  }
}

std::string list_tests(const std::vector<TestId>& tests) {
  std::string out = "[";
  for (TestId t : tests) out += (out.size() > 1 ? "," : "") + std::to_string(t);
  return out + "]";
}

}  // namespace

OracleReport check_partition_equivalence(SeedRange seeds, int walks_per_instance) {
  const auto start = Clock::now();
  OracleReport report;
  report.name = "partition-ec2-equivalence";
  RandomInstanceParams params;
  params.overlap_probability = 0.0;
  for (std::uint64_t seed = seeds.begin; seed < seeds.end; ++seed) {
    const ProblemInstance instance = random_instance(seed, params);
    ++report.instances;
    hec_walks(report, seed, instance, walks_per_instance,
              [&](const Evidence& evidence, const std::vector<std::pair<TestId, double>>& hec_gains,
                  const std::vector<TestId>& hec) {
                std::vector<std::pair<TestId, double>> ec2;
                double scale = 0.0;
                for (const auto& [t, g] : hec_gains) {
                  ec2.emplace_back(t, ec2_gain(instance, evidence, t));
                  scale = std::max(scale, std::abs(ec2.back().second));
                  report.max_deviation =
                      std::max(report.max_deviation, std::abs(ec2.back().second - g));
                }
                const auto expected = argmax_set(ec2, 1e-9 * std::max(scale, 1e-300));
                if (expected != hec) {
                  add_counterexample(report, seed, evidence,
                                     "ec2 argmax " + list_tests(expected) + " vs hec " +
                                         list_tests(hec));
                }
              });
  }
  report.seconds = seconds_since(start);
  return report;
}

OracleReport check_gbs_agreement(SeedRange seeds, int walks_per_instance) {
  const auto start = Clock::now();
  OracleReport report;
  report.name = "gbs-agreement";
  RandomInstanceParams params;
  params.singleton_regions = true;
  params.uniform_prior = true;
  params.max_arity = 2;
  for (std::uint64_t seed = seeds.begin; seed < seeds.end; ++seed) {
    const ProblemInstance instance = random_instance(seed, params);
    ++report.instances;
    hec_walks(report, seed, instance, walks_per_instance,
              [&](const Evidence& evidence, const std::vector<std::pair<TestId, double>>& hec_gains,
                  const std::vector<TestId>& hec) {
                std::vector<std::pair<TestId, double>> gbs;
                for (const auto& [t, g] : hec_gains) {
                  gbs.emplace_back(t, gbs_eliminated_mass(instance, evidence, t));
                }
                const auto expected = argmax_set(gbs, 1e-12);
                if (std::find(expected.begin(), expected.end(), hec.front()) == expected.end()) {
                  add_counterexample(report, seed, evidence,
                                     "hec chose t" + std::to_string(hec.front()) +
                                         ", gbs argmax " + list_tests(expected));
                }
              });
  }
  report.seconds = seconds_since(start);
  return report;
}

}  // namespace drd
