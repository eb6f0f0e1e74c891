#pragma once

// Test-selection policies: the greedy hyperedge-cutting policy (eager or
// lazy), the GBS / EC2 / VoI baselines, policy execution and expected cost.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "drd/arith.hpp"
#include "drd/core.hpp"
#include "drd/hypergraph.hpp"

namespace drd {

/// Float-mode stop threshold on the normalized best gain.
inline constexpr double kGainTolerance = 1e-9;

/// Expected reduction in hyperedge mass from running `test`:
///   W(n) - sum_o (n^o / N) W(n^o)
/// with n the subregion masses consistent with the evidence (prior scale).
template <class Scalar>
Scalar marginal_gain(const ProblemInstance& instance, const Evidence& evidence, TestId test,
                     const SubregionIndex& index);

/// Gains of many tests against one evidence state. Priors, consistent
/// hypotheses and the current hyperedge weight are computed once.
template <class Scalar>
class GainEvaluator {
 public:
  GainEvaluator(const ProblemInstance& instance, const SubregionIndex& index);

  void set_evidence(const Evidence& evidence);

  /// Prior-scale gain; requires a test outside the current evidence.
  Scalar gain(TestId test) const;

  /// Whether `test` has at least two outcomes among consistent hypotheses.
  bool splits(TestId test) const;

  const std::vector<HypothesisId>& consistent() const { return consistent_; }
  const Scalar& current_weight() const { return current_weight_; }
  const Scalar& current_mass() const { return current_mass_; }

 private:
  const ProblemInstance* instance_;
  const SubregionIndex* index_;
  std::vector<Scalar> priors_;
  std::vector<HypothesisId> consistent_;
  std::vector<Scalar> masses_;
  Scalar current_mass_{0};
  Scalar current_weight_{0};
  Evidence evidence_;
};

struct GreedyChoice {
  TestId test = 0;
  double gain = 0.0;  // prior-scale marginal gain
};

/// Greedy argmax of the marginal gain, ties to the lowest test id.
///
/// In lazy mode the selector keeps the gains computed at earlier (smaller)
/// evidence states as upper bounds; after every observation all bounds are
/// stale and only the top of the queue is re-evaluated until a fresh value
/// dominates every remaining bound. The choice is identical to a full scan.
///
/// Returns nullopt exactly when the selection instance is solved. A best
/// gain of zero on an unsolved instance throws InfeasiblePolicy when no
/// remaining test splits the version space and InternalInconsistency
/// otherwise.
class GreedySelector {
 public:
  GreedySelector(const ProblemInstance& instance, const SubregionIndex& index,
                 ArithMode arith = ArithMode::kFloat, bool lazy = true);
  ~GreedySelector();
  GreedySelector(GreedySelector&&) noexcept;
  GreedySelector& operator=(GreedySelector&&) noexcept;

  std::optional<GreedyChoice> select(const Evidence& evidence);

  /// Number of gain evaluations performed so far.
  std::size_t evaluations() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// One-shot selection. Pass a selector to reuse lazy bounds across calls;
/// without one a fresh eager scan is made.
std::optional<TestId> select_test_greedy(const ProblemInstance& instance,
                                         const Evidence& evidence,
                                         const SubregionIndex& index,
                                         GreedySelector* lazy_state = nullptr);

/// U*(S): best probability that a single decision succeeds given the
/// consistent hypotheses.
double max_expected_utility(const ProblemInstance& instance,
                            std::span<const HypothesisId> consistent);

/// Myopic value of information of `test` given the evidence.
double voi_gain(const ProblemInstance& instance, const Evidence& evidence, TestId test);

enum class PolicyKind { kHec, kGbs, kGbsHec, kEc2, kEc2Hec, kVoi };

enum class Termination { kDrdSolved, kSingleHypothesis, kSingleAssignedRegion };

std::string to_string(PolicyKind kind);
PolicyKind parse_policy_kind(const std::string& text);
/// Comma-separated list such as "hec,ec2-hec,voi".
std::vector<PolicyKind> parse_policy_list(const std::string& text);
Termination termination_of(PolicyKind kind);

/// Every hypothesis in its own region (the ODT special case).
ProblemInstance singleton_region_instance(const ProblemInstance& instance);

/// Each hypothesis keeps one of its regions, drawn uniformly from a stream
/// keyed by (instance hash, seed). The result partitions the hypotheses.
ProblemInstance random_partition_instance(const ProblemInstance& instance, std::uint64_t seed);

/// FNV-1a over weights, arities, outcomes and regions.
std::uint64_t instance_hash(const ProblemInstance& instance);

struct PolicyOptions {
  std::uint64_t seed = 0;
  ArithMode arith = ArithMode::kFloat;
  bool lazy = true;
  std::optional<int> k_override;  // for the original instance's index
};

/// A policy bound to an instance: the selection instance (original, singleton
/// or random partition) with its index, plus the original index used for the
/// terminal check and for reporting f_HEC.
class Policy {
 public:
  Policy(PolicyKind kind, const ProblemInstance& instance, PolicyOptions options = {});

  PolicyKind kind() const { return kind_; }
  Termination termination() const { return termination_of(kind_); }
  const PolicyOptions& options() const { return options_; }

  const ProblemInstance& instance() const { return *instance_; }
  const SubregionIndex& index() const { return *index_; }
  const ProblemInstance& selection_instance() const { return *selection_instance_; }
  const SubregionIndex& selection_index() const { return *selection_index_; }

  bool terminated(const Evidence& evidence) const;

  /// W of the original instance with nothing observed.
  double total_weight() const { return total_weight_; }

 private:
  PolicyKind kind_;
  PolicyOptions options_;
  std::shared_ptr<const ProblemInstance> instance_;
  std::shared_ptr<const SubregionIndex> index_;
  std::shared_ptr<const ProblemInstance> selection_instance_;
  std::shared_ptr<const SubregionIndex> selection_index_;
  double total_weight_ = 0.0;
};

Policy make_baseline(PolicyKind kind, const ProblemInstance& instance, std::uint64_t seed);

struct TraceStep {
  TestId test = 0;
  Outcome outcome = 0;
  double gain = 0.0;             // selection criterion of the chosen test
  double objective_after = 0.0;  // f_HEC on the original instance
};

struct PolicyTrace {
  HypothesisId true_hypothesis = 0;
  std::vector<TraceStep> steps;
  std::optional<RegionId> terminal_region;
  bool completed = true;  // false only for incomplete runs, see run_policy
  std::string failure;

  std::size_t num_queries() const { return steps.size(); }
  Evidence evidence() const;
};

/// Memo of a policy's decision tree, keyed by the evidence sequence. A
/// deterministic policy chooses the same test at the same evidence, so runs
/// over different true hypotheses share their common prefixes.
class DecisionTreeCache {
 public:
  struct Entry {
    bool has_choice = false;
    std::optional<GreedyChoice> choice;
    std::optional<double> objective;
  };
  using Key = std::vector<std::pair<TestId, Outcome>>;

  /// Entry for `evidence`, created empty on first access.
  Entry& slot(const Evidence& evidence);
  std::size_t size() const { return entries_.size(); }

 private:
  static Key key_of(const Evidence& evidence);
  std::map<Key, Entry> entries_;
};

/// One policy's selection rule with its lazy state, for callers that drive
/// the evidence themselves (run_policy, interactive sessions).
class PolicyStepper {
 public:
  explicit PolicyStepper(const Policy& policy);
  std::optional<GreedyChoice> select(const Evidence& evidence);

 private:
  const Policy* policy_;
  std::optional<GreedySelector> selector_;
};

/// Runs select -> observe -> append until the policy's termination rule
/// holds. Throws InfeasiblePolicy if the tests cannot reach it, unless
/// `allow_incomplete`, in which case the partial trace comes back with
/// completed = false.
PolicyTrace run_policy(const Policy& policy, HypothesisId true_hypothesis,
                       DecisionTreeCache* cache = nullptr, bool allow_incomplete = false);

struct PolicyEvaluation {
  double expected_cost = 0.0;          // sum_h P(h) |T(pi, h)|
  std::vector<std::size_t> queries;    // per hypothesis
  std::size_t max_cost = 0;
  std::vector<double> wall_ms;         // per hypothesis run
};

PolicyEvaluation expected_cost(const Policy& policy);

}  // namespace drd
