#include "drd/policies.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstring>
#include <sstream>
#include <variant>

#include "drd/chp.hpp"
#include "drd/rng.hpp"

namespace drd {

// ---------------------------------------------------------------------------
// Marginal gain

template <class Scalar>
GainEvaluator<Scalar>::GainEvaluator(const ProblemInstance& instance, const SubregionIndex& index)
    : instance_(&instance), index_(&index), priors_(priors_as<Scalar>(instance)) {
  set_evidence(Evidence{});
}

template <class Scalar>
void GainEvaluator<Scalar>::set_evidence(const Evidence& evidence) {
  consistent_.clear();
  masses_.assign(index_->size(), Scalar(0));
  current_mass_ = 0;
  for (HypothesisId h = 0; h < instance_->num_hypotheses(); ++h) {
    if (!is_consistent(*instance_, evidence, h)) continue;
    consistent_.push_back(h);
    masses_[index_->subregion_of(h)] += priors_[h];
    current_mass_ += priors_[h];
  }
  if (consistent_.empty()) {
    throw ContradictoryEvidence("contradictory evidence: no hypothesis is consistent");
  }
  current_weight_ = hyperedge_weight<Scalar>(masses_, *index_);
  evidence_ = evidence;
}

template <class Scalar>
bool GainEvaluator<Scalar>::splits(TestId test) const {
  const Outcome first = instance_->outcome(consistent_.front(), test);
  return std::any_of(consistent_.begin(), consistent_.end(),
                     [&](HypothesisId h) { return instance_->outcome(h, test) != first; });
}

template <class Scalar>
Scalar GainEvaluator<Scalar>::gain(TestId test) const {
  if (evidence_.contains(test)) {
    throw DuplicateTest("test " + std::to_string(test) + " already in evidence");
  }
  // A test that cannot split the version space leaves every mass unchanged.
  if (!splits(test)) return Scalar(0);

  const int arity = instance_->arity(test);
  std::vector<std::vector<Scalar>> outcome_masses(arity);
  std::vector<Scalar> outcome_totals(arity, Scalar(0));
  for (HypothesisId h : consistent_) {
    const Outcome o = instance_->outcome(h, test);
    if (outcome_masses[o].empty()) outcome_masses[o].assign(index_->size(), Scalar(0));
    outcome_masses[o][index_->subregion_of(h)] += priors_[h];
    outcome_totals[o] += priors_[h];
  }
  Scalar expected_remaining(0);
  for (int o = 0; o < arity; ++o) {
    if (outcome_totals[o] == 0) continue;
    expected_remaining += outcome_totals[o] / current_mass_ *
                          hyperedge_weight<Scalar>(outcome_masses[o], *index_);
  }
  Scalar delta = current_weight_ - expected_remaining;
  if (delta < 0) {
    if constexpr (std::is_same_v<Scalar, double>) {
      if (delta < -kGainTolerance) {
        throw InternalInconsistency("negative marginal gain " + std::to_string(delta));
      }
      delta = 0.0;
    } else {
      throw InternalInconsistency("negative exact marginal gain");
    }
  }
  return delta;
}

template <class Scalar>
Scalar marginal_gain(const ProblemInstance& instance, const Evidence& evidence, TestId test,
                     const SubregionIndex& index) {
  GainEvaluator<Scalar> evaluator(instance, index);
  evaluator.set_evidence(evidence);
  return evaluator.gain(test);
}

template class GainEvaluator<double>;
template class GainEvaluator<Rational>;
template double marginal_gain<double>(const ProblemInstance&, const Evidence&, TestId,
                                      const SubregionIndex&);
template Rational marginal_gain<Rational>(const ProblemInstance&, const Evidence&, TestId,
                                          const SubregionIndex&);

// ---------------------------------------------------------------------------
// Greedy selection

namespace {

bool extends(const Evidence& longer, const Evidence& shorter) {
  const auto& a = longer.observations();
  const auto& b = shorter.observations();
  return a.size() >= b.size() && std::equal(b.begin(), b.end(), a.begin());
}

template <class Scalar>
class GreedyEngine {
 public:
  GreedyEngine(const ProblemInstance& instance, const SubregionIndex& index, bool lazy)
      : instance_(&instance),
        index_(&index),
        lazy_(lazy),
        evaluator_(instance, index),
        bounds_(instance.num_tests()) {}

  std::optional<GreedyChoice> select(const Evidence& evidence) {
    evaluator_.set_evidence(evidence);
    const bool solved = containing_region(*instance_, evaluator_.consistent()).has_value();
    if (solved) {
      // Every gain is at most the current weight, which must vanish.
      if (is_positive(evaluator_.current_weight())) {
        throw InternalInconsistency("solved state with surviving hyperedge weight");
      }
      return std::nullopt;
    }

    if (!lazy_ || !extends(evidence, last_evidence_)) {
      std::fill(bounds_.begin(), bounds_.end(), std::nullopt);
    }
    last_evidence_ = evidence;

    std::vector<TestId> candidates;
    for (TestId t = 0; t < instance_->num_tests(); ++t) {
      if (!evidence.contains(t)) candidates.push_back(t);
    }
    // Unknown bounds sort first, then larger bounds, then lower ids.
    std::stable_sort(candidates.begin(), candidates.end(), [&](TestId a, TestId b) {
      const auto& ba = bounds_[a];
      const auto& bb = bounds_[b];
      if (!ba || !bb) return !ba && bb;
      if (*ba != *bb) return *ba > *bb;
      return a < b;
    });

    Scalar slack(0);
    if constexpr (std::is_same_v<Scalar, double>) slack = 1e-9 * evaluator_.current_weight();

    std::optional<std::pair<Scalar, TestId>> best;
    for (TestId t : candidates) {
      if (best && bounds_[t] && *bounds_[t] < best->first - slack) break;
      Scalar value = evaluator_.gain(t);
      ++evaluations_;
      if (!best || value > best->first || (value == best->first && t < best->second)) {
        best.emplace(value, t);
      }
      bounds_[t] = std::move(value);
    }

    if (best && is_positive(best->first)) {
      return GreedyChoice{best->second, to_double(best->first)};
    }
    for (TestId t : candidates) {
      if (evaluator_.splits(t)) {
        throw InternalInconsistency(
            "no test has positive gain on an unsolved state although test " +
            std::to_string(t) + " splits the version space");
      }
    }
    throw InfeasiblePolicy("infeasible under test set: no remaining test splits the version space");
  }

  std::size_t evaluations() const { return evaluations_; }

 private:
  bool is_positive(const Scalar& value) const {
    if constexpr (std::is_same_v<Scalar, double>) {
      const double scale = std::pow(evaluator_.current_mass(), index_->k());
      return value / scale > kGainTolerance;
    } else {
      return value > 0;
    }
  }

  const ProblemInstance* instance_;
  const SubregionIndex* index_;
  bool lazy_;
  GainEvaluator<Scalar> evaluator_;
  std::vector<std::optional<Scalar>> bounds_;
  Evidence last_evidence_;
  std::size_t evaluations_ = 0;
};

}  // namespace

struct GreedySelector::Impl {
  std::variant<GreedyEngine<double>, GreedyEngine<Rational>> engine;
};

GreedySelector::GreedySelector(const ProblemInstance& instance, const SubregionIndex& index,
                               ArithMode arith, bool lazy)
    : impl_(arith == ArithMode::kFloat
                ? std::make_unique<Impl>(Impl{GreedyEngine<double>(instance, index, lazy)})
                : std::make_unique<Impl>(Impl{GreedyEngine<Rational>(instance, index, lazy)})) {}

GreedySelector::~GreedySelector() = default;
GreedySelector::GreedySelector(GreedySelector&&) noexcept = default;
GreedySelector& GreedySelector::operator=(GreedySelector&&) noexcept = default;

std::optional<GreedyChoice> GreedySelector::select(const Evidence& evidence) {
  return std::visit([&](auto& engine) { return engine.select(evidence); }, impl_->engine);
}

std::size_t GreedySelector::evaluations() const {
  return std::visit([](const auto& engine) { return engine.evaluations(); }, impl_->engine);
}

std::optional<TestId> select_test_greedy(const ProblemInstance& instance, const Evidence& evidence,
                                         const SubregionIndex& index, GreedySelector* lazy_state) {
  std::optional<GreedyChoice> choice;
  if (lazy_state) {
    choice = lazy_state->select(evidence);
  } else {
    GreedySelector eager(instance, index, ArithMode::kFloat, false);
    choice = eager.select(evidence);
  }
  if (!choice) return std::nullopt;
  return choice->test;
}

// ---------------------------------------------------------------------------
// Value of information

double max_expected_utility(const ProblemInstance& instance,
                            std::span<const HypothesisId> consistent) {
  std::vector<double> region_mass(instance.num_regions(), 0.0);
  double total = 0.0;
  for (HypothesisId h : consistent) {
    total += instance.prior(h);
    for (RegionId r : instance.regions_of(h)) region_mass[r] += instance.prior(h);
  }
  if (total <= 0.0) return 0.0;
  double best = 0.0;
  for (double m : region_mass) best = std::max(best, m / total);
  return best;
}

namespace {

double voi_from_version_space(const ProblemInstance& instance,
                              const std::vector<HypothesisId>& consistent, double total,
                              double current_utility, TestId test) {
  std::vector<std::vector<HypothesisId>> by_outcome(instance.arity(test));
  for (HypothesisId h : consistent) by_outcome[instance.outcome(h, test)].push_back(h);
  double expected = 0.0;
  for (const auto& part : by_outcome) {
    if (part.empty()) continue;
    double mass = 0.0;
    for (HypothesisId h : part) mass += instance.prior(h);
    expected += mass / total * max_expected_utility(instance, part);
  }
  return expected - current_utility;
}

bool splits_version_space(const ProblemInstance& instance,
                          const std::vector<HypothesisId>& consistent, TestId test) {
  const Outcome first = instance.outcome(consistent.front(), test);
  return std::any_of(consistent.begin(), consistent.end(),
                     [&](HypothesisId h) { return instance.outcome(h, test) != first; });
}

/// Myopic VoI over informative tests; ties to the lowest test id.
std::optional<GreedyChoice> select_voi(const ProblemInstance& instance, const Evidence& evidence) {
  const VersionSpace vs = consistent_hypotheses(instance, evidence);
  if (containing_region(instance, vs.consistent)) return std::nullopt;
  const double current = max_expected_utility(instance, vs.consistent);
  std::optional<GreedyChoice> best;
  for (TestId t = 0; t < instance.num_tests(); ++t) {
    if (evidence.contains(t) || !splits_version_space(instance, vs.consistent, t)) continue;
    const double value = voi_from_version_space(instance, vs.consistent, vs.total_mass, current, t);
    if (!best || value > best->gain) best = GreedyChoice{t, value};
  }
  if (!best) {
    throw InfeasiblePolicy("infeasible under test set: no remaining test splits the version space");
  }
  return best;
}

}  // namespace

double voi_gain(const ProblemInstance& instance, const Evidence& evidence, TestId test) {
  if (evidence.contains(test)) {
    throw DuplicateTest("test " + std::to_string(test) + " already in evidence");
  }
  const VersionSpace vs = consistent_hypotheses(instance, evidence);
  return voi_from_version_space(instance, vs.consistent, vs.total_mass,
                                max_expected_utility(instance, vs.consistent), test);
}

// ---------------------------------------------------------------------------
// Policies and baselines

std::string to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kHec: return "hec";
    case PolicyKind::kGbs: return "gbs";
    case PolicyKind::kGbsHec: return "gbs-hec";
    case PolicyKind::kEc2: return "ec2";
    case PolicyKind::kEc2Hec: return "ec2-hec";
    case PolicyKind::kVoi: return "voi";
  }
  return "unknown";
}

PolicyKind parse_policy_kind(const std::string& text) {
  for (PolicyKind kind : {PolicyKind::kHec, PolicyKind::kGbs, PolicyKind::kGbsHec,
                          PolicyKind::kEc2, PolicyKind::kEc2Hec, PolicyKind::kVoi}) {
    if (text == to_string(kind)) return kind;
  }
  throw std::invalid_argument("unknown policy: " + text +
                              " (expected hec, gbs, gbs-hec, ec2, ec2-hec or voi)");
}

std::vector<PolicyKind> parse_policy_list(const std::string& text) {
  std::vector<PolicyKind> result;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (!item.empty()) result.push_back(parse_policy_kind(item));
  }
  if (result.empty()) throw std::invalid_argument("empty policy list");
  return result;
}

Termination termination_of(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kGbs: return Termination::kSingleHypothesis;
    case PolicyKind::kEc2: return Termination::kSingleAssignedRegion;
    default: return Termination::kDrdSolved;
  }
}

namespace {

InstanceData copy_without_regions(const ProblemInstance& instance) {
  InstanceData data = instance.data();
  data.regions.clear();
  return data;
}

}  // namespace

ProblemInstance singleton_region_instance(const ProblemInstance& instance) {
  InstanceData data = copy_without_regions(instance);
  for (HypothesisId h = 0; h < instance.num_hypotheses(); ++h) data.regions.push_back({h});
  return ProblemInstance::build(std::move(data));
}

std::uint64_t instance_hash(const ProblemInstance& instance) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  auto mix = [&hash](std::uint64_t value) {
    for (int byte = 0; byte < 8; ++byte) {
      hash ^= (value >> (8 * byte)) & 0xff;
      hash *= 0x100000001b3ULL;
    }
  };
  const InstanceData& data = instance.data();
  mix(data.weights.size());
  for (double w : data.weights) mix(std::bit_cast<std::uint64_t>(w));
  mix(data.arities.size());
  for (int a : data.arities) mix(static_cast<std::uint64_t>(a));
  for (const auto& row : data.outcomes) {
    for (Outcome o : row) mix(static_cast<std::uint64_t>(o));
  }
  mix(data.regions.size());
  for (const auto& members : data.regions) {
    mix(members.size());
    for (HypothesisId h : members) mix(h);
  }
  return hash;
}

ProblemInstance random_partition_instance(const ProblemInstance& instance, std::uint64_t seed) {
  CounterRng rng = CounterRng(seed).derive({instance_hash(instance)});
  InstanceData data = copy_without_regions(instance);
  data.regions.assign(instance.num_regions(), {});
  for (HypothesisId h = 0; h < instance.num_hypotheses(); ++h) {
    const auto& regions = instance.regions_of(h);
    if (regions.empty()) {
      throw InvalidInstance(ValidationReport{
          {{Severity::kError, "uncovered hypothesis " + std::to_string(h)}}});
    }
    data.regions[regions[rng.below(regions.size())]].push_back(h);
  }
  return ProblemInstance::build(std::move(data));
}

Policy::Policy(PolicyKind kind, const ProblemInstance& instance, PolicyOptions options)
    : kind_(kind), options_(options) {
  instance_ = std::make_shared<const ProblemInstance>(instance);
  index_ = std::make_shared<const SubregionIndex>(SubregionIndex::build(instance, options.k_override));
  switch (kind) {
    case PolicyKind::kHec:
    case PolicyKind::kVoi:
      selection_instance_ = instance_;
      selection_index_ = index_;
      break;
    case PolicyKind::kGbs:
    case PolicyKind::kGbsHec:
      selection_instance_ = std::make_shared<const ProblemInstance>(singleton_region_instance(instance));
      selection_index_ = std::make_shared<const SubregionIndex>(SubregionIndex::build(*selection_instance_));
      break;
    case PolicyKind::kEc2:
    case PolicyKind::kEc2Hec:
      selection_instance_ = std::make_shared<const ProblemInstance>(
          random_partition_instance(instance, options.seed));
      selection_index_ = std::make_shared<const SubregionIndex>(SubregionIndex::build(*selection_instance_));
      break;
  }
  total_weight_ = total_hyperedge_weight<double>(*instance_, *index_);
}

bool Policy::terminated(const Evidence& evidence) const {
  const VersionSpace vs = consistent_hypotheses(*instance_, evidence);
  switch (termination()) {
    case Termination::kSingleHypothesis:
      return vs.consistent.size() == 1;
    case Termination::kSingleAssignedRegion:
      return containing_region(*selection_instance_, vs.consistent).has_value();
    case Termination::kDrdSolved:
      break;
  }
  return containing_region(*instance_, vs.consistent).has_value();
}

Policy make_baseline(PolicyKind kind, const ProblemInstance& instance, std::uint64_t seed) {
  PolicyOptions options;
  options.seed = seed;
  return Policy(kind, instance, options);
}

// ---------------------------------------------------------------------------
// Execution

Evidence PolicyTrace::evidence() const {
  Evidence evidence;
  for (const auto& step : steps) evidence = evidence.with(step.test, step.outcome);
  return evidence;
}

DecisionTreeCache::Key DecisionTreeCache::key_of(const Evidence& evidence) {
  Key key;
  key.reserve(evidence.size());
  for (const auto& obs : evidence.observations()) key.emplace_back(obs.test, obs.outcome);
  return key;
}

DecisionTreeCache::Entry& DecisionTreeCache::slot(const Evidence& evidence) {
  return entries_[key_of(evidence)];
}

namespace {

double objective_at(const Policy& policy, const Evidence& evidence) {
  const VersionSpace vs = consistent_hypotheses(policy.instance(), evidence);
  const auto masses = subregion_masses<double>(policy.instance(), policy.index(), vs.consistent);
  const double remaining = hyperedge_weight<double>(masses, policy.index());
  return std::clamp(policy.total_weight() - remaining, 0.0, policy.total_weight());
}

}  // namespace

PolicyStepper::PolicyStepper(const Policy& policy) : policy_(&policy) {}

std::optional<GreedyChoice> PolicyStepper::select(const Evidence& evidence) {
  if (policy_->kind() == PolicyKind::kVoi) return select_voi(policy_->instance(), evidence);
  if (!selector_) {
    selector_.emplace(policy_->selection_instance(), policy_->selection_index(),
                      policy_->options().arith, policy_->options().lazy);
  }
  return selector_->select(evidence);
}

PolicyTrace run_policy(const Policy& policy, HypothesisId true_hypothesis,
                       DecisionTreeCache* cache, bool allow_incomplete) {
  const ProblemInstance& instance = policy.instance();
  if (true_hypothesis >= instance.num_hypotheses()) {
    throw std::out_of_range("unknown hypothesis " + std::to_string(true_hypothesis));
  }
  PolicyTrace trace;
  trace.true_hypothesis = true_hypothesis;
  PolicyStepper stepper(policy);
  Evidence evidence;
  const auto stuck = [&](const std::string& why) {
    if (!allow_incomplete) throw InfeasiblePolicy(why);
    trace.completed = false;
    trace.failure = why;
  };

  while (!policy.terminated(evidence)) {
    if (evidence.size() >= instance.num_tests()) {
      stuck("infeasible under test set: tests exhausted");
      return trace;
    }
    DecisionTreeCache::Entry* entry = cache ? &cache->slot(evidence) : nullptr;
    std::optional<GreedyChoice> choice;
    if (entry && entry->has_choice) {
      choice = entry->choice;
    } else {
      try {
        choice = stepper.select(evidence);
      } catch (const InfeasiblePolicy& e) {
        stuck(e.what());
        return trace;
      }
      if (entry) {
        entry->has_choice = true;
        entry->choice = choice;
      }
    }
    if (!choice) {
      stuck("policy stopped before its termination condition");
      return trace;
    }
    const Outcome outcome = instance.outcome(true_hypothesis, choice->test);
    Evidence next = evidence.with(choice->test, outcome);

    double objective;
    DecisionTreeCache::Entry* next_entry = cache ? &cache->slot(next) : nullptr;
    if (next_entry && next_entry->objective) {
      objective = *next_entry->objective;
    } else {
      objective = objective_at(policy, next);
      if (next_entry) next_entry->objective = objective;
    }
    trace.steps.push_back({choice->test, outcome, choice->gain, objective});
    evidence = std::move(next);
  }
  trace.terminal_region = is_solved(instance, evidence);
  return trace;
}

PolicyEvaluation expected_cost(const Policy& policy) {
  const ProblemInstance& instance = policy.instance();
  PolicyEvaluation evaluation;
  DecisionTreeCache cache;
  for (HypothesisId h = 0; h < instance.num_hypotheses(); ++h) {
    const auto start = std::chrono::steady_clock::now();
    const PolicyTrace trace = run_policy(policy, h, &cache);
    const auto stop = std::chrono::steady_clock::now();
    evaluation.queries.push_back(trace.num_queries());
    evaluation.wall_ms.push_back(std::chrono::duration<double, std::milli>(stop - start).count());
    evaluation.expected_cost += instance.prior(h) * static_cast<double>(trace.num_queries());
    evaluation.max_cost = std::max(evaluation.max_cost, trace.num_queries());
  }
  return evaluation;
}

}  // namespace drd
