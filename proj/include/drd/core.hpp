#pragma once

// Problem representation for decision region determination: hypotheses with
// a prior, deterministic tests, and (possibly overlapping) decision regions.

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace drd {

using HypothesisId = std::size_t;
using TestId = std::size_t;
using RegionId = std::size_t;
using Outcome = int;

/// Base class for every error raised by the library.
class DrdError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ContradictoryEvidence : public DrdError {
 public:
  using DrdError::DrdError;
};

class DuplicateTest : public DrdError {
 public:
  using DrdError::DrdError;
};

/// Raised when two routes that must agree (e.g. the direct solved check and
/// the hyperedge weight) disagree. Always a bug, never a tolerance issue.
class InternalInconsistency : public DrdError {
 public:
  using DrdError::DrdError;
};

class InfeasiblePolicy : public DrdError {
 public:
  using DrdError::DrdError;
};

class LimitExceeded : public DrdError {
 public:
  using DrdError::DrdError;
};

/// How hypotheses that belong to no region are treated.
enum class CoverageMode {
  kStrict,  // reject the instance
  kWrap     // give each uncovered hypothesis its own fresh singleton region
};

std::string to_string(CoverageMode mode);
CoverageMode parse_coverage_mode(const std::string& text);

/// Unvalidated instance contents, as read from a file or produced by a
/// generator.
struct InstanceData {
  std::vector<double> weights;                     // per hypothesis
  std::vector<int> arities;                        // per test
  std::vector<std::vector<Outcome>> outcomes;      // [hypothesis][test]
  std::vector<std::vector<HypothesisId>> regions;  // member hypotheses
};

enum class Severity { kWarning, kError };

struct ValidationIssue {
  Severity severity;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  bool empty() const { return issues.empty(); }
  bool has_errors() const;
  bool contains(const std::string& fragment) const;
  std::string to_string() const;
};

ValidationReport validate_instance(const InstanceData& data, CoverageMode mode);

class InvalidInstance : public DrdError {
 public:
  explicit InvalidInstance(ValidationReport report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

/// A validated, immutable DRD instance. Priors are normalized at build time;
/// the raw weights are kept so exact arithmetic can rebuild the prior.
class ProblemInstance {
 public:
  /// Validates `data` and throws InvalidInstance on any error. In wrap mode
  /// uncovered hypotheses receive fresh singleton regions appended after the
  /// given ones.
  static ProblemInstance build(InstanceData data,
                               CoverageMode mode = CoverageMode::kStrict);

  std::size_t num_hypotheses() const { return data_.weights.size(); }
  std::size_t num_tests() const { return data_.arities.size(); }
  std::size_t num_regions() const { return data_.regions.size(); }

  double prior(HypothesisId h) const { return prior_[h]; }
  std::span<const double> priors() const { return prior_; }
  double raw_weight(HypothesisId h) const { return data_.weights[h]; }
  double raw_weight_total() const { return raw_total_; }

  int arity(TestId t) const { return data_.arities[t]; }
  Outcome outcome(HypothesisId h, TestId t) const {
    return data_.outcomes[h][t];
  }

  const std::vector<HypothesisId>& region(RegionId r) const {
    return data_.regions[r];
  }
  /// Regions containing `h`, ascending.
  const std::vector<RegionId>& regions_of(HypothesisId h) const {
    return regions_of_[h];
  }
  bool in_region(HypothesisId h, RegionId r) const;

  std::size_t wrapped_regions() const { return wrapped_; }
  CoverageMode coverage() const { return coverage_; }

  /// Contents after normalization of region member lists and wrapping.
  const InstanceData& data() const { return data_; }

 private:
  InstanceData data_;
  std::vector<double> prior_;
  double raw_total_ = 0.0;
  std::vector<std::vector<RegionId>> regions_of_;
  std::size_t wrapped_ = 0;
  CoverageMode coverage_ = CoverageMode::kStrict;
};

struct Observation {
  TestId test;
  Outcome outcome;

  friend bool operator==(const Observation&, const Observation&) = default;
};

/// Ordered set of (test, outcome) pairs; a test appears at most once.
class Evidence {
 public:
  Evidence() = default;
  explicit Evidence(std::vector<Observation> observations);

  bool empty() const { return observations_.empty(); }
  std::size_t size() const { return observations_.size(); }
  bool contains(TestId test) const;
  const std::vector<Observation>& observations() const { return observations_; }

  Evidence with(TestId test, Outcome outcome) const;
  Evidence without_last() const;

  friend bool operator==(const Evidence&, const Evidence&) = default;

 private:
  std::vector<Observation> observations_;
};

Evidence apply_test(const Evidence& evidence, TestId test, Outcome outcome);

struct VersionSpace {
  std::vector<HypothesisId> consistent;  // ascending
  double total_mass = 0.0;
};

bool is_consistent(const ProblemInstance& instance, const Evidence& evidence,
                   HypothesisId h);

/// Hypotheses agreeing with every observation. Throws ContradictoryEvidence
/// when none remain.
VersionSpace consistent_hypotheses(const ProblemInstance& instance,
                                   const Evidence& evidence);

/// P(h | evidence) for every hypothesis (zero outside the version space).
std::vector<double> posterior(const ProblemInstance& instance,
                              const Evidence& evidence);

/// Lowest-id region containing all of `hypotheses`, if any.
std::optional<RegionId> containing_region(const ProblemInstance& instance,
                                          std::span<const HypothesisId> hypotheses);

std::optional<RegionId> is_solved(const ProblemInstance& instance,
                                  const Evidence& evidence);

}  // namespace drd
