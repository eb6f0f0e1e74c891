#include "drd/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace drd {

namespace {

constexpr double kNormalizationTolerance = 1e-12;

void add(ValidationReport& report, Severity severity, std::string message) {
  report.issues.push_back({severity, std::move(message)});
}

}  // namespace

std::string to_string(CoverageMode mode) {
  return mode == CoverageMode::kStrict ? "strict" : "wrap";
}

CoverageMode parse_coverage_mode(const std::string& text) {
  if (text == "strict") return CoverageMode::kStrict;
  if (text == "wrap") return CoverageMode::kWrap;
  throw std::invalid_argument("unknown coverage mode: " + text +
                              " (expected strict or wrap)");
}

bool ValidationReport::has_errors() const {
  return std::any_of(issues.begin(), issues.end(), [](const auto& issue) {
    return issue.severity == Severity::kError;
  });
}

bool ValidationReport::contains(const std::string& fragment) const {
  return std::any_of(issues.begin(), issues.end(), [&](const auto& issue) {
    return issue.message.find(fragment) != std::string::npos;
  });
}

std::string ValidationReport::to_string() const {
  std::ostringstream out;
  for (const auto& issue : issues) {
    out << (issue.severity == Severity::kError ? "error: " : "warning: ")
        << issue.message << '\n';
  }
  return out.str();
}

InvalidInstance::InvalidInstance(ValidationReport report)
    : DrdError("invalid instance:\n" + report.to_string()),
      report_(std::move(report)) {}

ValidationReport validate_instance(const InstanceData& data, CoverageMode mode) {
  ValidationReport report;
  const std::size_t num_h = data.weights.size();
  const std::size_t num_t = data.arities.size();

  if (num_h == 0) add(report, Severity::kError, "instance has no hypotheses");

  double total = 0.0;
  for (std::size_t h = 0; h < num_h; ++h) {
    const double w = data.weights[h];
    if (!std::isfinite(w) || w < 0.0) {
      add(report, Severity::kError,
          "invalid prior weight for hypothesis " + std::to_string(h));
    } else if (w == 0.0) {
      add(report, Severity::kError,
          "zero prior weight for hypothesis " + std::to_string(h));
    } else {
      total += w;
    }
  }
  if (num_h > 0 && total > 0.0 &&
      std::abs(total - 1.0) > kNormalizationTolerance) {
    add(report, Severity::kWarning,
        "non-normalized prior (sum " + std::to_string(total) +
            "), normalized at load");
  }

  for (std::size_t t = 0; t < num_t; ++t) {
    if (data.arities[t] < 1) {
      add(report, Severity::kError,
          "test " + std::to_string(t) + " has arity < 1");
    }
  }

  if (data.outcomes.size() != num_h) {
    add(report, Severity::kError,
        "missing outcome entries: matrix has " + std::to_string(data.outcomes.size()) +
            " rows, expected " + std::to_string(num_h));
  }
  for (std::size_t h = 0; h < data.outcomes.size(); ++h) {
    const auto& row = data.outcomes[h];
    if (row.size() != num_t) {
      add(report, Severity::kError,
          "missing outcome entries for hypothesis " + std::to_string(h));
      continue;
    }
    for (std::size_t t = 0; t < num_t; ++t) {
      if (row[t] < 0 || row[t] >= data.arities[t]) {
        add(report, Severity::kError,
            "out-of-range outcome " + std::to_string(row[t]) +
                " for hypothesis " + std::to_string(h) + ", test " +
                std::to_string(t));
      }
    }
  }

  std::vector<bool> covered(num_h, false);
  for (std::size_t r = 0; r < data.regions.size(); ++r) {
    const auto& members = data.regions[r];
    if (members.empty()) {
      add(report, Severity::kWarning, "empty region " + std::to_string(r));
    }
    for (HypothesisId h : members) {
      if (h >= num_h) {
        add(report, Severity::kError,
            "region " + std::to_string(r) + " references unknown hypothesis " +
                std::to_string(h));
      } else {
        covered[h] = true;
      }
    }
  }
  for (std::size_t h = 0; h < num_h; ++h) {
    if (!covered[h]) {
      add(report,
          mode == CoverageMode::kStrict ? Severity::kError : Severity::kWarning,
          "uncovered hypothesis " + std::to_string(h));
    }
  }
  return report;
}

ProblemInstance ProblemInstance::build(InstanceData data, CoverageMode mode) {
  ValidationReport report = validate_instance(data, mode);
  if (report.has_errors()) throw InvalidInstance(std::move(report));

  ProblemInstance instance;
  instance.coverage_ = mode;
  const std::size_t num_h = data.weights.size();

  for (auto& members : data.regions) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
  }
  std::vector<bool> covered(num_h, false);
  for (const auto& members : data.regions) {
    for (HypothesisId h : members) covered[h] = true;
  }
  for (HypothesisId h = 0; h < num_h; ++h) {
    if (!covered[h]) {
      data.regions.push_back({h});
      ++instance.wrapped_;
    }
  }

  instance.raw_total_ =
      std::accumulate(data.weights.begin(), data.weights.end(), 0.0);
  instance.prior_.reserve(num_h);
  for (double w : data.weights) instance.prior_.push_back(w / instance.raw_total_);

  instance.regions_of_.assign(num_h, {});
  for (RegionId r = 0; r < data.regions.size(); ++r) {
    for (HypothesisId h : data.regions[r]) instance.regions_of_[h].push_back(r);
  }
  instance.data_ = std::move(data);
  return instance;
}

bool ProblemInstance::in_region(HypothesisId h, RegionId r) const {
  const auto& regions = regions_of_[h];
  return std::binary_search(regions.begin(), regions.end(), r);
}

Evidence::Evidence(std::vector<Observation> observations) {
  for (const auto& obs : observations) {
    if (contains(obs.test)) {
      throw DuplicateTest("test " + std::to_string(obs.test) +
                          " appears twice in evidence");
    }
    observations_.push_back(obs);
  }
}

bool Evidence::contains(TestId test) const {
  return std::any_of(observations_.begin(), observations_.end(),
                     [test](const Observation& o) { return o.test == test; });
}

Evidence Evidence::with(TestId test, Outcome outcome) const {
  if (contains(test)) {
    throw DuplicateTest("test " + std::to_string(test) +
                        " already in evidence");
  }
  Evidence next = *this;
  next.observations_.push_back({test, outcome});
  return next;
}

Evidence Evidence::without_last() const {
  Evidence next = *this;
  if (!next.observations_.empty()) next.observations_.pop_back();
  return next;
}

Evidence apply_test(const Evidence& evidence, TestId test, Outcome outcome) {
  return evidence.with(test, outcome);
}

bool is_consistent(const ProblemInstance& instance, const Evidence& evidence,
                   HypothesisId h) {
  for (const auto& obs : evidence.observations()) {
    if (instance.outcome(h, obs.test) != obs.outcome) return false;
  }
  return true;
}

VersionSpace consistent_hypotheses(const ProblemInstance& instance,
                                   const Evidence& evidence) {
  for (const auto& obs : evidence.observations()) {
    if (obs.test >= instance.num_tests()) {
      throw std::out_of_range("unknown test " + std::to_string(obs.test));
    }
  }
  VersionSpace vs;
  for (HypothesisId h = 0; h < instance.num_hypotheses(); ++h) {
    if (is_consistent(instance, evidence, h)) {
      vs.consistent.push_back(h);
      vs.total_mass += instance.prior(h);
    }
  }
  if (vs.consistent.empty()) {
    throw ContradictoryEvidence("contradictory evidence: no hypothesis is consistent");
  }
  return vs;
}

std::vector<double> posterior(const ProblemInstance& instance,
                              const Evidence& evidence) {
  const VersionSpace vs = consistent_hypotheses(instance, evidence);
  std::vector<double> result(instance.num_hypotheses(), 0.0);
  for (HypothesisId h : vs.consistent) {
    result[h] = instance.prior(h) / vs.total_mass;
  }
  return result;
}

std::optional<RegionId> containing_region(const ProblemInstance& instance,
                                          std::span<const HypothesisId> hypotheses) {
  if (hypotheses.empty()) return std::nullopt;
  std::vector<RegionId> common = instance.regions_of(hypotheses.front());
  std::vector<RegionId> scratch;
  for (std::size_t i = 1; i < hypotheses.size() && !common.empty(); ++i) {
    const auto& regions = instance.regions_of(hypotheses[i]);
    scratch.clear();
    std::set_intersection(common.begin(), common.end(), regions.begin(),
                          regions.end(), std::back_inserter(scratch));
    common.swap(scratch);
  }
  if (common.empty()) return std::nullopt;
  return common.front();
}

std::optional<RegionId> is_solved(const ProblemInstance& instance,
                                  const Evidence& evidence) {
  const VersionSpace vs = consistent_hypotheses(instance, evidence);
  return containing_region(instance, vs.consistent);
}

}  // namespace drd
