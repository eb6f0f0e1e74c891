#include "drd/cli.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "drd/chp.hpp"
#include "drd/generators.hpp"
#include "drd/hypergraph.hpp"
#include "drd/io.hpp"
#include "drd/policies.hpp"
#include "drd/rng.hpp"

namespace drd {

namespace {

// Raised for bad flag values found after parsing.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CommonFlags {
  std::string coverage;
  std::string arith = "float";
  int k = 0;
  bool quiet = false;

  std::optional<CoverageMode> coverage_mode() const {
    if (coverage.empty()) return std::nullopt;
    return parse_coverage_mode(coverage);
  }
  std::optional<int> k_override() const {
    if (k == 0) return std::nullopt;
    return k;
  }
};

void add_coverage(CLI::App* app, CommonFlags& flags) {
  app->add_option("--coverage", flags.coverage, "strict | wrap (default: as declared)")
      ->check(CLI::IsMember({"strict", "wrap"}));
}
void add_arith(CLI::App* app, CommonFlags& flags) {
  app->add_option("--arith", flags.arith, "float | rational")
      ->check(CLI::IsMember({"float", "rational"}));
}
void add_k(CLI::App* app, CommonFlags& flags) {
  app->add_option("--k", flags.k, "hyperedge cardinality override (>= formula k)");
}
void add_quiet(CLI::App* app, CommonFlags& flags) {
  app->add_flag("--quiet", flags.quiet, "print less");
}

// Rejects a k override below the formula value for this instance.
void check_k(const ProblemInstance& instance, const CommonFlags& flags) {
  if (!flags.k_override()) return;
  const int formula = cardinality_k(instance);
  if (*flags.k_override() < formula) {
    throw UsageError("--k " + std::to_string(*flags.k_override()) +
                     " is below the formula value k = " + std::to_string(formula));
  }
}

std::string printf_string(const char* format, double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, format, value);
  return buffer;
}

// ---- generate --------------------------------------------------------------

struct GenerateFlags {
  CommonFlags common;
  std::string output;
  std::uint64_t seed = 0;
  ClusteredParams clustered;
  std::string embeddings;
  Localization2dParams localization;
};

int cmd_generate(const std::string& family, const GenerateFlags& flags, std::ostream& out) {
  InstanceDocument doc;
  try {
    if (family == "clustered") {
      if (!flags.embeddings.empty()) {
        doc = generate_clustered_from_points(read_embeddings_csv(flags.embeddings),
                                             flags.clustered, flags.seed);
      } else {
        doc = generate_clustered(flags.clustered, flags.seed);
      }
    } else {
      doc = generate_localization_2d(flags.localization, flags.seed);
    }
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (const auto mode = flags.common.coverage_mode()) doc.coverage = *mode;
  const ProblemInstance instance = doc.build();
  check_k(instance, flags.common);
  save_instance(doc, flags.output);

  const int k = flags.common.k_override().value_or(cardinality_k(instance));
  out << "wrote " << flags.output << ": |H|=" << instance.num_hypotheses()
      << " |T|=" << instance.num_tests() << " |R|=" << instance.num_regions()
      << " |G|=" << compute_subregions(instance).size() << " k=" << k;
  if (instance.wrapped_regions() > 0) out << " (wrapped " << instance.wrapped_regions() << ")";
  out << "\n";
  return kExitOk;
}

// ---- run -------------------------------------------------------------------

struct RunFlags {
  CommonFlags common;
  std::string instance;
  std::string policies = "hec";
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  bool exhaustive = false;
  bool timing = false;
  bool eager = false;
  std::string output = "results.csv";
};

int cmd_run(const RunFlags& flags, std::ostream& out, std::ostream& err) {
  std::vector<PolicyKind> kinds;
  try {
    kinds = parse_policy_list(flags.policies);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (kinds.empty()) throw UsageError("--policies is empty");
  if (flags.trials < 1) throw UsageError("--trials must be >= 1");

  const InstanceDocument doc = load_instance_document(flags.instance);
  const ProblemInstance instance = doc.build(flags.common.coverage_mode());
  check_k(instance, flags.common);
  const std::string instance_id = std::filesystem::path(flags.instance).stem().string();

  PolicyOptions options;
  options.seed = flags.seed;
  options.arith = parse_arith_mode(flags.common.arith);
  options.lazy = !flags.eager;
  options.k_override = flags.common.k_override();

  std::vector<HypothesisId> truths;
  if (flags.exhaustive) {
    for (HypothesisId h = 0; h < instance.num_hypotheses(); ++h) truths.push_back(h);
  } else {
    truths = sample_truths(instance, flags.trials, flags.seed);
  }

  // rows[trial][policy], written in (trial, policy) order.
  std::vector<std::vector<ResultRow>> rows(truths.size(), std::vector<ResultRow>(kinds.size()));
  for (std::size_t p = 0; p < kinds.size(); ++p) {
    const Policy policy(kinds[p], instance, options);
    DecisionTreeCache cache;
    double mean = 0.0;
    double expected = 0.0;
    std::size_t solved = 0;
    for (std::size_t i = 0; i < truths.size(); ++i) {
      const auto start = std::chrono::steady_clock::now();
      const PolicyTrace trace = run_policy(policy, truths[i], &cache, true);
      const auto stop = std::chrono::steady_clock::now();
      ResultRow& row = rows[i][p];
      row.instance_id = instance_id;
      row.seed = flags.seed;
      row.policy = to_string(kinds[p]);
      row.k = policy.index().k();
      row.num_regions = instance.num_regions();
      row.queries = trace.num_queries();
      row.solved = trace.completed && trace.terminal_region.has_value();
      row.wall_ms =
          flags.timing ? std::chrono::duration<double, std::milli>(stop - start).count() : 0.0;
      mean += static_cast<double>(row.queries);
      // Same accumulation order and operations as expected_cost().
      expected += instance.prior(truths[i]) * static_cast<double>(row.queries);
      if (row.solved) ++solved;
    }
    mean /= static_cast<double>(truths.size());
    out << to_string(kinds[p]) << ": mean_queries=" << printf_string("%.3f", mean)
        << " solved=" << solved << "/" << truths.size();
    if (flags.exhaustive) {
      if (solved == truths.size()) {
        out << " expected_cost=" << printf_string("%.17g", expected);
      } else {
        out << " expected_cost=n/a";
      }
    }
    out << "\n";
    if (solved < truths.size()) {
      err << "warning: " << to_string(kinds[p]) << " did not reach its goal in "
          << truths.size() - solved << " trial(s); rows marked solved=false\n";
    }
  }

  std::vector<ResultRow> flat;
  for (auto& trial : rows) {
    for (auto& row : trial) flat.push_back(std::move(row));
  }
  write_results(flat, flags.output);
  if (!flags.common.quiet) out << "wrote " << flat.size() << " rows to " << flags.output << "\n";
  return kExitOk;
}

// ---- validate --------------------------------------------------------------

struct ValidateFlags {
  CommonFlags common;
  std::string seeds;
  bool quick = false;
};

int cmd_validate(const ValidateFlags& flags, std::ostream& out) {
  if (flags.common.k_override() && *flags.common.k_override() < 2) {
    throw UsageError("--k " + std::to_string(flags.common.k) +
                     " is below the formula value (every instance has k >= 2)");
  }
  const int k_floor = flags.common.k_override().value_or(0);
  std::optional<SeedRange> seeds;
  if (!flags.seeds.empty()) seeds = parse_seed_range(flags.seeds);
  const auto range = [&](std::uint64_t default_end) {
    if (seeds) return *seeds;
    return SeedRange{0, flags.quick ? std::min<std::uint64_t>(default_end, 20) : default_end};
  };
  const int walks = flags.quick ? 5 : 20;
  const int chains = flags.quick ? 5 : 50;

  std::vector<ArithMode> modes{ArithMode::kFloat, ArithMode::kRational};
  if (!flags.common.arith.empty() && flags.common.arith != "both") {
    modes = {parse_arith_mode(flags.common.arith)};
  }

  std::vector<OracleReport> reports;
  for (ArithMode mode : modes) {
    reports.push_back(check_weight_equivalence(range(800), mode, 8, 4, 3, k_floor));
  }
  reports.push_back(check_theorem1(range(100), walks, modes.back(), k_floor));
  for (ArithMode mode : modes) {
    reports.push_back(check_adaptive_properties(range(100), chains, mode, k_floor));
  }
  reports.push_back(check_theorem3(range(300), 8, 6, k_floor));
  reports.push_back(check_partition_equivalence(range(60)));
  reports.push_back(check_gbs_agreement(range(60)));

  bool pass = true;
  for (const OracleReport& report : reports) {
    pass = pass && report.passed();
    if (!flags.common.quiet || !report.passed()) out << report.summary() << "\n";
  }
  out << "validate: " << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? kExitOk : kExitFailure;
}

// ---- interactive -----------------------------------------------------------

struct InteractiveFlags {
  CommonFlags common;
  std::string instance;
  bool eager = false;
};

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

int cmd_interactive(const InteractiveFlags& flags, std::istream& in, std::ostream& out) {
  const InstanceDocument doc = load_instance_document(flags.instance);
  const ProblemInstance instance = doc.build(flags.common.coverage_mode());
  check_k(instance, flags.common);
  PolicyOptions options;
  options.arith = parse_arith_mode(flags.common.arith);
  options.lazy = !flags.eager;
  options.k_override = flags.common.k_override();
  const Policy policy(PolicyKind::kHec, instance, options);
  PolicyStepper stepper(policy);

  out << "instance: |H|=" << instance.num_hypotheses() << " |T|=" << instance.num_tests()
      << " |R|=" << instance.num_regions() << " k=" << policy.index().k() << "\n";
  out << "answer with an outcome id, or: undo, status, quit\n";

  Evidence evidence;
  const auto print_status = [&] {
    const VersionSpace vs = consistent_hypotheses(instance, evidence);
    const double total = policy.total_weight();
    const double cut = objective_f<double>(instance, evidence, policy.index());
    out << "status: questions=" << evidence.size() << " consistent=" << vs.consistent.size()
        << " remaining_mass=" << printf_string("%.6g", vs.total_mass)
        << " progress=" << printf_string("%.6g", total > 0.0 ? cut / total : 1.0) << "\n";
  };

  while (true) {
    if (const auto region = is_solved(instance, evidence)) {
      out << "DECISION: region " << *region << " after " << evidence.size()
          << " question(s)\n";
      return kExitOk;
    }
    std::optional<GreedyChoice> choice;
    try {
      choice = stepper.select(evidence);
    } catch (const InfeasiblePolicy& e) {
      out << "stuck: no remaining test separates the consistent hypotheses (" << e.what()
          << ")\n";
      return kExitFailure;
    }
    if (!choice) {
      out << "stuck: no test selected before a decision\n";
      return kExitFailure;
    }
    const TestId t = choice->test;
    out << "Q: [t" << t << "] " << doc.test_label(t) << " (";
    for (Outcome o = 0; o < instance.arity(t); ++o) {
      out << (o ? ", " : "") << o << " = " << doc.outcome_label(t, o);
    }
    out << ")" << std::endl;

    std::string line;
    if (!std::getline(in, line)) {
      out << "input ended before a decision\n";
      return kExitFailure;
    }
    const std::string answer = trim(line);
    if (answer == "quit") {
      out << "quit after " << evidence.size() << " question(s)\n";
      return kExitOk;
    }
    if (answer == "status") {
      print_status();
      continue;
    }
    if (answer == "undo") {
      if (evidence.empty()) {
        out << "undo: nothing to undo\n";
      } else {
        const Observation last = evidence.observations().back();
        evidence = evidence.without_last();
        out << "undo: removed t" << last.test << " = " << last.outcome << "\n";
      }
      continue;
    }
    int outcome = -1;
    try {
      std::size_t used = 0;
      outcome = std::stoi(answer, &used);
      if (used != answer.size()) outcome = -1;
    } catch (const std::exception&) {
      outcome = -1;
    }
    if (outcome < 0 || outcome >= instance.arity(t)) {
      out << "unrecognized answer '" << answer << "'; enter an outcome id in [0, "
          << instance.arity(t) << ") or undo, status, quit\n";
      continue;
    }
    const Evidence next = evidence.with(t, outcome);
    bool any = false;
    for (HypothesisId h = 0; h < instance.num_hypotheses() && !any; ++h) {
      any = is_consistent(instance, next, h);
    }
    if (!any) {
      out << "contradictory answer: no hypothesis agrees with every answer so far; answer "
             "again or type undo\n";
      continue;
    }
    evidence = next;
  }
}

}  // namespace

SeedRange parse_seed_range(const std::string& text) {
  const auto parse = [&](const std::string& part) {
    std::size_t used = 0;
    std::uint64_t value = 0;
    try {
      value = std::stoull(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (part.empty() || used != part.size() || part[0] == '-') {
      throw std::invalid_argument("bad seed range '" + text + "' (expected a..b)");
    }
    return value;
  };
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    const std::uint64_t a = parse(text);
    return {a, a + 1};
  }
  const SeedRange range{parse(text.substr(0, dots)), parse(text.substr(dots + 2))};
  if (range.end <= range.begin) {
    throw std::invalid_argument("empty seed range '" + text + "'");
  }
  return range;
}

std::vector<HypothesisId> sample_truths(const ProblemInstance& instance, std::size_t trials,
                                        std::uint64_t seed) {
  CounterRng rng = CounterRng(seed).derive({0x7472757468ULL});
  const auto priors = instance.priors();
  std::vector<HypothesisId> truths;
  truths.reserve(trials);
  for (std::size_t i = 0; i < trials; ++i) {
    const double u = rng.uniform();
    double acc = 0.0;
    HypothesisId pick = priors.size() - 1;
    for (HypothesisId h = 0; h < priors.size(); ++h) {
      acc += priors[h];
      if (u < acc) {
        pick = h;
        break;
      }
    }
    truths.push_back(pick);
  }
  return truths;
}

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Decision region determination: generate instances, run policies, validate."};
  app.name("drd");
  app.require_subcommand(1);

  GenerateFlags gen;
  CLI::App* generate = app.add_subcommand("generate", "write a synthetic instance");
  generate->require_subcommand(1);
  CLI::App* clustered = generate->add_subcommand("clustered", "Gaussian-mixture comparisons");
  CLI::App* localization = generate->add_subcommand("localization2d", "2D probing instance");
  for (CLI::App* sub : {clustered, localization}) {
    sub->add_option("-o,--output", gen.output, "instance file to write")->required();
    sub->add_option("--seed", gen.seed, "generator seed");
    add_coverage(sub, gen.common);
    add_k(sub, gen.common);
    add_quiet(sub, gen.common);
  }
  clustered->add_option("--points", gen.clustered.num_points, "number of points (hypotheses)");
  clustered->add_option("--dim", gen.clustered.dim, "embedding dimension");
  clustered->add_option("--clusters", gen.clustered.num_clusters, "number of clusters (regions)");
  clustered->add_option("--alpha", gen.clustered.assign_alpha, "nearest centroids per point");
  clustered->add_option("--tests", gen.clustered.num_tests, "number of point-pair tests");
  clustered->add_option("--spread", gen.clustered.cluster_spread, "std. dev. of mixture means");
  clustered->add_option("--embeddings", gen.embeddings, "CSV of points (id,x0,...) to cluster");
  localization->add_option("--hypotheses", gen.localization.num_hypotheses, "object positions");
  localization->add_option("--sigma", gen.localization.gaussian_sigma, "position std. dev.");
  localization->add_option("--decisions", gen.localization.num_decisions, "decision discs");
  localization->add_option("--radius", gen.localization.decision_radius, "disc radius");
  localization->add_option("--moves", gen.localization.num_guarded_moves, "probing lines");
  localization->add_option("--bins", gen.localization.num_bins, "contact bins per line");

  RunFlags run;
  CLI::App* run_cmd = app.add_subcommand("run", "run policies on an instance, write CSV");
  run_cmd->add_option("instance", run.instance, "instance file")->required();
  run_cmd->add_option("--policies", run.policies, "comma list: hec,gbs,gbs-hec,ec2,ec2-hec,voi");
  run_cmd->add_option("--trials", run.trials, "sampled true hypotheses");
  run_cmd->add_option("--seed", run.seed, "seed for truths and random partitions");
  run_cmd->add_flag("--exhaustive", run.exhaustive, "every hypothesis once; print expected cost");
  run_cmd->add_flag("--timing", run.timing, "fill wall_ms (otherwise 0 for reproducible output)");
  run_cmd->add_flag("--eager", run.eager, "disable lazy gain bounds");
  run_cmd->add_option("-o,--output", run.output, "results CSV path");
  add_coverage(run_cmd, run.common);
  add_arith(run_cmd, run.common);
  add_k(run_cmd, run.common);
  add_quiet(run_cmd, run.common);

  ValidateFlags val;
  val.common.arith.clear();
  CLI::App* validate = app.add_subcommand("validate", "run the oracle checks");
  validate->add_option("--seeds", val.seeds, "seed range a..b (half-open)");
  validate->add_flag("--quick", val.quick, "fewer walks and chains");
  validate->add_option("--arith", val.common.arith, "float | rational (default: both)")
      ->check(CLI::IsMember({"float", "rational", "both"}));
  add_k(validate, val.common);
  add_quiet(validate, val.common);

  InteractiveFlags inter;
  CLI::App* interactive = app.add_subcommand("interactive", "answer the policy's questions");
  interactive->add_option("instance", inter.instance, "instance file")->required();
  interactive->add_flag("--eager", inter.eager, "disable lazy gain bounds");
  add_coverage(interactive, inter.common);
  add_arith(interactive, inter.common);
  add_k(interactive, inter.common);

  // CLI11 consumes arguments from the back of the vector.
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    const CLI::App* failing = &app;
    for (CLI::App* sub : {generate, run_cmd, validate, interactive}) {
      if (sub->parsed()) failing = sub;
    }
    err << failing->help();
    return kExitUsage;
  }

  try {
    if (clustered->parsed()) return cmd_generate("clustered", gen, out);
    if (localization->parsed()) return cmd_generate("localization2d", gen, out);
    if (run_cmd->parsed()) return cmd_run(run, out, err);
    if (validate->parsed()) return cmd_validate(val, out);
    if (interactive->parsed()) return cmd_interactive(inter, in, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvalidInstance& e) {
    err << "invalid instance:\n" << e.report().to_string() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace drd
