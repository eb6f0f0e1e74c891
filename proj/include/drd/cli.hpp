#pragma once

// Command-line front end: generate, run, validate and interactive
// subcommands. Streams are injected so the commands can be driven in-process.

#include <iosfwd>
#include <string>
#include <vector>

#include "drd/oracle.hpp"

namespace drd {

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitUsage = 2 };

/// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err);

/// "a..b" (half-open) or a single seed "a".
SeedRange parse_seed_range(const std::string& text);

/// Inverse-CDF draws from the prior, keyed by seed; trial i is the same
/// hypothesis for every policy.
std::vector<HypothesisId> sample_truths(const ProblemInstance& instance, std::size_t trials,
                                        std::uint64_t seed);

}  // namespace drd
