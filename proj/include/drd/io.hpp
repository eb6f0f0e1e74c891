#pragma once

// Instance documents (structured JSON text), results CSV and the embeddings
// CSV used to feed real point sets to the clustered generator.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "drd/core.hpp"

namespace drd {

inline constexpr int kSchemaVersion = 1;

class IoError : public DrdError {
 public:
  using DrdError::DrdError;
};

/// Raised for malformed text; `offset` is the byte position reported by the
/// parser.
class ParseError : public IoError {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : IoError(what), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// On disk:
///   schema_version, coverage, hypotheses [{id, weight}], tests [{id, arity}],
///   outcomes (one row per hypothesis), regions [{id, hypothesis_ids}],
///   metadata (free-form object; optional "labels": {"tests": [...],
///   "outcomes": [[...], ...]}).
/// Ids must equal their position in the list.
struct InstanceDocument {
  int schema_version = kSchemaVersion;
  CoverageMode coverage = CoverageMode::kStrict;
  InstanceData data;
  nlohmann::ordered_json metadata = nlohmann::ordered_json::object();

  ProblemInstance build(std::optional<CoverageMode> override_mode = std::nullopt) const;

  /// Human-readable labels from metadata, or generic fallbacks.
  std::string test_label(TestId t) const;
  std::string outcome_label(TestId t, Outcome o) const;
};

/// Document for an already built instance (regions as normalized, including
/// any wrapped singletons).
InstanceDocument document_of(const ProblemInstance& instance);

/// Canonical text: fixed key order, one list element per line, trailing
/// newline. Equal documents serialize to identical bytes.
std::string serialize_instance(const InstanceDocument& doc);

/// Throws ParseError, IoError on schema problems and InvalidInstance when the
/// content fails validation in its declared coverage mode.
InstanceDocument parse_instance(std::string_view text);

void save_instance(const InstanceDocument& doc, const std::filesystem::path& path);
InstanceDocument load_instance_document(const std::filesystem::path& path);
ProblemInstance load_instance(const std::filesystem::path& path,
                              std::optional<CoverageMode> override_mode = std::nullopt);

struct ResultRow {
  std::string instance_id;
  std::uint64_t seed = 0;
  std::string policy;
  int k = 0;
  std::size_t num_regions = 0;
  std::size_t queries = 0;
  bool solved = false;
  double wall_ms = 0.0;
};

inline constexpr std::string_view kResultsHeader =
    "instance_id,seed,policy,k,num_regions,queries,solved,wall_ms";

std::string results_csv(const std::vector<ResultRow>& rows);

/// Throws std::invalid_argument on an empty batch and IoError on I/O failure.
void write_results(const std::vector<ResultRow>& rows, const std::filesystem::path& path);

/// Header `id,x0,...,x{d-1}`; rows are returned in file order.
std::vector<std::vector<double>> read_embeddings_csv(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace drd
