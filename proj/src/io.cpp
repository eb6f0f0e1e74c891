#include "drd/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace drd {

using Json = nlohmann::ordered_json;

ProblemInstance InstanceDocument::build(std::optional<CoverageMode> override_mode) const {
  return ProblemInstance::build(data, override_mode.value_or(coverage));
}

std::string InstanceDocument::test_label(TestId t) const {
  if (metadata.is_object() && metadata.contains("labels")) {
    const Json& tests = metadata["labels"].value("tests", Json::array());
    if (t < tests.size() && tests[t].is_string()) return tests[t].get<std::string>();
  }
  return "test " + std::to_string(t);
}

std::string InstanceDocument::outcome_label(TestId t, Outcome o) const {
  if (metadata.is_object() && metadata.contains("labels")) {
    const Json& outcomes = metadata["labels"].value("outcomes", Json::array());
    if (t < outcomes.size() && outcomes[t].is_array() &&
        static_cast<std::size_t>(o) < outcomes[t].size() && outcomes[t][o].is_string()) {
      return outcomes[t][o].get<std::string>();
    }
  }
  return "outcome " + std::to_string(o);
}

InstanceDocument document_of(const ProblemInstance& instance) {
  InstanceDocument doc;
  doc.coverage = instance.coverage();
  doc.data = instance.data();
  return doc;
}

namespace {

void write_list(std::ostringstream& out, const char* key, const std::vector<Json>& items,
                bool last) {
  out << "  \"" << key << "\": [";
  for (std::size_t i = 0; i < items.size(); ++i) {
    out << (i == 0 ? "\n    " : ",\n    ") << items[i].dump();
  }
  out << (items.empty() ? "]" : "\n  ]") << (last ? "\n" : ",\n");
}

[[noreturn]] void schema_error(const std::string& what) {
  throw IoError("instance document: " + what);
}

const Json& require(const Json& object, const char* key) {
  if (!object.is_object() || !object.contains(key)) {
    schema_error(std::string("missing field \"") + key + "\"");
  }
  return object[key];
}

template <class T>
T get_as(const Json& value, const std::string& where) {
  try {
    return value.get<T>();
  } catch (const nlohmann::json::exception&) {
    schema_error("bad value for " + where);
  }
}

}  // namespace

std::string serialize_instance(const InstanceDocument& doc) {
  const InstanceData& d = doc.data;
  std::ostringstream out;
  out << "{\n";
  out << "  \"schema_version\": " << doc.schema_version << ",\n";
  out << "  \"coverage\": " << Json(to_string(doc.coverage)).dump() << ",\n";
  std::vector<Json> items;
  for (std::size_t h = 0; h < d.weights.size(); ++h) {
    items.push_back(Json{{"id", h}, {"weight", d.weights[h]}});
  }
  write_list(out, "hypotheses", items, false);
  items.clear();
  for (std::size_t t = 0; t < d.arities.size(); ++t) {
    items.push_back(Json{{"id", t}, {"arity", d.arities[t]}});
  }
  write_list(out, "tests", items, false);
  items.clear();
  for (const auto& row : d.outcomes) items.push_back(Json(row));
  write_list(out, "outcomes", items, false);
  items.clear();
  for (std::size_t r = 0; r < d.regions.size(); ++r) {
    items.push_back(Json{{"id", r}, {"hypothesis_ids", d.regions[r]}});
  }
  write_list(out, "regions", items, false);
  out << "  \"metadata\": " << (doc.metadata.is_null() ? Json::object() : doc.metadata).dump()
      << "\n}\n";
  return out.str();
}

InstanceDocument parse_instance(std::string_view text) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("parse error at byte " + std::to_string(e.byte) + ": " + e.what(), e.byte);
  }
  if (!root.is_object()) schema_error("top level is not an object");

  InstanceDocument doc;
  doc.schema_version = get_as<int>(require(root, "schema_version"), "schema_version");
  if (doc.schema_version != kSchemaVersion) {
    schema_error("schema_version " + std::to_string(doc.schema_version) + " is not supported (expected " +
                 std::to_string(kSchemaVersion) + ")");
  }
  if (root.contains("coverage")) {
    try {
      doc.coverage = parse_coverage_mode(get_as<std::string>(root["coverage"], "coverage"));
    } catch (const std::invalid_argument& e) {
      schema_error(e.what());
    }
  }

  const auto check_id = [](const Json& item, std::size_t position, const char* list) {
    const auto id = get_as<std::size_t>(require(item, "id"), std::string(list) + " id");
    if (id != position) {
      schema_error(std::string(list) + " id " + std::to_string(id) + " at position " +
                   std::to_string(position));
    }
  };

  const Json& hypotheses = require(root, "hypotheses");
  if (!hypotheses.is_array()) schema_error("hypotheses is not a list");
  for (std::size_t i = 0; i < hypotheses.size(); ++i) {
    check_id(hypotheses[i], i, "hypothesis");
    doc.data.weights.push_back(get_as<double>(require(hypotheses[i], "weight"), "weight"));
  }
  const Json& tests = require(root, "tests");
  if (!tests.is_array()) schema_error("tests is not a list");
  for (std::size_t i = 0; i < tests.size(); ++i) {
    check_id(tests[i], i, "test");
    doc.data.arities.push_back(get_as<int>(require(tests[i], "arity"), "arity"));
  }
  const Json& outcomes = require(root, "outcomes");
  if (!outcomes.is_array()) schema_error("outcomes is not a list");
  for (const Json& row : outcomes) {
    doc.data.outcomes.push_back(get_as<std::vector<Outcome>>(row, "outcome row"));
  }
  const Json& regions = require(root, "regions");
  if (!regions.is_array()) schema_error("regions is not a list");
  for (std::size_t i = 0; i < regions.size(); ++i) {
    check_id(regions[i], i, "region");
    doc.data.regions.push_back(
        get_as<std::vector<HypothesisId>>(require(regions[i], "hypothesis_ids"), "hypothesis_ids"));
  }
  if (root.contains("metadata")) doc.metadata = root["metadata"];

  ValidationReport report = validate_instance(doc.data, doc.coverage);
  if (report.has_errors()) throw InvalidInstance(std::move(report));
  return doc;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

void save_instance(const InstanceDocument& doc, const std::filesystem::path& path) {
  write_file(path, serialize_instance(doc));
}

InstanceDocument load_instance_document(const std::filesystem::path& path) {
  return parse_instance(read_file(path));
}

ProblemInstance load_instance(const std::filesystem::path& path,
                              std::optional<CoverageMode> override_mode) {
  return load_instance_document(path).build(override_mode);
}

std::string results_csv(const std::vector<ResultRow>& rows) {
  std::string out(kResultsHeader);
  out += '\n';
  char wall[64];
  for (const ResultRow& row : rows) {
    std::snprintf(wall, sizeof wall, "%.3f", row.wall_ms);
    out += row.instance_id + ',' + std::to_string(row.seed) + ',' + row.policy + ',' +
           std::to_string(row.k) + ',' + std::to_string(row.num_regions) + ',' +
           std::to_string(row.queries) + ',' + (row.solved ? "true" : "false") + ',' + wall +
           '\n';
  }
  return out;
}

void write_results(const std::vector<ResultRow>& rows, const std::filesystem::path& path) {
  if (rows.empty()) throw std::invalid_argument("no results to write");
  write_file(path, results_csv(rows));
}

std::vector<std::vector<double>> read_embeddings_csv(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw IoError(path.string() + ": empty embeddings file");
  const auto split = [](const std::string& s) {
    std::vector<std::string> fields;
    std::stringstream ss(s);
    std::string field;
    while (std::getline(ss, field, ',')) {
      if (!field.empty() && field.back() == '\r') field.pop_back();
      fields.push_back(field);
    }
    return fields;
  };
  const auto header = split(line);
  if (header.size() < 2 || header[0] != "id") {
    throw IoError(path.string() + ": header must be id,x0,...,x{d-1}");
  }
  for (std::size_t i = 1; i < header.size(); ++i) {
    if (header[i] != "x" + std::to_string(i - 1)) {
      throw IoError(path.string() + ": unexpected header column " + header[i]);
    }
  }
  const std::size_t dim = header.size() - 1;
  std::vector<std::vector<double>> points;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split(line);
    if (fields.size() != dim + 1) {
      throw IoError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                    std::to_string(dim + 1) + " fields");
    }
    std::vector<double> point(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      const std::string& f = fields[i + 1];
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), point[i]);
      if (ec != std::errc() || ptr != f.data() + f.size() || !std::isfinite(point[i])) {
        throw IoError(path.string() + ":" + std::to_string(line_no) + ": bad number '" + f + "'");
      }
    }
    points.push_back(std::move(point));
  }
  if (points.empty()) throw IoError(path.string() + ": no embedding rows");
  return points;
}

}  // namespace drd
