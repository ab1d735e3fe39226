#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <nlohmann/json.hpp>

#include "steg/csv.hpp"
#include "steg/error.hpp"
#include "steg/random.hpp"
#include "steg/types.hpp"

namespace steg {

enum class ColumnRole { Endpoint, Categorical, Numeric, Excluded, Label, AttackType };

inline std::string_view to_string(ColumnRole role) {
  switch (role) {
    case ColumnRole::Endpoint: return "endpoint";
    case ColumnRole::Categorical: return "categorical";
    case ColumnRole::Numeric: return "numeric";
    case ColumnRole::Excluded: return "excluded";
    case ColumnRole::Label: return "label";
    case ColumnRole::AttackType: return "attack_type";
  }
  return "numeric";
}

inline ColumnRole parse_role(std::string_view text) {
  if (text == "endpoint") return ColumnRole::Endpoint;
  if (text == "categorical") return ColumnRole::Categorical;
  if (text == "numeric") return ColumnRole::Numeric;
  if (text == "excluded") return ColumnRole::Excluded;
  if (text == "label") return ColumnRole::Label;
  if (text == "attack_type") return ColumnRole::AttackType;
  throw Error(ErrorCode::InvalidConfig, "unknown column role '" + std::string(text) + "'");
}

/// Port numbers are never features, whatever role a schema gives them.
inline bool is_port_column(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return upper.find("PORT") != std::string::npos;
}

/// Column-role map for one CSV layout. Columns the map does not mention take
/// `default_role`.
struct Schema {
  std::string source_column;
  std::string destination_column;
  std::string label_column;
  std::string attack_column;  // optional
  std::vector<std::pair<std::string, ColumnRole>> roles;
  ColumnRole default_role = ColumnRole::Numeric;

  ColumnRole role_of(const std::string& name) const {
    if (name == source_column || name == destination_column) return ColumnRole::Endpoint;
    if (name == label_column) return ColumnRole::Label;
    if (!attack_column.empty() && name == attack_column) return ColumnRole::AttackType;
    if (is_port_column(name)) return ColumnRole::Excluded;
    for (const auto& [column, role] : roles) {
      if (column == name) return role;
    }
    return default_role;
  }

  /// Reads the INI layout documented in configs/README.md:
  ///   [endpoints] source=, destination=
  ///   [label] column=, attack_type=
  ///   [roles] <column> = categorical | numeric | excluded
  ///   [defaults] role = numeric
  static Schema from_ptree(const boost::property_tree::ptree& tree) {
    Schema schema;
    schema.source_column = tree.get<std::string>("endpoints.source", "");
    schema.destination_column = tree.get<std::string>("endpoints.destination", "");
    schema.label_column = tree.get<std::string>("label.column", "");
    schema.attack_column = tree.get<std::string>("label.attack_type", "");
    schema.default_role = parse_role(tree.get<std::string>("defaults.role", "numeric"));
    if (auto roles = tree.get_child_optional("roles")) {
      for (const auto& [name, value] : *roles) {
        schema.roles.emplace_back(name, parse_role(value.get_value<std::string>()));
      }
    }
    if (schema.source_column.empty() || schema.destination_column.empty() ||
        schema.label_column.empty()) {
      throw Error(ErrorCode::InvalidConfig,
                  "schema must name endpoints.source, endpoints.destination and label.column");
    }
    return schema;
  }

  static Schema from_file(const std::string& path) {
    boost::property_tree::ptree tree;
    try {
      boost::property_tree::ini_parser::read_ini(path, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
      throw Error(ErrorCode::InvalidConfig, "schema " + path + ": " + e.what());
    }
    return from_ptree(tree);
  }
};

struct Column {
  std::string name;
  ColumnRole role;
};

/// One flow. Missing numeric cells hold NaN until sanitization.
struct FlowRecord {
  std::string src_id;
  std::string dst_id;
  std::vector<std::string> categoricals;
  std::vector<double> numerics;
  int label = 0;
  std::string attack_type;

  bool operator==(const FlowRecord&) const = default;
};

struct FlowTable {
  std::vector<Column> columns;  // header as read, with resolved roles
  std::vector<std::string> categorical_names;
  std::vector<std::string> numeric_names;
  std::vector<FlowRecord> records;

  std::size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }
  std::size_t attack_count() const {
    return static_cast<std::size_t>(std::count_if(records.begin(), records.end(),
                                                  [](const FlowRecord& r) { return r.label == 1; }));
  }

  /// Same layout, no records.
  FlowTable with_records(std::vector<FlowRecord> rows) const {
    FlowTable out;
    out.columns = columns;
    out.categorical_names = categorical_names;
    out.numeric_names = numeric_names;
    out.records = std::move(rows);
    return out;
  }

  bool operator==(const FlowTable& other) const {
    return categorical_names == other.categorical_names && numeric_names == other.numeric_names &&
           records == other.records;
  }
};

struct ScenarioSpec {
  double downsample_fraction = 0.1;
  double train_fraction = 0.7;
  double contamination = 0.0;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(downsample_fraction > 0.0 && downsample_fraction <= 1.0))
      throw Error(ErrorCode::InvalidConfig, "downsample_fraction must be in (0, 1]");
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
      throw Error(ErrorCode::InvalidConfig, "train_fraction must be in (0, 1)");
    if (!(contamination >= 0.0 && contamination < 1.0))
      throw Error(ErrorCode::InvalidConfig, "contamination must be in [0, 1)");
  }
};

namespace detail {

inline int parse_label(const std::string& cell, std::size_t line) {
  auto value = csv::parse_double(cell);
  if (!value || (*value != 0.0 && *value != 1.0)) {
    throw Error(ErrorCode::MalformedRow,
                "line " + std::to_string(line) + ": label '" + cell + "' is not 0 or 1");
  }
  return static_cast<int>(*value);
}

}  // namespace detail

inline FlowTable parse_netflow(std::istream& in, const Schema& schema,
                               const std::string& source = "<stream>") {
  csv::Reader reader(in);
  auto header = reader.next();
  if (!header || (header->size() == 1 && (*header)[0].empty())) {
    throw Error(ErrorCode::MissingHeader, source + " has no header row");
  }

  FlowTable table;
  std::vector<std::size_t> categorical_idx;
  std::vector<std::size_t> numeric_idx;
  std::size_t src_idx = header->size(), dst_idx = header->size();
  std::size_t label_idx = header->size(), attack_idx = header->size();
  for (std::size_t i = 0; i < header->size(); ++i) {
    const std::string& name = (*header)[i];
    const ColumnRole role = schema.role_of(name);
    table.columns.push_back({name, role});
    if (name == schema.source_column) src_idx = i;
    if (name == schema.destination_column) dst_idx = i;
    switch (role) {
      case ColumnRole::Categorical:
        categorical_idx.push_back(i);
        table.categorical_names.push_back(name);
        break;
      case ColumnRole::Numeric:
        numeric_idx.push_back(i);
        table.numeric_names.push_back(name);
        break;
      case ColumnRole::Label: label_idx = i; break;
      case ColumnRole::AttackType: attack_idx = i; break;
      default: break;
    }
  }

  auto require = [&](std::size_t idx, const std::string& name) {
    if (idx == header->size()) {
      throw Error(ErrorCode::SchemaMismatch, source + ": column '" + name + "' not in header");
    }
  };
  require(src_idx, schema.source_column);
  require(dst_idx, schema.destination_column);
  require(label_idx, schema.label_column);
  if (!schema.attack_column.empty()) require(attack_idx, schema.attack_column);
  for (const auto& [name, role] : schema.roles) {
    if (std::find(header->begin(), header->end(), name) == header->end()) {
      throw Error(ErrorCode::SchemaMismatch, source + ": column '" + name + "' not in header");
    }
  }

  while (auto row = reader.next()) {
    if (row->size() == 1 && (*row)[0].empty()) continue;  // blank line
    if (row->size() != header->size()) {
      throw Error(ErrorCode::MalformedRow, source + " line " + std::to_string(reader.line()) +
                                               ": expected " + std::to_string(header->size()) +
                                               " fields, got " + std::to_string(row->size()));
    }
    FlowRecord record;
    record.src_id = (*row)[src_idx];
    record.dst_id = (*row)[dst_idx];
    if (record.src_id.empty() || record.dst_id.empty()) {
      throw Error(ErrorCode::MalformedRow,
                  source + " line " + std::to_string(reader.line()) + ": empty endpoint");
    }
    record.categoricals.reserve(categorical_idx.size());
    for (auto i : categorical_idx) record.categoricals.push_back((*row)[i]);
    record.numerics.reserve(numeric_idx.size());
    for (auto i : numeric_idx) {
      record.numerics.push_back(
          csv::parse_double((*row)[i]).value_or(std::numeric_limits<double>::quiet_NaN()));
    }
    record.label = detail::parse_label((*row)[label_idx], reader.line());
    if (attack_idx != header->size()) record.attack_type = (*row)[attack_idx];
    table.records.push_back(std::move(record));
  }
  return table;
}

inline FlowTable parse_netflow(const std::string& path, const Schema& schema) {
  auto in = csv::open_input(path);
  return parse_netflow(in, schema, path);
}

/// Stratified by label: each class keeps its largest-remainder share of
/// ⌈fraction·n⌉ rows. Kept rows stay in their original order.
inline FlowTable downsample(const FlowTable& table, double fraction, std::uint64_t seed) {
  if (table.empty()) throw Error(ErrorCode::EmptyTable, "downsample of empty table");
  if (!(fraction > 0.0 && fraction <= 1.0))
    throw Error(ErrorCode::InvalidConfig, "downsample fraction must be in (0, 1]");

  const std::size_t n = table.size();
  const std::size_t keep = std::min(n, ceil_count(fraction, n));

  std::vector<std::size_t> by_class[2];
  for (std::size_t i = 0; i < n; ++i) by_class[table.records[i].label].push_back(i);

  std::size_t quota[2];
  double remainder[2];
  std::size_t assigned = 0;
  for (int c = 0; c < 2; ++c) {
    const double exact =
        static_cast<double>(keep) * static_cast<double>(by_class[c].size()) / static_cast<double>(n);
    quota[c] = static_cast<std::size_t>(std::floor(exact + 1e-9));
    remainder[c] = exact - static_cast<double>(quota[c]);
    assigned += quota[c];
  }
  while (assigned < keep) {
    const int c = remainder[1] > remainder[0] ? 1 : 0;
    const int pick = quota[c] < by_class[c].size() ? c : 1 - c;
    ++quota[pick];
    remainder[pick] = -1.0;
    ++assigned;
  }

  Rng rng(derive_seed(seed, "downsample"));
  std::vector<std::size_t> kept;
  kept.reserve(keep);
  for (int c = 0; c < 2; ++c) {
    auto& idx = by_class[c];
    rng.shuffle(idx.begin(), idx.end());
    kept.insert(kept.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(quota[c]));
  }
  std::sort(kept.begin(), kept.end());

  std::vector<FlowRecord> rows;
  rows.reserve(kept.size());
  for (auto i : kept) rows.push_back(table.records[i]);
  return table.with_records(std::move(rows));
}

struct ScenarioSplit {
  FlowTable train;
  FlowTable test;
};

/// Splits into train/test so that the train set carries exactly the
/// requested attack share; every row not used for training goes to test.
inline ScenarioSplit split_scenario(const FlowTable& table, const ScenarioSpec& spec) {
  spec.validate();
  if (table.empty()) throw Error(ErrorCode::EmptyTable, "split of empty table");

  const std::size_t n = table.size();
  const std::size_t n_train = std::min(n - 1, ceil_count(spec.train_fraction, n));
  std::vector<std::size_t> benign, attack;
  for (std::size_t i = 0; i < n; ++i) (table.records[i].label ? attack : benign).push_back(i);

  std::size_t n_train_attack = spec.contamination > 0.0 ? ceil_count(spec.contamination, n_train) : 0;
  if (n_train_attack > attack.size()) {
    if (n_train_attack - attack.size() > 1) {
      const double achievable = static_cast<double>(attack.size()) / static_cast<double>(n_train);
      throw Error(ErrorCode::InsufficientAttacks,
                  "requested contamination " + csv::format_double(spec.contamination) +
                      " needs " + std::to_string(n_train_attack) + " attack rows, only " +
                      std::to_string(attack.size()) + " available (achievable rate " +
                      csv::format_double(achievable) + ")");
    }
    n_train_attack = attack.size();
  }
  const std::size_t n_train_benign = n_train - n_train_attack;
  if (n_train_benign > benign.size()) {
    throw Error(ErrorCode::InvalidConfig, "not enough benign rows for the requested train size");
  }

  Rng rng(derive_seed(spec.seed, "split"));
  rng.shuffle(benign.begin(), benign.end());
  rng.shuffle(attack.begin(), attack.end());

  std::vector<char> in_train(n, 0);
  for (std::size_t i = 0; i < n_train_benign; ++i) in_train[benign[i]] = 1;
  for (std::size_t i = 0; i < n_train_attack; ++i) in_train[attack[i]] = 1;

  std::vector<FlowRecord> train_rows, test_rows;
  train_rows.reserve(n_train);
  test_rows.reserve(n - n_train);
  for (std::size_t i = 0; i < n; ++i) {
    (in_train[i] ? train_rows : test_rows).push_back(table.records[i]);
  }
  return {table.with_records(std::move(train_rows)), table.with_records(std::move(test_rows))};
}

enum class EncodingKind { Target, Frequency };

struct ColumnEncoding {
  std::string column;
  std::map<std::string, double> codes;
  double fallback = 0.0;
};

struct EncodingParams {
  EncodingKind kind = EncodingKind::Target;
  double smoothing = 10.0;
  double prior = 0.0;
  std::vector<ColumnEncoding> columns;

  /// True when the training table had nothing to encode.
  bool is_noop() const { return columns.empty(); }
};

/// Smoothed target encoding: (count·mean + m·prior)/(count + m), unseen → prior.
inline EncodingParams fit_target_encoding(const FlowTable& train, double smoothing = 10.0) {
  EncodingParams params;
  params.kind = EncodingKind::Target;
  params.smoothing = smoothing;
  if (train.categorical_names.empty() || train.empty()) return params;

  params.prior = static_cast<double>(train.attack_count()) / static_cast<double>(train.size());
  for (std::size_t c = 0; c < train.categorical_names.size(); ++c) {
    std::map<std::string, std::pair<double, double>> stats;  // count, label sum
    for (const auto& r : train.records) {
      auto& s = stats[r.categoricals[c]];
      s.first += 1.0;
      s.second += r.label;
    }
    ColumnEncoding enc{train.categorical_names[c], {}, params.prior};
    for (const auto& [category, s] : stats) {
      const double mean = s.second / s.first;
      enc.codes[category] = (s.first * mean + smoothing * params.prior) / (s.first + smoothing);
    }
    params.columns.push_back(std::move(enc));
  }
  return params;
}

/// Label-free alternative: category → share of training rows, unseen → 0.
inline EncodingParams fit_frequency_encoding(const FlowTable& train) {
  EncodingParams params;
  params.kind = EncodingKind::Frequency;
  params.smoothing = 0.0;
  if (train.categorical_names.empty() || train.empty()) return params;
  const double n = static_cast<double>(train.size());
  for (std::size_t c = 0; c < train.categorical_names.size(); ++c) {
    ColumnEncoding enc{train.categorical_names[c], {}, 0.0};
    for (const auto& r : train.records) enc.codes[r.categoricals[c]] += 1.0;
    for (auto& [category, value] : enc.codes) value /= n;
    params.columns.push_back(std::move(enc));
  }
  return params;
}

/// Replaces categoricals by their codes. Encoded columns come first in the
/// resulting numeric layout, followed by the original numerics.
inline FlowTable apply_encoding(const FlowTable& table, const EncodingParams& params) {
  if (table.categorical_names.empty()) return table;
  if (params.columns.size() != table.categorical_names.size()) {
    throw Error(ErrorCode::DimensionMismatch, "encoding covers " +
                                                  std::to_string(params.columns.size()) +
                                                  " columns, table has " +
                                                  std::to_string(table.categorical_names.size()));
  }
  for (std::size_t c = 0; c < params.columns.size(); ++c) {
    if (params.columns[c].column != table.categorical_names[c])
      throw Error(ErrorCode::DimensionMismatch,
                  "encoding column '" + params.columns[c].column + "' does not match table");
  }

  FlowTable out;
  out.columns = table.columns;
  out.numeric_names = table.categorical_names;
  out.numeric_names.insert(out.numeric_names.end(), table.numeric_names.begin(),
                           table.numeric_names.end());
  out.records.reserve(table.size());
  for (const auto& r : table.records) {
    FlowRecord enc = r;
    enc.categoricals.clear();
    enc.numerics.clear();
    enc.numerics.reserve(out.numeric_names.size());
    for (std::size_t c = 0; c < params.columns.size(); ++c) {
      const auto& col = params.columns[c];
      auto it = col.codes.find(r.categoricals[c]);
      enc.numerics.push_back(it == col.codes.end() ? col.fallback : it->second);
    }
    enc.numerics.insert(enc.numerics.end(), r.numerics.begin(), r.numerics.end());
    out.records.push_back(std::move(enc));
  }
  return out;
}

struct NormalizationParams {
  std::vector<std::string> columns;
  std::vector<double> scales;  // train column L2 norm; 0 leaves the column at zero
};

struct NormalizedSplit {
  FlowTable train;
  FlowTable test;
  NormalizationParams params;
};

inline double sanitize_cell(double v) { return std::isfinite(v) ? v : 0.0; }

inline void apply_normalization(FlowTable& table, const NormalizationParams& params) {
  for (auto& r : table.records) {
    for (std::size_t j = 0; j < r.numerics.size(); ++j) {
      const double v = sanitize_cell(r.numerics[j]);
      r.numerics[j] = params.scales[j] > 0.0 ? v / params.scales[j] : 0.0;
    }
  }
}

/// Zero-fills missing/non-finite cells, then divides each column by its
/// L2 norm over the training rows. The same scales are applied to test.
inline NormalizedSplit sanitize_and_normalize(const FlowTable& train, const FlowTable& test) {
  if (!train.categorical_names.empty() || !test.categorical_names.empty()) {
    throw Error(ErrorCode::DimensionMismatch, "categorical columns must be encoded first");
  }
  if (train.numeric_names != test.numeric_names) {
    throw Error(ErrorCode::DimensionMismatch, "train and test feature columns differ");
  }
  const std::size_t d = train.numeric_names.size();
  NormalizationParams params;
  params.columns = train.numeric_names;
  std::vector<long double> sumsq(d, 0.0L);
  for (const auto& r : train.records) {
    if (r.numerics.size() != d)
      throw Error(ErrorCode::DimensionMismatch, "record width differs from schema");
    for (std::size_t j = 0; j < d; ++j) {
      const long double v = sanitize_cell(r.numerics[j]);
      sumsq[j] += v * v;
    }
  }
  params.scales.resize(d);
  for (std::size_t j = 0; j < d; ++j) params.scales[j] = static_cast<double>(std::sqrt(sumsq[j]));

  NormalizedSplit out{train, test, params};
  for (const auto& r : test.records) {
    if (r.numerics.size() != d)
      throw Error(ErrorCode::DimensionMismatch, "record width differs from schema");
  }
  apply_normalization(out.train, params);
  apply_normalization(out.test, params);
  return out;
}

/// Feature matrix of an encoded table, one row per record.
inline Matrix feature_matrix(const FlowTable& table) {
  Matrix m(static_cast<Eigen::Index>(table.size()),
           static_cast<Eigen::Index>(table.numeric_names.size()));
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto& v = table.records[i].numerics;
    for (std::size_t j = 0; j < v.size(); ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v[j];
  }
  return m;
}

inline std::vector<int> labels_of(const FlowTable& table) {
  std::vector<int> labels;
  labels.reserve(table.size());
  for (const auto& r : table.records) labels.push_back(r.label);
  return labels;
}

// ---- serialization ----

inline constexpr const char* kSourceHeader = "src_id";
inline constexpr const char* kDestinationHeader = "dst_id";
inline constexpr const char* kLabelHeader = "label";
inline constexpr const char* kAttackHeader = "attack_type";

/// Layout: src_id, dst_id, categoricals..., numerics..., label, attack_type.
inline void write_table(std::ostream& out, const FlowTable& table) {
  std::vector<std::string> header{kSourceHeader, kDestinationHeader};
  header.insert(header.end(), table.categorical_names.begin(), table.categorical_names.end());
  header.insert(header.end(), table.numeric_names.begin(), table.numeric_names.end());
  header.push_back(kLabelHeader);
  header.push_back(kAttackHeader);
  csv::write_row(out, header);
  std::vector<std::string> fields;
  for (const auto& r : table.records) {
    fields.clear();
    fields.push_back(r.src_id);
    fields.push_back(r.dst_id);
    fields.insert(fields.end(), r.categoricals.begin(), r.categoricals.end());
    for (double v : r.numerics) fields.push_back(std::isnan(v) ? "" : csv::format_double(v));
    fields.push_back(std::to_string(r.label));
    fields.push_back(r.attack_type);
    csv::write_row(out, fields);
  }
}

inline void write_table(const std::string& path, const FlowTable& table) {
  auto out = csv::open_output(path);
  write_table(out, table);
}

/// Reads a table written by write_table. All middle columns are numeric;
/// only sanitized tables are persisted.
inline FlowTable read_table(const std::string& path) {
  Schema schema;
  schema.source_column = kSourceHeader;
  schema.destination_column = kDestinationHeader;
  schema.label_column = kLabelHeader;
  schema.attack_column = kAttackHeader;
  auto in = csv::open_input(path);
  return parse_netflow(in, schema, path);
}

inline nlohmann::ordered_json to_json(const EncodingParams& params) {
  nlohmann::ordered_json j;
  j["kind"] = params.kind == EncodingKind::Target ? "target" : "frequency";
  j["smoothing"] = params.smoothing;
  j["prior"] = params.prior;
  auto& cols = j["columns"] = nlohmann::ordered_json::array();
  for (const auto& c : params.columns) {
    nlohmann::ordered_json col;
    col["column"] = c.column;
    col["fallback"] = c.fallback;
    auto& codes = col["codes"] = nlohmann::ordered_json::object();
    for (const auto& [category, code] : c.codes) codes[category] = code;
    cols.push_back(std::move(col));
  }
  return j;
}

inline nlohmann::ordered_json to_json(const NormalizationParams& params) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < params.columns.size(); ++i) j[params.columns[i]] = params.scales[i];
  return j;
}

}  // namespace steg
