#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "steg/csv.hpp"
#include "steg/error.hpp"

namespace steg {

/// Attack is the positive class.
struct ConfusionCounts {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  std::size_t total() const { return tp + fp + tn + fn; }
  bool operator==(const ConfusionCounts&) const = default;
};

struct Metrics {
  double accuracy = 0.0;
  double macro_f1 = 0.0;
  double detection_rate = 0.0;
};

inline ConfusionCounts confusion(std::span<const int> flags, std::span<const int> labels) {
  if (flags.size() != labels.size()) {
    throw Error(ErrorCode::LengthMismatch, std::to_string(flags.size()) + " flags vs " +
                                               std::to_string(labels.size()) + " labels");
  }
  ConfusionCounts c;
  for (std::size_t i = 0; i < flags.size(); ++i) {
    const bool predicted = flags[i] != 0;
    const bool actual = labels[i] != 0;
    if (predicted && actual) ++c.tp;
    else if (predicted) ++c.fp;
    else if (actual) ++c.fn;
    else ++c.tn;
  }
  return c;
}

namespace detail {
// F1 of one class; 0 when it is never predicted nor present.
inline double class_f1(std::size_t tp, std::size_t fp, std::size_t fn) {
  const std::size_t denom = 2 * tp + fp + fn;
  return denom == 0 ? 0.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
}
}  // namespace detail

inline Metrics metrics(const ConfusionCounts& c) {
  const std::size_t n = c.total();
  if (n == 0) throw Error(ErrorCode::EmptyInput, "metrics of zero rows");
  Metrics m;
  m.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(n);
  const double f1_attack = detail::class_f1(c.tp, c.fp, c.fn);
  const double f1_benign = detail::class_f1(c.tn, c.fn, c.fp);
  m.macro_f1 = 0.5 * (f1_attack + f1_benign);
  m.detection_rate = c.tp + c.fn == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  return m;
}

inline Metrics evaluate(std::span<const int> flags, std::span<const int> labels) {
  return metrics(confusion(flags, labels));
}

struct ReportRow {
  std::string method;
  std::string detector;
  std::string scenario;
  Metrics metrics;
  std::string hyperparameters;  // e.g. "bins=10;contamination=0.04"
  std::uint64_t seed = 0;
};

struct EvalReport {
  std::vector<ReportRow> rows;
};

inline const std::vector<std::string>& report_columns() {
  static const std::vector<std::string> cols{"method",         "detector",        "scenario", "accuracy",
                                             "macro_f1",       "detection_rate",  "hyperparameters",
                                             "seed"};
  return cols;
}

inline void write_report_csv(std::ostream& out, const EvalReport& report) {
  csv::write_row(out, report_columns());
  for (const auto& r : report.rows) {
    csv::write_row(out, {r.method, r.detector, r.scenario, csv::format_double(r.metrics.accuracy),
                         csv::format_double(r.metrics.macro_f1), csv::format_double(r.metrics.detection_rate),
                         r.hyperparameters, std::to_string(r.seed)});
  }
}

inline nlohmann::ordered_json to_json(const EvalReport& report) {
  auto rows = nlohmann::ordered_json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"method", r.method},
                    {"detector", r.detector},
                    {"scenario", r.scenario},
                    {"accuracy", r.metrics.accuracy},
                    {"macro_f1", r.metrics.macro_f1},
                    {"detection_rate", r.metrics.detection_rate},
                    {"hyperparameters", r.hyperparameters},
                    {"seed", r.seed}});
  }
  return {{"rows", rows}};
}

}  // namespace steg
