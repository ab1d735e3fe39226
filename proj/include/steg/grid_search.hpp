#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "steg/csv.hpp"
#include "steg/detectors.hpp"
#include "steg/metrics.hpp"

namespace steg {

struct GridRanges {
  std::vector<std::size_t> clusters{2, 3, 5, 7, 9, 10};
  std::vector<std::size_t> components{5, 10, 15, 20, 25, 30};
  std::vector<std::size_t> estimators{20, 50, 100, 150};
  std::vector<std::size_t> bins{5, 10, 15, 20, 25, 30};
  std::vector<double> contamination{0.001, 0.01, 0.04, 0.05, 0.1, 0.2};

  const std::vector<std::size_t>& values(DetectorKind kind) const {
    switch (kind) {
      case DetectorKind::KMeans:
      case DetectorKind::Cblof: return clusters;
      case DetectorKind::Pca: return components;
      case DetectorKind::IForest: return estimators;
      case DetectorKind::Hbos: return bins;
    }
    return clusters;
  }
};

/// Which labels choose the reported cell: the evaluation labels, or a
/// held-out tail of the training rows (fit on the head).
enum class SelectionProtocol { EvaluationLabels, HeldOut };

struct GridCell {
  DetectorKind kind;
  std::size_t hyperparameter = 0;
  double contamination = 0.0;
  Metrics metrics;            // on the evaluation rows
  double selection_f1 = 0.0;  // criterion used to choose; = metrics.macro_f1 unless held-out
  std::optional<double> inertia;
  std::string status = "ok";
  bool ok() const { return status == "ok"; }
};

struct GridResult {
  std::vector<GridCell> cells;
  std::optional<std::size_t> best;  // index into cells

  const GridCell& best_cell() const {
    if (!best) throw Error(ErrorCode::InvalidConfig, "every grid cell failed");
    return cells[*best];
  }
};

struct GridOptions {
  SelectionProtocol protocol = SelectionProtocol::EvaluationLabels;
  double holdout_fraction = 0.2;
  std::vector<int> train_labels;  // needed for HeldOut
};

namespace detail {

// Higher F1, then higher DR, then smaller hyperparameter, then smaller
// contamination.
inline bool better_cell(const GridCell& a, const GridCell& b) {
  if (a.selection_f1 != b.selection_f1) return a.selection_f1 > b.selection_f1;
  if (a.metrics.detection_rate != b.metrics.detection_rate) return a.metrics.detection_rate > b.metrics.detection_rate;
  if (a.hyperparameter != b.hyperparameter) return a.hyperparameter < b.hyperparameter;
  return a.contamination < b.contamination;
}

inline Matrix head_rows(const Matrix& x, Eigen::Index n) { return x.topRows(n); }
inline Matrix tail_rows(const Matrix& x, Eigen::Index n) { return x.bottomRows(n); }

}  // namespace detail

/// Exhaustive sweep of one detector kind. Each hyperparameter value is fit
/// once (seeded from `seed` and the value) and thresholded at every
/// contamination. A failing fit marks its cells and the sweep continues.
inline GridResult grid_search(DetectorKind kind, const Matrix& train, const Matrix& eval,
                              const std::vector<int>& eval_labels, const GridRanges& ranges, std::uint64_t seed,
                              const GridOptions& options = {}) {
  const auto& values = ranges.values(kind);
  if (values.empty() || ranges.contamination.empty()) {
    throw Error(ErrorCode::InvalidConfig, "empty grid range for " + to_string(kind));
  }
  if (static_cast<std::size_t>(eval.rows()) != eval_labels.size()) {
    throw Error(ErrorCode::LengthMismatch, "evaluation rows and labels differ in length");
  }

  const bool held_out = options.protocol == SelectionProtocol::HeldOut;
  Matrix fit_head, holdout;
  std::vector<int> holdout_labels;
  if (held_out) {
    if (options.train_labels.size() != static_cast<std::size_t>(train.rows())) {
      throw Error(ErrorCode::LengthMismatch, "held-out selection needs one label per training row");
    }
    const auto n_hold = static_cast<Eigen::Index>(ceil_count(options.holdout_fraction, options.train_labels.size()));
    if (n_hold < 1 || n_hold >= train.rows()) throw Error(ErrorCode::TooFewRows, "training rows too few for holdout");
    fit_head = detail::head_rows(train, train.rows() - n_hold);
    holdout = detail::tail_rows(train, n_hold);
    holdout_labels.assign(options.train_labels.end() - n_hold, options.train_labels.end());
  }

  // PCA shares one eigendecomposition across component counts.
  std::optional<PcaBasis> basis, head_basis;

  GridResult result;
  for (const std::size_t value : values) {
    const std::uint64_t cell_seed = derive_seed(seed, value);
    std::vector<GridCell> cells;
    for (double c : ranges.contamination) cells.push_back({kind, value, c, {}, 0.0, std::nullopt, "ok"});
    try {
      auto fit = [&](const Matrix& x, std::optional<PcaBasis>& cache) {
        if (kind == DetectorKind::Pca) {
          if (!cache) cache = PcaBasis::fit(x);
          return Scorer(PcaModel::from_basis(*cache, value));
        }
        return Scorer::fit(kind, x, value, cell_seed);
      };
      const Scorer scorer = fit(train, basis);
      const Vector train_scores = scorer.score(train);
      const Vector eval_scores = scorer.score(eval);
      std::optional<double> inertia;
      if (const auto* km = std::get_if<KMeansModel>(&scorer.model())) inertia = km->inertia();
      if (const auto* cb = std::get_if<CblofModel>(&scorer.model())) inertia = cb->kmeans().inertia();

      std::optional<Scorer> head_scorer;
      Vector head_scores, holdout_scores;
      if (held_out) {
        head_scorer = fit(fit_head, head_basis);
        head_scores = head_scorer->score(fit_head);
        holdout_scores = head_scorer->score(holdout);
      }
      for (auto& cell : cells) {
        const double threshold = contamination_threshold(train_scores, cell.contamination);
        cell.metrics = evaluate(flags_above(eval_scores, threshold), eval_labels);
        cell.inertia = inertia;
        cell.selection_f1 = cell.metrics.macro_f1;
        if (held_out) {
          const double t = contamination_threshold(head_scores, cell.contamination);
          cell.selection_f1 = evaluate(flags_above(holdout_scores, t), holdout_labels).macro_f1;
        }
      }
    } catch (const Error& e) {
      for (auto& cell : cells) cell.status = std::string("failed: ") + e.what();
    }
    for (auto& cell : cells) result.cells.push_back(std::move(cell));
  }

  for (std::size_t i = 0; i < result.cells.size(); ++i) {
    if (!result.cells[i].ok()) continue;
    if (!result.best || detail::better_cell(result.cells[i], result.cells[*result.best])) result.best = i;
  }
  return result;
}

inline DetectorSpec spec_of(const GridCell& cell, std::uint64_t grid_seed) {
  return {cell.kind, cell.hyperparameter, cell.contamination, derive_seed(grid_seed, cell.hyperparameter)};
}

inline void write_grid_csv(std::ostream& out, const std::vector<GridCell>& cells) {
  csv::write_row(out, {"kind", "hyperparameter", "contamination", "acc", "macro_f1", "dr", "status"});
  for (const auto& c : cells) {
    csv::write_row(out, {to_string(c.kind), std::to_string(c.hyperparameter), csv::format_double(c.contamination),
                         csv::format_double(c.metrics.accuracy), csv::format_double(c.metrics.macro_f1),
                         csv::format_double(c.metrics.detection_rate), c.status});
  }
}

inline nlohmann::ordered_json to_json(const GridCell& c) {
  nlohmann::ordered_json j{{"kind", to_string(c.kind)},
                           {hyperparameter_name(c.kind), c.hyperparameter},
                           {"contamination", c.contamination},
                           {"acc", c.metrics.accuracy},
                           {"macro_f1", c.metrics.macro_f1},
                           {"dr", c.metrics.detection_rate},
                           {"selection_f1", c.selection_f1},
                           {"status", c.status}};
  if (c.inertia) j["inertia"] = *c.inertia;
  return j;
}

}  // namespace steg
