#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Eigenvalues>

#include "steg/error.hpp"
#include "steg/random.hpp"
#include "steg/types.hpp"

namespace steg {

enum class DetectorKind { KMeans, Pca, IForest, Cblof, Hbos };

inline const std::vector<DetectorKind>& all_detector_kinds() {
  static const std::vector<DetectorKind> kinds{DetectorKind::KMeans, DetectorKind::Pca, DetectorKind::IForest,
                                               DetectorKind::Cblof, DetectorKind::Hbos};
  return kinds;
}

inline std::string to_string(DetectorKind kind) {
  switch (kind) {
    case DetectorKind::KMeans: return "kmeans";
    case DetectorKind::Pca: return "pca";
    case DetectorKind::IForest: return "iforest";
    case DetectorKind::Cblof: return "cblof";
    case DetectorKind::Hbos: return "hbos";
  }
  return "?";
}

inline DetectorKind parse_detector_kind(const std::string& name) {
  for (auto k : all_detector_kinds())
    if (to_string(k) == name) return k;
  throw Error(ErrorCode::InvalidConfig, "unknown detector '" + name + "'");
}

/// Name of the kind's single hyperparameter.
inline std::string hyperparameter_name(DetectorKind kind) {
  switch (kind) {
    case DetectorKind::KMeans:
    case DetectorKind::Cblof: return "clusters";
    case DetectorKind::Pca: return "components";
    case DetectorKind::IForest: return "estimators";
    case DetectorKind::Hbos: return "bins";
  }
  return "?";
}

struct DetectorSpec {
  DetectorKind kind = DetectorKind::KMeans;
  std::size_t hyperparameter = 2;
  double contamination = 0.04;
  std::uint64_t seed = 0;

  void validate() const {
    if (hyperparameter < 1) throw Error(ErrorCode::InvalidConfig, hyperparameter_name(kind) + " must be >= 1");
    if (!(contamination > 0.0 && contamination < 0.5)) {
      throw Error(ErrorCode::InvalidConfig, "contamination must lie in (0, 0.5)");
    }
  }
};

namespace detail {

inline void require_rows(const Matrix& x, std::size_t needed, const std::string& what) {
  if (static_cast<std::size_t>(x.rows()) < needed) {
    throw Error(ErrorCode::TooFewRows, what + " needs at least " + std::to_string(needed) + " rows, got " +
                                           std::to_string(x.rows()));
  }
  if (!x.allFinite()) throw Error(ErrorCode::InvalidConfig, what + ": non-finite entries");
}

inline void require_cols(const Matrix& x, Eigen::Index cols) {
  if (x.cols() != cols) {
    throw Error(ErrorCode::DimensionMismatch,
                "model fitted on " + std::to_string(cols) + " columns, got " + std::to_string(x.cols()));
  }
}

// Harmonic normalizer: average unsuccessful-search path length in a BST.
inline double average_path(double n) {
  if (n <= 1.0) return 0.0;
  if (n <= 2.0) return 1.0;
  return 2.0 * (std::log(n - 1.0) + 0.5772156649015329) - 2.0 * (n - 1.0) / n;
}

}  // namespace detail

class KMeansModel {
 public:
  static constexpr std::size_t max_iterations = 100;
  static constexpr double tolerance = 1e-4;

  static constexpr std::size_t restarts = 10;

  /// Best of `restarts` Lloyd runs (lowest inertia), each from its own
  /// greedy k-means++ seeding.
  static KMeansModel fit(const Matrix& x, std::size_t k, std::uint64_t seed) {
    detail::require_rows(x, std::max<std::size_t>(k, 1), "kmeans");
    const Vector row_sq = x.rowwise().squaredNorm();
    KMeansModel best;
    for (std::size_t r = 0; r < restarts; ++r) {
      KMeansModel m = fit_once(x, row_sq, k, derive_seed(seed, r));
      if (r == 0 || m.inertia_ < best.inertia_) best = std::move(m);
    }
    return best;
  }

  const Matrix& centroids() const { return centroids_; }
  /// Sum of squared distances to the nearest centroid over the fit data.
  double inertia() const { return inertia_; }
  const std::vector<std::size_t>& cluster_sizes() const { return sizes_; }

  /// Index of, and distance to, the nearest centroid (lowest index on ties).
  std::pair<std::size_t, double> nearest(const auto& row) const {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (Eigen::Index c = 0; c < centroids_.rows(); ++c) {
      const double d = (row - centroids_.row(c)).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = static_cast<std::size_t>(c);
      }
    }
    return {best, std::sqrt(best_d)};
  }

  Vector score(const Matrix& x) const {
    detail::require_cols(x, centroids_.cols());
    Vector s(x.rows());
    for (Eigen::Index i = 0; i < x.rows(); ++i) s(i) = nearest(x.row(i)).second;
    return s;
  }

 private:
  static KMeansModel fit_once(const Matrix& x, const Vector& row_sq, std::size_t k, std::uint64_t seed) {
    const Eigen::Index n = x.rows();
    Rng rng(seed);
    KMeansModel m;
    m.centroids_.resize(static_cast<Eigen::Index>(k), x.cols());

    // Greedy k-means++: 2 + ⌊ln k⌋ D²-weighted candidates per step, keep
    // the one that lowers the potential most.
    const std::size_t trials = 2 + static_cast<std::size_t>(std::log(static_cast<double>(k)));
    std::vector<double> d2(static_cast<std::size_t>(n));
    const Eigen::Index first = static_cast<Eigen::Index>(rng.index(static_cast<std::uint64_t>(n)));
    m.centroids_.row(0) = x.row(first);
    for (Eigen::Index i = 0; i < n; ++i) d2[static_cast<std::size_t>(i)] = (x.row(i) - x.row(first)).squaredNorm();
    std::vector<double> candidate_d2(d2.size());
    for (std::size_t c = 1; c < k; ++c) {
      double total = std::accumulate(d2.begin(), d2.end(), 0.0);
      double best_potential = std::numeric_limits<double>::infinity();
      Eigen::Index best = 0;
      std::vector<double> best_d2;
      for (std::size_t t = 0; t < trials; ++t) {
        Eigen::Index pick = n - 1;
        if (total > 0.0) {
          double target = rng.uniform() * total;
          for (Eigen::Index i = 0; i < n; ++i) {
            target -= d2[static_cast<std::size_t>(i)];
            if (target < 0.0) {
              pick = i;
              break;
            }
          }
        } else {
          pick = static_cast<Eigen::Index>(rng.index(static_cast<std::uint64_t>(n)));
        }
        double potential = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
          const auto s = static_cast<std::size_t>(i);
          candidate_d2[s] = std::min(d2[s], (x.row(i) - x.row(pick)).squaredNorm());
          potential += candidate_d2[s];
        }
        if (potential < best_potential) {
          best_potential = potential;
          best = pick;
          best_d2 = candidate_d2;
        }
      }
      m.centroids_.row(static_cast<Eigen::Index>(c)) = x.row(best);
      d2 = std::move(best_d2);
    }

    std::vector<std::size_t> assign(static_cast<std::size_t>(n));
    double previous = std::numeric_limits<double>::infinity();
    for (std::size_t iter = 0; iter < max_iterations; ++iter) {
      m.inertia_ = m.assign_fast(x, row_sq, assign);
      Matrix sums = Matrix::Zero(m.centroids_.rows(), x.cols());
      std::vector<std::size_t> counts(k, 0);
      for (Eigen::Index i = 0; i < n; ++i) {
        sums.row(static_cast<Eigen::Index>(assign[static_cast<std::size_t>(i)])) += x.row(i);
        ++counts[assign[static_cast<std::size_t>(i)]];
      }
      for (std::size_t c = 0; c < k; ++c) {
        if (counts[c] > 0) {
          m.centroids_.row(static_cast<Eigen::Index>(c)) =
              sums.row(static_cast<Eigen::Index>(c)) / static_cast<double>(counts[c]);
        }
      }
      if (previous - m.inertia_ <= tolerance * previous) break;
      previous = m.inertia_;
    }
    m.inertia_ = m.assign(x, assign);
    m.sizes_.assign(k, 0);
    for (auto a : assign) ++m.sizes_[a];
    return m;
  }

  // Lloyd-step assignment through ‖x‖² − 2x·c + ‖c‖² (one GEMM).
  double assign_fast(const Matrix& x, const Vector& row_sq, std::vector<std::size_t>& out) const {
    const Vector c_sq = centroids_.rowwise().squaredNorm();
    const Matrix cross = x * centroids_.transpose();
    double inertia = 0.0;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      Eigen::Index best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (Eigen::Index c = 0; c < centroids_.rows(); ++c) {
        const double d = row_sq(i) - 2.0 * cross(i, c) + c_sq(c);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      out[static_cast<std::size_t>(i)] = static_cast<std::size_t>(best);
      inertia += std::max(best_d, 0.0);
    }
    return inertia;
  }

  double assign(const Matrix& x, std::vector<std::size_t>& out) const {
    double inertia = 0.0;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      auto [c, d] = nearest(x.row(i));
      out[static_cast<std::size_t>(i)] = c;
      inertia += d * d;
    }
    return inertia;
  }

  Matrix centroids_;
  double inertia_ = 0.0;
  std::vector<std::size_t> sizes_;
};

/// Eigendecomposition of the training covariance, shared by every
/// component count.
struct PcaBasis {
  RowVector mean;
  Matrix axes;  // d × r, columns by decreasing variance; zero-variance axes dropped
  Vector variances;

  static PcaBasis fit(const Matrix& x) {
    detail::require_rows(x, 2, "pca");
    PcaBasis b;
    b.mean = x.colwise().mean();
    const Matrix centered = x.rowwise() - b.mean;
    const Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(x.rows() - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    const Vector& values = solver.eigenvalues();
    const double top = std::max(values.maxCoeff(), 0.0);
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = values.size() - 1; i >= 0; --i)
      if (values(i) > 1e-12 * top && values(i) > 0.0) keep.push_back(i);
    b.axes.resize(x.cols(), static_cast<Eigen::Index>(keep.size()));
    b.variances.resize(static_cast<Eigen::Index>(keep.size()));
    for (std::size_t j = 0; j < keep.size(); ++j) {
      b.axes.col(static_cast<Eigen::Index>(j)) = solver.eigenvectors().col(keep[j]);
      b.variances(static_cast<Eigen::Index>(j)) = values(keep[j]);
    }
    return b;
  }
};

class PcaModel {
 public:
  static PcaModel fit(const Matrix& x, std::size_t components) { return from_basis(PcaBasis::fit(x), components); }

  static PcaModel from_basis(const PcaBasis& basis, std::size_t components) {
    PcaModel m;
    m.mean_ = basis.mean;
    const auto c = std::min(static_cast<Eigen::Index>(components), basis.axes.cols());
    m.axes_ = basis.axes.leftCols(c);
    return m;
  }

  Eigen::Index components() const { return axes_.cols(); }
  const Matrix& axes() const { return axes_; }
  const RowVector& mean() const { return mean_; }

  /// ‖x − reconstruct(x)‖₂.
  Vector score(const Matrix& x) const {
    detail::require_cols(x, mean_.size());
    const Matrix centered = x.rowwise() - mean_;
    const Matrix residual = centered - (centered * axes_) * axes_.transpose();
    return residual.rowwise().norm();
  }

 private:
  RowVector mean_;
  Matrix axes_;
};

class IForestModel {
 public:
  static constexpr std::size_t default_subsample = 256;

  static IForestModel fit(const Matrix& x, std::size_t estimators, std::uint64_t seed,
                          std::size_t subsample = default_subsample) {
    detail::require_rows(x, 2, "iforest");
    IForestModel m;
    m.cols_ = x.cols();
    m.subsample_ = std::min<std::size_t>(subsample, static_cast<std::size_t>(x.rows()));
    const auto height_limit = static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(m.subsample_))));
    std::vector<std::size_t> pool(static_cast<std::size_t>(x.rows()));
    for (std::size_t t = 0; t < estimators; ++t) {
      Rng rng(derive_seed(seed, t));
      std::iota(pool.begin(), pool.end(), 0);
      // Partial Fisher-Yates: the first `subsample_` entries are the sample.
      for (std::size_t i = 0; i < m.subsample_; ++i) {
        std::swap(pool[i], pool[i + rng.index(pool.size() - i)]);
      }
      std::vector<std::size_t> sample(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(m.subsample_));
      Tree tree;
      m.grow(tree, x, sample, 0, height_limit, rng);
      m.trees_.push_back(std::move(tree));
    }
    return m;
  }

  std::size_t estimators() const { return trees_.size(); }

  /// 2^(−E[h(x)] / c(ψ)); higher is more anomalous.
  Vector score(const Matrix& x) const {
    detail::require_cols(x, cols_);
    const double norm = detail::average_path(static_cast<double>(subsample_));
    Vector s(x.rows());
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      double total = 0.0;
      for (const auto& tree : trees_) total += path_length(tree, x.row(i));
      const double mean = total / static_cast<double>(trees_.size());
      s(i) = std::pow(2.0, -mean / norm);
    }
    return s;
  }

 private:
  struct Node {
    Eigen::Index feature = -1;  // -1 marks a leaf
    double split = 0.0;
    std::size_t left = 0, right = 0;
    std::size_t size = 0;
  };
  using Tree = std::vector<Node>;

  std::size_t grow(Tree& tree, const Matrix& x, std::vector<std::size_t>& rows, std::size_t depth,
                   std::size_t limit, Rng& rng) const {
    const std::size_t id = tree.size();
    tree.push_back({-1, 0.0, 0, 0, rows.size()});
    if (depth >= limit || rows.size() <= 1) return id;

    // Uniform over the features that are not constant on this node.
    std::vector<Eigen::Index> candidates;
    std::vector<std::pair<double, double>> ranges;
    for (Eigen::Index f = 0; f < x.cols(); ++f) {
      double lo = x(static_cast<Eigen::Index>(rows[0]), f), hi = lo;
      for (auto r : rows) {
        const double v = x(static_cast<Eigen::Index>(r), f);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      if (hi > lo) {
        candidates.push_back(f);
        ranges.emplace_back(lo, hi);
      }
    }
    if (candidates.empty()) return id;
    const std::size_t pick = rng.index(candidates.size());
    const Eigen::Index feature = candidates[pick];
    const auto [lo, hi] = ranges[pick];
    double split = rng.uniform(lo, hi);
    if (split <= lo) split = std::nextafter(lo, hi);

    std::vector<std::size_t> left, right;
    for (auto r : rows) (x(static_cast<Eigen::Index>(r), feature) < split ? left : right).push_back(r);
    const std::size_t l = grow(tree, x, left, depth + 1, limit, rng);
    const std::size_t rt = grow(tree, x, right, depth + 1, limit, rng);
    tree[id].feature = feature;
    tree[id].split = split;
    tree[id].left = l;
    tree[id].right = rt;
    return id;
  }

  static double path_length(const Tree& tree, const auto& row) {
    std::size_t node = 0;
    double depth = 0.0;
    while (tree[node].feature >= 0) {
      node = row(tree[node].feature) < tree[node].split ? tree[node].left : tree[node].right;
      depth += 1.0;
    }
    return depth + detail::average_path(static_cast<double>(tree[node].size));
  }

  Eigen::Index cols_ = 0;
  std::size_t subsample_ = 0;
  std::vector<Tree> trees_;
};

class CblofModel {
 public:
  static constexpr double large_fraction = 0.9;

  static CblofModel fit(const Matrix& x, std::size_t clusters, std::uint64_t seed) {
    return from_kmeans(KMeansModel::fit(x, clusters, seed));
  }

  /// Clusters sorted by size (descending, index on ties) are large until
  /// their cumulative size reaches 90% of the data; the crossing cluster
  /// is large too.
  static CblofModel from_kmeans(KMeansModel kmeans) {
    CblofModel m;
    const auto& sizes = kmeans.cluster_sizes();
    std::vector<std::size_t> order(sizes.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return sizes[a] > sizes[b]; });
    const double n = static_cast<double>(std::accumulate(sizes.begin(), sizes.end(), std::size_t{0}));
    m.large_.assign(sizes.size(), false);
    double cumulative = 0.0;
    for (auto c : order) {
      m.large_[c] = true;
      cumulative += static_cast<double>(sizes[c]);
      if (cumulative >= large_fraction * n) break;
    }
    m.kmeans_ = std::move(kmeans);
    return m;
  }

  const KMeansModel& kmeans() const { return kmeans_; }
  bool is_large(std::size_t cluster) const { return large_[cluster]; }

  Vector score(const Matrix& x) const {
    detail::require_cols(x, kmeans_.centroids().cols());
    const Matrix& c = kmeans_.centroids();
    Vector s(x.rows());
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      auto [own, d] = kmeans_.nearest(x.row(i));
      if (large_[own]) {
        s(i) = d;
        continue;
      }
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index k = 0; k < c.rows(); ++k)
        if (large_[static_cast<std::size_t>(k)]) best = std::min(best, (x.row(i) - c.row(k)).squaredNorm());
      s(i) = std::sqrt(best);
    }
    return s;
  }

 private:
  KMeansModel kmeans_;
  std::vector<bool> large_;
};

class HbosModel {
 public:
  static constexpr double epsilon = 1e-12;

  static HbosModel fit(const Matrix& x, std::size_t bins) {
    detail::require_rows(x, 1, "hbos");
    if (bins < 1) throw Error(ErrorCode::InvalidConfig, "hbos needs at least one bin");
    HbosModel m;
    m.bins_ = bins;
    const double n = static_cast<double>(x.rows());
    for (Eigen::Index f = 0; f < x.cols(); ++f) {
      Histogram h;
      h.lo = x.col(f).minCoeff();
      h.hi = x.col(f).maxCoeff();
      if (h.hi == h.lo) {
        h.density = {1.0};
      } else {
        h.width = (h.hi - h.lo) / static_cast<double>(bins);
        std::vector<double> counts(bins, 0.0);
        for (Eigen::Index i = 0; i < x.rows(); ++i) counts[h.bin(x(i, f), bins)] += 1.0;
        for (double c : counts) h.density.push_back(c / (n * h.width));
      }
      m.histograms_.push_back(std::move(h));
    }
    return m;
  }

  /// Σ_d log(1 / max(density_d(x), ε)).
  Vector score(const Matrix& x) const {
    detail::require_cols(x, static_cast<Eigen::Index>(histograms_.size()));
    Vector s = Vector::Zero(x.rows());
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      double total = 0.0;
      for (std::size_t f = 0; f < histograms_.size(); ++f) {
        total -= std::log(std::max(histograms_[f].density_at(x(i, static_cast<Eigen::Index>(f)), bins_), epsilon));
      }
      s(i) = total;
    }
    return s;
  }

 private:
  struct Histogram {
    double lo = 0.0, hi = 0.0, width = 0.0;
    std::vector<double> density;

    std::size_t bin(double v, std::size_t bins) const {
      const auto b = static_cast<std::size_t>((v - lo) / width);
      return std::min(b, bins - 1);
    }
    double density_at(double v, std::size_t bins) const {
      if (v < lo || v > hi) return epsilon;
      if (width == 0.0) return density[0];
      return density[bin(v, bins)];
    }
  };

  std::size_t bins_ = 0;
  std::vector<Histogram> histograms_;
};

/// Any fitted scorer; higher score = more anomalous.
class Scorer {
 public:
  using Variant = std::variant<KMeansModel, PcaModel, IForestModel, CblofModel, HbosModel>;

  explicit Scorer(Variant model) : model_(std::move(model)) {}

  static Scorer fit(DetectorKind kind, const Matrix& x, std::size_t hyperparameter, std::uint64_t seed) {
    switch (kind) {
      case DetectorKind::KMeans: return Scorer(KMeansModel::fit(x, hyperparameter, seed));
      case DetectorKind::Pca: return Scorer(PcaModel::fit(x, hyperparameter));
      case DetectorKind::IForest: return Scorer(IForestModel::fit(x, hyperparameter, seed));
      case DetectorKind::Cblof: return Scorer(CblofModel::fit(x, hyperparameter, seed));
      case DetectorKind::Hbos: return Scorer(HbosModel::fit(x, hyperparameter));
    }
    throw Error(ErrorCode::InvalidConfig, "unknown detector kind");
  }

  Vector score(const Matrix& x) const {
    return std::visit([&](const auto& m) { return m.score(x); }, model_);
  }

  const Variant& model() const { return model_; }

 private:
  Variant model_;
};

/// Cutoff such that exactly ⌈c·n⌉ scores lie strictly above it when there
/// are no ties: the (n − ⌈c·n⌉)-th smallest score.
inline double contamination_threshold(const Vector& train_scores, double contamination) {
  const auto n = static_cast<std::size_t>(train_scores.size());
  if (n == 0) throw Error(ErrorCode::EmptyInput, "threshold of zero scores");
  const std::size_t k = std::min(ceil_count(contamination, n), n);
  if (k == 0) return train_scores.maxCoeff();
  if (k == n) return -std::numeric_limits<double>::infinity();
  std::vector<double> sorted(train_scores.data(), train_scores.data() + n);
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(n - k - 1), sorted.end());
  return sorted[n - k - 1];
}

inline std::vector<int> flags_above(const Vector& scores, double threshold) {
  std::vector<int> flags(static_cast<std::size_t>(scores.size()));
  for (Eigen::Index i = 0; i < scores.size(); ++i) flags[static_cast<std::size_t>(i)] = scores(i) > threshold;
  return flags;
}

struct Verdict {
  Vector scores;
  std::vector<int> flags;
};

/// Fitted scorer plus its training-quantile threshold. Immutable after fit.
class DetectorModel {
 public:
  static DetectorModel fit(const Matrix& x, const DetectorSpec& spec) {
    spec.validate();
    Scorer scorer = Scorer::fit(spec.kind, x, spec.hyperparameter, spec.seed);
    return from_scorer(std::move(scorer), x, spec);
  }

  static DetectorModel from_scorer(Scorer scorer, const Matrix& train, const DetectorSpec& spec) {
    const Vector s = scorer.score(train);
    return DetectorModel(std::move(scorer), spec, contamination_threshold(s, spec.contamination));
  }

  const DetectorSpec& spec() const { return spec_; }
  double threshold() const { return threshold_; }
  const Scorer& scorer() const { return scorer_; }

  Verdict predict(const Matrix& x) const {
    Verdict v;
    v.scores = scorer_.score(x);
    v.flags = flags_above(v.scores, threshold_);
    return v;
  }

 private:
  DetectorModel(Scorer scorer, DetectorSpec spec, double threshold)
      : scorer_(std::move(scorer)), spec_(spec), threshold_(threshold) {}

  Scorer scorer_;
  DetectorSpec spec_;
  double threshold_;
};

}  // namespace steg
