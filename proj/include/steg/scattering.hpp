#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "steg/error.hpp"
#include "steg/flow_graph.hpp"
#include "steg/types.hpp"

namespace steg {

struct ScatteringConfig {
  int J = 4;       // averaging scale 2^J, octaves spanned by the band-pass family
  int Q = 16;      // first-order wavelets per octave
  int Q2 = 1;      // second-order wavelets per octave
  int T = 64;      // padded length, a power of two
  int max_order = 2;

  void validate() const {
    if (J < 1) throw Error(ErrorCode::InvalidConfig, "J must be >= 1");
    if (Q < 1 || Q2 < 1) throw Error(ErrorCode::InvalidConfig, "Q and Q2 must be >= 1");
    if (T < (1 << J)) throw Error(ErrorCode::InvalidConfig, "T must be >= 2^J");
    if ((T & (T - 1)) != 0) throw Error(ErrorCode::InvalidConfig, "T must be a power of two");
    if (max_order < 0 || max_order > 2) throw Error(ErrorCode::InvalidConfig, "max_order must be 0, 1 or 2");
  }

  /// Smallest power of two ≥ max(signal_length, 2^J).
  static int padded_length(std::size_t signal_length, int J) {
    int t = 1;
    while (t < (1 << J) || static_cast<std::size_t>(t) < signal_length) t <<= 1;
    return t;
  }
};

struct ScatteringPath {
  int order;
  int lambda1;  // -1 when unused
  int lambda2;  // -1 when unused

  std::string label() const {
    if (order == 0) return "s0";
    if (order == 1) return "s1_" + std::to_string(lambda1);
    return "s2_" + std::to_string(lambda1) + "_" + std::to_string(lambda2);
  }
  bool operator==(const ScatteringPath&) const = default;
};

/// One band-pass filter: sampled frequency response plus its design
/// parameters (center frequency and bandwidth, in cycles per sample).
struct WaveletFilter {
  double xi;
  double sigma;
  std::vector<double> response;
};

/// Frequency-domain filters for a given config and the ordered coefficient
/// paths they produce.
struct ScatteringFilterBank {
  ScatteringConfig config;
  std::vector<double> phi;
  std::vector<WaveletFilter> psi1;
  std::vector<WaveletFilter> psi2;
  std::vector<ScatteringPath> paths;

  std::size_t size() const { return paths.size(); }

  /// max over frequency bins of |φ̂(ω)|² + ½ Σ_λ |ψ̂_λ(ω)|², for one family.
  static double littlewood_paley_max(const std::vector<double>& phi,
                                     const std::vector<WaveletFilter>& family) {
    double worst = 0.0;
    for (std::size_t k = 0; k < phi.size(); ++k) {
      double sum = 0.0;
      for (const auto& f : family) sum += f.response[k] * f.response[k];
      worst = std::max(worst, phi[k] * phi[k] + 0.5 * sum);
    }
    return worst;
  }
};

namespace detail {

/// Signed frequency of DFT bin k, in cycles per sample, in [-0.5, 0.5).
inline double bin_frequency(int k, int T) {
  return k < T / 2 ? static_cast<double>(k) / T : static_cast<double>(k - T) / T;
}

/// Gaussian bump centered at `center`, periodized over the unit frequency circle.
inline double periodic_gaussian(double omega, double center, double sigma) {
  double sum = 0.0;
  for (int period = -3; period <= 3; ++period) {
    const double d = omega - center + period;
    sum += std::exp(-d * d / (2.0 * sigma * sigma));
  }
  return sum;
}

/// Morlet response: Gaussian at `xi` minus a scaled Gaussian at 0 so that
/// the response vanishes exactly at DC.
inline std::vector<double> morlet_response(double xi, double sigma, int T) {
  const double kappa = periodic_gaussian(0.0, xi, sigma) / periodic_gaussian(0.0, 0.0, sigma);
  std::vector<double> out(static_cast<std::size_t>(T));
  for (int k = 0; k < T; ++k) {
    const double w = bin_frequency(k, T);
    out[static_cast<std::size_t>(k)] = periodic_gaussian(w, xi, sigma) - kappa * periodic_gaussian(w, 0.0, sigma);
  }
  out[0] = 0.0;
  return out;
}

inline std::vector<double> gaussian_lowpass(double sigma, int T) {
  std::vector<double> out(static_cast<std::size_t>(T));
  const double peak = periodic_gaussian(0.0, 0.0, sigma);
  for (int k = 0; k < T; ++k) {
    out[static_cast<std::size_t>(k)] = periodic_gaussian(bin_frequency(k, T), 0.0, sigma) / peak;
  }
  return out;
}

/// Center frequencies and widths for one wavelet family: J·Q geometrically
/// spaced filters (ratio 2^(-1/Q)) from the highest admissible frequency,
/// then Q-1 linearly spaced filters filling the band below.
inline std::vector<WaveletFilter> design_family(int J, int Q, int T) {
  const double xi_max = std::max(1.0 / (1.0 + std::pow(2.0, 3.0 / Q)), 0.35);
  const double ratio = std::pow(2.0, -1.0 / Q);
  // Neighbouring filters cross at amplitude 1/sqrt(2).
  const double bandwidth = (1.0 - ratio) / (1.0 + ratio) / std::sqrt(std::log(2.0));
  // A filter narrower than half a DFT bin misses the sampling grid.
  const double sigma_floor = 0.5 / T;

  std::vector<WaveletFilter> family;
  double xi = xi_max;
  for (int n = 0; n < J * Q; ++n) {
    xi = xi_max * std::pow(2.0, -static_cast<double>(n) / Q);
    family.push_back({xi, std::max(xi * bandwidth, sigma_floor), {}});
  }
  const double xi_last = xi;
  const double sigma_last = family.back().sigma;
  for (int k = 1; k < Q; ++k) {
    family.push_back({xi_last * (Q - k) / Q, sigma_last, {}});
  }
  for (auto& f : family) f.response = morlet_response(f.xi, f.sigma, T);
  return family;
}

/// Scales a family uniformly so that |φ̂|² + ½ Σ (|ψ̂(ω)|² + |ψ̂(-ω)|²) ≤ 1
/// at every bin. The symmetric form bounds the energy seen by real inputs
/// and implies the one-sided Littlewood-Paley bound.
inline void normalize_family(std::vector<WaveletFilter>& family, const std::vector<double>& phi) {
  const int T = static_cast<int>(phi.size());
  double scale_sq = std::numeric_limits<double>::infinity();
  for (int k = 0; k < T; ++k) {
    const int mirror = (T - k) % T;
    double energy = 0.0;
    for (const auto& f : family) {
      const double a = f.response[static_cast<std::size_t>(k)];
      const double b = f.response[static_cast<std::size_t>(mirror)];
      energy += 0.5 * (a * a + b * b);
    }
    if (energy <= 0.0) continue;
    const double room = 1.0 - phi[static_cast<std::size_t>(k)] * phi[static_cast<std::size_t>(k)];
    scale_sq = std::min(scale_sq, room / energy);
  }
  if (!std::isfinite(scale_sq)) return;
  const double scale = std::sqrt(scale_sq) * (1.0 - 1e-12);
  for (auto& f : family) {
    for (auto& v : f.response) v *= scale;
  }
}

}  // namespace detail

inline ScatteringFilterBank build_filterbank(const ScatteringConfig& config) {
  config.validate();
  ScatteringFilterBank bank;
  bank.config = config;
  const double sigma_phi = std::max(0.1 / static_cast<double>(1 << config.J), 0.5 / config.T);
  bank.phi = detail::gaussian_lowpass(sigma_phi, config.T);
  if (config.max_order >= 1) {
    bank.psi1 = detail::design_family(config.J, config.Q, config.T);
    detail::normalize_family(bank.psi1, bank.phi);
  }
  if (config.max_order >= 2) {
    bank.psi2 = detail::design_family(config.J, config.Q2, config.T);
    detail::normalize_family(bank.psi2, bank.phi);
  }

  bank.paths.push_back({0, -1, -1});
  for (int l1 = 0; l1 < static_cast<int>(bank.psi1.size()); ++l1) bank.paths.push_back({1, l1, -1});
  for (int l1 = 0; l1 < static_cast<int>(bank.psi1.size()); ++l1) {
    for (int l2 = 0; l2 < static_cast<int>(bank.psi2.size()); ++l2) {
      if (bank.psi2[static_cast<std::size_t>(l2)].xi < bank.psi1[static_cast<std::size_t>(l1)].xi) {
        bank.paths.push_back({2, l1, l2});
      }
    }
  }
  return bank;
}

/// Reusable evaluator holding FFT plans and scratch buffers for one bank.
class Scatterer {
 public:
  explicit Scatterer(const ScatteringFilterBank& bank) : bank_(bank) {
    const auto T = static_cast<std::size_t>(bank.config.T);
    padded_.resize(T);
    spectrum_.resize(T);
    work_.resize(T);
    envelope_.resize(T);
    envelope_spectrum_.resize(T);
    second_.resize(T);
  }

  std::size_t size() const { return bank_.size(); }

  /// Writes |paths| coefficients into `out`, ordered like bank.paths.
  void operator()(std::span<const double> x, std::span<double> out) {
    const auto T = static_cast<std::size_t>(bank_.config.T);
    if (x.size() > T) {
      throw Error(ErrorCode::LengthExceedsT, "signal length " + std::to_string(x.size()) +
                                                 " exceeds padded length " + std::to_string(T));
    }
    if (out.size() != bank_.size()) throw Error(ErrorCode::DimensionMismatch, "output span size");

    std::fill(padded_.begin(), padded_.end(), 0.0);
    std::copy(x.begin(), x.end(), padded_.begin());
    fft_.fwd(spectrum_, padded_);

    const double inv_T = 1.0 / static_cast<double>(T);
    const double phi_dc = bank_.phi[0];

    // Order 0: mean of |x * φ|.
    for (std::size_t k = 0; k < T; ++k) work_[k] = spectrum_[k] * bank_.phi[k];
    fft_.inv(second_, work_);
    double acc = 0.0;
    for (const auto& v : second_) acc += std::abs(v);
    out[0] = acc * inv_T;

    // Paths are laid out as [s0, s1..., s2...]; order-2 entries follow
    // lexicographic (λ1, λ2) order, so a running cursor suffices.
    std::size_t cursor2 = 1 + bank_.psi1.size();
    for (std::size_t l1 = 0; l1 < bank_.psi1.size(); ++l1) {
      const auto& filter = bank_.psi1[l1].response;
      for (std::size_t k = 0; k < T; ++k) work_[k] = spectrum_[k] * filter[k];
      fft_.inv(second_, work_);
      double mean_u1 = 0.0;
      for (std::size_t t = 0; t < T; ++t) {
        envelope_[t] = std::abs(second_[t]);
        mean_u1 += envelope_[t];
      }
      // φ is a positive kernel, so averaging |U ∗ φ| for U ≥ 0 equals φ̂(0)·mean(U).
      out[1 + l1] = phi_dc * mean_u1 * inv_T;

      if (bank_.psi2.empty()) continue;
      bool transformed = false;
      while (cursor2 < bank_.paths.size() &&
             bank_.paths[cursor2].lambda1 == static_cast<int>(l1)) {
        if (!transformed) {
          fft_.fwd(envelope_spectrum_, envelope_);
          transformed = true;
        }
        const auto& filter2 = bank_.psi2[static_cast<std::size_t>(bank_.paths[cursor2].lambda2)].response;
        for (std::size_t k = 0; k < T; ++k) work_[k] = envelope_spectrum_[k] * filter2[k];
        fft_.inv(second_, work_);
        double mean_u2 = 0.0;
        for (const auto& v : second_) mean_u2 += std::abs(v);
        out[cursor2] = phi_dc * mean_u2 * inv_T;
        ++cursor2;
      }
    }
  }

  std::vector<double> operator()(std::span<const double> x) {
    std::vector<double> out(bank_.size());
    (*this)(x, out);
    return out;
  }

 private:
  const ScatteringFilterBank& bank_;
  Eigen::FFT<double> fft_;
  std::vector<double> padded_;
  std::vector<std::complex<double>> spectrum_;
  std::vector<std::complex<double>> work_;
  std::vector<double> envelope_;
  std::vector<std::complex<double>> envelope_spectrum_;
  std::vector<std::complex<double>> second_;
};

inline std::vector<double> scatter(const ScatteringFilterBank& bank, std::span<const double> x) {
  Scatterer s(bank);
  return s(x);
}

/// Appends the scattering coefficients of every flow's feature vector to
/// it. Both directions of a flow share one feature row, so each flow is
/// transformed once.
inline FlowGraph augment_edges(const FlowGraph& graph, const ScatteringFilterBank& bank) {
  const auto n = static_cast<Eigen::Index>(graph.flow_count());
  const auto d = static_cast<Eigen::Index>(graph.feature_dim());
  const auto p = static_cast<Eigen::Index>(bank.size());
  Matrix augmented(n, d + p);
  Scatterer scatterer(bank);
  std::vector<double> row(static_cast<std::size_t>(d));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) row[static_cast<std::size_t>(j)] = graph.flow_features()(i, j);
    augmented.row(i).head(d) = graph.flow_features().row(i);
    scatterer(row, std::span<double>(augmented.row(i).data() + d, static_cast<std::size_t>(p)));
  }
  return graph.with_flow_features(std::move(augmented));
}

/// Header labels matching bank.paths, e.g. for coefficient dumps.
inline std::vector<std::string> path_labels(const ScatteringFilterBank& bank) {
  std::vector<std::string> labels;
  labels.reserve(bank.size());
  for (const auto& p : bank.paths) labels.push_back(p.label());
  return labels;
}

}  // namespace steg
