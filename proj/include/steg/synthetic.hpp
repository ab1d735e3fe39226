#pragma once

#include <cmath>
#include <cstdint>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "steg/csv.hpp"
#include "steg/error.hpp"
#include "steg/flow_ingest.hpp"
#include "steg/random.hpp"

namespace steg {

/// The 43 NetFlow v2 feature columns, in file order.
inline const std::vector<std::string>& nf_v2_columns() {
  static const std::vector<std::string> cols{
      "IPV4_SRC_ADDR", "L4_SRC_PORT", "IPV4_DST_ADDR", "L4_DST_PORT", "PROTOCOL", "L7_PROTO",
      "IN_BYTES", "IN_PKTS", "OUT_BYTES", "OUT_PKTS", "TCP_FLAGS", "CLIENT_TCP_FLAGS",
      "SERVER_TCP_FLAGS", "FLOW_DURATION_MILLISECONDS", "DURATION_IN", "DURATION_OUT", "MIN_TTL",
      "MAX_TTL", "LONGEST_FLOW_PKT", "SHORTEST_FLOW_PKT", "MIN_IP_PKT_LEN", "MAX_IP_PKT_LEN",
      "SRC_TO_DST_SECOND_BYTES", "DST_TO_SRC_SECOND_BYTES", "RETRANSMITTED_IN_BYTES",
      "RETRANSMITTED_IN_PKTS", "RETRANSMITTED_OUT_BYTES", "RETRANSMITTED_OUT_PKTS",
      "SRC_TO_DST_AVG_THROUGHPUT", "DST_TO_SRC_AVG_THROUGHPUT", "NUM_PKTS_UP_TO_128_BYTES",
      "NUM_PKTS_128_TO_256_BYTES", "NUM_PKTS_256_TO_512_BYTES", "NUM_PKTS_512_TO_1024_BYTES",
      "NUM_PKTS_1024_TO_1514_BYTES", "TCP_WIN_MAX_IN", "TCP_WIN_MAX_OUT", "ICMP_TYPE",
      "ICMP_IPV4_TYPE", "DNS_QUERY_ID", "DNS_QUERY_TYPE", "DNS_TTL_ANSWER", "FTP_COMMAND_RET_CODE"};
  return cols;
}

/// Built-in copy of configs/nf_v2_schema.ini.
inline Schema nf_v2_schema() {
  Schema s;
  s.source_column = "IPV4_SRC_ADDR";
  s.destination_column = "IPV4_DST_ADDR";
  s.label_column = "Label";
  s.attack_column = "Attack";
  s.roles = {{"PROTOCOL", ColumnRole::Categorical},
             {"L7_PROTO", ColumnRole::Categorical},
             {"TCP_FLAGS", ColumnRole::Categorical}};
  return s;
}

struct SyntheticSpec {
  std::size_t n_flows = 5000;
  std::size_t n_hosts = 200;
  double attack_fraction = 0.04;
  double anomaly_strength = 6.0;  // mean shift in units of the feature's benign σ
  std::uint64_t seed = 0;

  // Shape of the generated network.
  std::size_t profiles = 5;        // benign service profiles
  std::size_t attackers = 4;       // external hosts that only send attacks
  std::size_t victims = 2;         // DoS targets; scans hit any host
  double shifted_fraction = 0.35;  // share of numeric features an attack shifts

  void validate() const {
    if (n_flows < 2) throw Error(ErrorCode::InvalidConfig, "n_flows must be >= 2");
    if (n_hosts < 2) throw Error(ErrorCode::InvalidConfig, "n_hosts must be >= 2");
    if (!(attack_fraction > 0.0 && attack_fraction < 0.5))
      throw Error(ErrorCode::InvalidConfig, "attack_fraction must be in (0, 0.5)");
    if (!(anomaly_strength >= 0.0)) throw Error(ErrorCode::InvalidConfig, "anomaly_strength must be >= 0");
    if (profiles < 1 || attackers < 1 || victims < 1 || victims > n_hosts)
      throw Error(ErrorCode::InvalidConfig, "profiles, attackers and victims must be >= 1, victims <= n_hosts");
  }
};

namespace detail {

struct Profile {
  std::vector<double> mean;  // one per numeric column
  std::vector<double> sigma;
  int protocol;
  int l7;
  int tcp_flags;
};

inline bool synthetic_numeric(const std::string& col) {
  return col != "IPV4_SRC_ADDR" && col != "IPV4_DST_ADDR" && col != "L4_SRC_PORT" && col != "L4_DST_PORT" &&
         col != "PROTOCOL" && col != "L7_PROTO" && col != "TCP_FLAGS";
}

}  // namespace detail

/// Writes a NetFlow-v2-shaped CSV (43 features + Label + Attack).
///
/// Benign flows: hosts drawn with Zipf-like popularity. Every destination
/// runs one of `profiles` services; a pair's Gaussian is that service's
/// profile with a per-pair jitter on the means.
/// Attack flows: sent by a few dedicated attacker hosts. Even attackers
/// flood the small victim pool (DoS), odd ones scan arbitrary hosts
/// (Reconnaissance). Each flow is drawn like a benign flow of a random host
/// pair, then shifted by anomaly_strength·σ on a random subset of numeric
/// features (one subset per attack type). Categorical columns follow the
/// profile and are never shifted.
inline void write_synthetic_csv(std::ostream& out, const SyntheticSpec& spec) {
  spec.validate();
  Rng rng(derive_seed(spec.seed, "synthetic"));
  const auto& cols = nf_v2_columns();
  std::vector<std::size_t> numeric_cols;
  for (std::size_t c = 0; c < cols.size(); ++c)
    if (detail::synthetic_numeric(cols[c])) numeric_cols.push_back(c);
  const std::size_t d = numeric_cols.size();

  static constexpr int protocols[] = {6, 17, 1};
  static constexpr int l7s[] = {7, 5, 91, 0, 131};
  static constexpr int flags[] = {27, 24, 2, 0, 30};
  std::vector<detail::Profile> profiles(spec.profiles);
  for (std::size_t p = 0; p < spec.profiles; ++p) {
    auto& prof = profiles[p];
    for (std::size_t j = 0; j < d; ++j) {
      const double m = rng.uniform(20.0, 100.0);
      prof.mean.push_back(m);
      prof.sigma.push_back(m * rng.uniform(0.05, 0.15));
    }
    prof.protocol = protocols[p % 3];
    prof.l7 = l7s[p % 5];
    prof.tcp_flags = flags[p % 5];
  }

  // Per-feature σ of the benign mixture (equal profile weights): within-profile
  // variance plus the spread of the profile means.
  std::vector<double> feature_sigma(d);
  for (std::size_t j = 0; j < d; ++j) {
    double m = 0.0, within = 0.0;
    for (const auto& prof : profiles) {
      m += prof.mean[j];
      within += prof.sigma[j] * prof.sigma[j];
    }
    m /= static_cast<double>(spec.profiles);
    double between = 0.0;
    for (const auto& prof : profiles) between += (prof.mean[j] - m) * (prof.mean[j] - m);
    feature_sigma[j] = std::sqrt((within + between) / static_cast<double>(spec.profiles));
  }

  const char* attack_types[] = {"DoS", "Reconnaissance"};
  std::vector<std::vector<char>> shifted(2, std::vector<char>(d, 0));
  for (auto& mask : shifted) {
    std::vector<std::size_t> idx(d);
    for (std::size_t j = 0; j < d; ++j) idx[j] = j;
    rng.shuffle(idx.begin(), idx.end());
    const auto k = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(spec.shifted_fraction * d)));
    for (std::size_t j = 0; j < k; ++j) mask[idx[j]] = 1;
  }

  // Zipf-like host popularity so a few servers act as hubs.
  std::vector<double> cumulative(spec.n_hosts);
  double total = 0.0;
  for (std::size_t h = 0; h < spec.n_hosts; ++h) cumulative[h] = total += 1.0 / std::pow(h + 1.0, 0.8);
  auto pick_host = [&] {
    const double u = rng.uniform() * total;
    return static_cast<std::size_t>(std::lower_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
  };
  auto host_ip = [](std::size_t h) { return "10.0." + std::to_string(h / 250) + "." + std::to_string(h % 250 + 1); };
  // The destination's service sets the profile.
  auto service_profile = [&](std::size_t dst) { return splitmix64(spec.seed ^ (dst * 1000003u)) % spec.profiles; };
  // Per-pair jitter, fixed for the pair.
  auto pair_jitter = [&](std::size_t a, std::size_t b, std::size_t j) {
    Rng local(derive_seed(splitmix64(a * 1000003u + b), j));
    return 1.0 + 0.05 * local.normal();
  };

  std::vector<std::size_t> victims(spec.victims);
  for (auto& v : victims) v = rng.index(spec.n_hosts);

  const std::size_t n_attack = ceil_count(spec.attack_fraction, spec.n_flows);
  std::vector<char> is_attack(spec.n_flows, 0);
  {
    std::vector<std::size_t> idx(spec.n_flows);
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    rng.shuffle(idx.begin(), idx.end());
    for (std::size_t i = 0; i < n_attack; ++i) is_attack[idx[i]] = 1;
  }

  std::vector<std::string> header = cols;
  header.push_back("Label");
  header.push_back("Attack");
  csv::write_row(out, header);
  std::vector<std::string> row(header.size());
  for (std::size_t f = 0; f < spec.n_flows; ++f) {
    std::size_t src, dst;
    std::string src_ip, dst_ip;
    int type = -1;
    if (is_attack[f]) {
      const std::size_t a = rng.index(spec.attackers);
      type = static_cast<int>(a % 2);
      dst = type == 0 ? victims[rng.index(victims.size())] : rng.index(spec.n_hosts);
      src = spec.n_hosts + a;
      src_ip = "203.0.113." + std::to_string(a + 1);
      dst_ip = host_ip(dst);
    } else {
      src = pick_host();
      do dst = pick_host();
      while (dst == src);
      src_ip = host_ip(src);
      dst_ip = host_ip(dst);
    }
    // Attack traffic mimics the benign mix: its base profile comes from a
    // benign-style host pair, so only the shift sets it apart.
    std::size_t ps = src, pd = dst;
    if (type >= 0) {
      ps = pick_host();
      do pd = pick_host();
      while (pd == ps);
    }
    const auto& prof = profiles[service_profile(pd)];
    std::size_t j = 0;
    for (std::size_t c : numeric_cols) {
      double mean = prof.mean[j] * pair_jitter(ps, pd, j);
      if (type >= 0 && shifted[static_cast<std::size_t>(type)][j]) mean += spec.anomaly_strength * feature_sigma[j];
      const double v = std::max(0.0, mean + prof.sigma[j] * rng.normal());
      row[c] = csv::format_double(std::round(v * 100.0) / 100.0);
      ++j;
    }
    row[0] = src_ip;
    row[1] = std::to_string(1024 + rng.index(60000));
    row[2] = dst_ip;
    row[3] = std::to_string(rng.index(2) ? 443 : 53);
    row[4] = std::to_string(prof.protocol);
    row[5] = std::to_string(prof.l7);
    row[10] = std::to_string(prof.tcp_flags);
    row[cols.size()] = type >= 0 ? "1" : "0";
    row[cols.size() + 1] = type >= 0 ? attack_types[type] : "Benign";
    csv::write_row(out, row);
  }
}

/// The synthetic CSV parsed with the built-in NF-v2 schema.
inline FlowTable generate_synthetic(const SyntheticSpec& spec) {
  std::stringstream buffer;
  write_synthetic_csv(buffer, spec);
  return parse_netflow(buffer, nf_v2_schema(), "synthetic");
}

}  // namespace steg
