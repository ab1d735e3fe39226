#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "steg/synthetic.hpp"

namespace {

using namespace steg;

SyntheticSpec spec_with(double strength, std::uint64_t seed = 3) {
  SyntheticSpec s;
  s.anomaly_strength = strength;
  s.seed = seed;
  return s;
}

TEST(Synthetic, AttackCountIsFractionOfFlows) {
  const FlowTable t = generate_synthetic(spec_with(6.0));
  ASSERT_EQ(t.size(), 5000u);
  int attacks = 0;
  for (int y : labels_of(t)) attacks += y;
  EXPECT_EQ(attacks, 200);
}

TEST(Synthetic, HeaderMatchesNetflowV2) {
  std::stringstream ss;
  SyntheticSpec s = spec_with(6.0);
  s.n_flows = 10;
  write_synthetic_csv(ss, s);
  std::string header;
  std::getline(ss, header);
  std::size_t commas = 0;
  for (char c : header) commas += c == ',';
  EXPECT_EQ(commas + 1, 45u);
  EXPECT_EQ(header.rfind("IPV4_SRC_ADDR,L4_SRC_PORT,IPV4_DST_ADDR", 0), 0u);
  EXPECT_NE(header.find(",Label,Attack"), std::string::npos);
}

TEST(Synthetic, SchemaDropsPortsAndKeepsCategoricals) {
  const FlowTable t = generate_synthetic(spec_with(6.0));
  EXPECT_EQ(t.categorical_names, (std::vector<std::string>{"PROTOCOL", "L7_PROTO", "TCP_FLAGS"}));
  EXPECT_EQ(t.numeric_names.size(), 36u);
  for (const auto& n : t.numeric_names) EXPECT_EQ(n.find("PORT"), std::string::npos);
}

TEST(Synthetic, AttacksComeFromDedicatedHosts) {
  const FlowTable t = generate_synthetic(spec_with(6.0));
  std::set<std::string> attack_sources, benign_hosts, types;
  for (const auto& r : t.records) {
    if (r.label) {
      attack_sources.insert(r.src_id);
      types.insert(r.attack_type);
    } else {
      benign_hosts.insert(r.src_id);
      benign_hosts.insert(r.dst_id);
      EXPECT_EQ(r.attack_type, "Benign");
    }
  }
  EXPECT_LE(attack_sources.size(), 4u);
  for (const auto& a : attack_sources) EXPECT_EQ(benign_hosts.count(a), 0u) << a;
  EXPECT_EQ(types, (std::set<std::string>{"DoS", "Reconnaissance"}));
}

TEST(Synthetic, SameSeedSameBytes) {
  std::stringstream a, b, c;
  write_synthetic_csv(a, spec_with(6.0, 9));
  write_synthetic_csv(b, spec_with(6.0, 9));
  write_synthetic_csv(c, spec_with(6.0, 10));
  EXPECT_EQ(a.str(), b.str());
  EXPECT_NE(a.str(), c.str());
}

// Per-feature mean of attack rows against benign rows, in benign σ units.
std::vector<double> standardized_gap(const FlowTable& t) {
  const std::size_t d = t.numeric_names.size();
  std::vector<double> sum[2] = {std::vector<double>(d), std::vector<double>(d)};
  std::vector<double> sq(d);
  double n[2] = {0, 0};
  for (const auto& r : t.records) {
    n[r.label] += 1;
    for (std::size_t j = 0; j < d; ++j) {
      sum[r.label][j] += r.numerics[j];
      if (!r.label) sq[j] += r.numerics[j] * r.numerics[j];
    }
  }
  std::vector<double> gap(d);
  for (std::size_t j = 0; j < d; ++j) {
    const double mb = sum[0][j] / n[0];
    const double sd = std::sqrt(sq[j] / n[0] - mb * mb);
    gap[j] = (sum[1][j] / n[1] - mb) / sd;
  }
  return gap;
}

TEST(Synthetic, StrengthZeroMatchesBenignMarginal) {
  SyntheticSpec s = spec_with(0.0);
  s.n_flows = 40000;
  const auto gap = standardized_gap(generate_synthetic(s));
  // 1600 attack rows: the standard error of a mean is 1/40 σ.
  for (double g : gap) EXPECT_LT(std::abs(g), 0.15);
}

TEST(Synthetic, StrengthShiftsASubsetOfFeatures) {
  const auto gap = standardized_gap(generate_synthetic(spec_with(6.0)));
  int shifted = 0;
  for (double g : gap) shifted += g > 1.0;
  // Two attack types, each shifting ~35% of the 36 numeric features.
  EXPECT_GE(shifted, 10);
  EXPECT_LT(shifted, 36);
}

TEST(Synthetic, RejectsBadSpecs) {
  SyntheticSpec s;
  s.attack_fraction = 0.5;
  EXPECT_THROW(s.validate(), Error);
  s = SyntheticSpec{};
  s.anomaly_strength = -1.0;
  EXPECT_THROW(s.validate(), Error);
  s = SyntheticSpec{};
  s.n_hosts = 1;
  EXPECT_THROW(s.validate(), Error);
}

}  // namespace
