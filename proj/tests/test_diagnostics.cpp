#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "clansim/clan.hpp"
#include "clansim/continuous_models.hpp"
#include "clansim/contours.hpp"
#include "clansim/diagnostics.hpp"
#include "clansim/error.hpp"
#include "clansim/random_cluster.hpp"
#include "clansim/toy.hpp"

using namespace clansim;

TEST(Alpha, ToyPair) {
  const ToyModel m = toy_hardcore({{"a", 0.4}, {"b", 0.4}}, {{"a", "b"}});
  const auto r = alpha(m);
  EXPECT_DOUBLE_EQ(r.alpha, 0.8);
  EXPECT_TRUE(r.subcritical);
  const ToyModel scaled = toy_hardcore({{"a", 0.4 * 0.3}, {"b", 0.4 * 0.3}}, {{"a", "b"}});
  EXPECT_NEAR(alpha(scaled).alpha, 0.3 * 0.8, 1e-15);
}

TEST(Alpha, AreaDisc) {
  const AreaModel m(0.05, 1.0, GrainGeometry::disc(1.0));
  const auto r = alpha(m);
  EXPECT_NEAR(r.alpha, 0.05 * 4.0 * std::numbers::pi, 1e-12);
  EXPECT_NEAR(r.alpha, 0.6283, 1e-4);
  EXPECT_TRUE(r.subcritical);
}

TEST(Alpha, LossNetworkBounds) {
  const LossNetworkModel m(0.2, LengthLaw::fixed(1.0), 1);
  const auto r = alpha(m);
  ASSERT_EQ(r.bounds.size(), 2u);
  EXPECT_NEAR(r.bounds[0].value, 0.6, 1e-15);
  EXPECT_NEAR(r.bounds[1].value, 0.4, 1e-15);
  EXPECT_NEAR(r.alpha, 0.4, 1e-15);
  const LossNetworkModel heavy(1.0, LengthLaw::fixed(1.0), 1);
  EXPECT_NEAR(alpha(heavy).alpha, 2.0, 1e-15);
  EXPECT_FALSE(alpha(heavy).subcritical);
}

TEST(Alpha, StraussAndContours) {
  const StraussModel s(0.1, -1.0, false, 1.0, 1.0);
  EXPECT_NEAR(alpha(s).alpha, 0.1 * std::numbers::pi, 1e-12);
  const ContourModel c(2.0, 10);
  const auto r = alpha(c);
  EXPECT_TRUE(r.subcritical);
  EXPECT_GT(r.tail_order, 0.0);
  const RandomClusterModel rc(2, 2, 0.5, 2.0);
  EXPECT_GT(alpha(rc).alpha, 0.0);
}

TEST(Generations, FreeSingleIndividualOffspring) {
  const ToyModel m = toy_hardcore({{"a", 0.1}}, {});
  const Window w = SiteWindow{{0}};
  const RandomStream root(3);
  std::vector<std::vector<double>> mass;
  for (std::uint64_t i = 0; i < 100000; ++i) {
    RandomStream s = root.derive(i);
    const auto r = build_clan(m, w, s, Limits{});
    std::vector<double> per;
    for (const auto& g : clan_generations(r.clan, m, w)) {
      per.push_back(static_cast<double>(g.size()));
    }
    mass.push_back(per);
  }
  const DecayReport d = generation_decay_check(mass, 0.1, 0.1, 3);
  EXPECT_TRUE(d.ok) << d.text();
  EXPECT_TRUE(generation_decay_check({}, 0.5, 1.0, 4).ok);
}

TEST(Generations, ToyRatiosBelowAlpha) {
  const ToyModel m = toy_hardcore({{"a", 0.4}, {"b", 0.4}}, {{"a", "b"}});
  const Window w = SiteWindow{{0, 1}};
  const RandomStream root(4);
  const int n = 100000;
  std::vector<std::vector<double>> mass;
  for (int i = 0; i < n; ++i) {
    RandomStream s = root.derive(static_cast<std::uint64_t>(i));
    const auto r = build_clan(m, w, s, Limits{});
    std::vector<double> per;
    for (const auto& g : clan_generations(r.clan, m, w)) {
      per.push_back(static_cast<double>(g.size()));
    }
    mass.push_back(per);
  }
  const DecayReport d = generation_decay_check(mass, 0.8, 0.8, 7);
  EXPECT_TRUE(d.ok) << d.text();
  for (int k = 0; k + 1 < 6; ++k) {
    const auto& a = d.rows[static_cast<std::size_t>(k)];
    const auto& b = d.rows[static_cast<std::size_t>(k + 1)];
    const double ratio = b.mean / a.mean;
    const double se = ratio * std::hypot(a.se / a.mean, b.se / b.mean);
    EXPECT_LE(ratio, 0.8 + 3.0 * se) << k;
  }
}

TEST(Bias, BoundArithmetic) {
  EXPECT_EQ(bias_bound(0.0), 0.0);
  EXPECT_NEAR(bias_bound(0.01), 0.0101010101010101, 1e-12);
  EXPECT_DOUBLE_EQ(bias_bound(0.5), 1.0);
  EXPECT_THROW(bias_bound(1.0), Error);
  double prev_slope = 0.0;
  for (double p = 0.0; p < 0.95; p += 0.05) {
    const double slope = (bias_bound(p + 0.01) - bias_bound(p)) / 0.01;
    EXPECT_GE(slope, prev_slope);
    prev_slope = slope;
  }
}

TEST(Ledger, SummaryWithoutTruncation) {
  BiasLedger ledger;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    BuildStats s;
    s.depth = 0.1 * static_cast<double>(i % 7);
    s.cylinders = i % 3;
    s.uniforms = 3 * (i % 3) + 1;
    ledger.record(999 - i, s);
  }
  EXPECT_EQ(ledger.size(), 1000u);
  const auto snap = ledger.snapshot();
  for (std::size_t i = 0; i < snap.size(); ++i) {
    EXPECT_EQ(snap[i].index, i);
  }
  const auto sum = bias_ledger_summary(ledger, 10.0, 0.8);
  EXPECT_EQ(sum.p_exceed, 0.0);
  EXPECT_EQ(sum.bias, 0.0);
}

TEST(Ledger, TailFitRecoversGeometricSlope) {
  std::vector<int> values;
  RandomStream s(1);
  for (int i = 0; i < 100000; ++i) {
    int k = 0;
    while (s.next_uniform() < 0.7) {
      ++k;
    }
    values.push_back(k);
  }
  const TailFit f = fit_log_tail(values);
  ASSERT_TRUE(f.available);
  EXPECT_NEAR(f.slope, std::log(0.7), 4.0 * f.se + 0.02);
  EXPECT_FALSE(fit_log_tail({1, 2, 3}).available);
}

TEST(Ledger, ContourBasisSizeTailDecreases) {
  const ContourModel m(2.0, 10);
  const Window w = BoxWindow{Eigen::AlignedBox2d(Eigen::Vector2d(0, 0), Eigen::Vector2d(10, 10))};
  const WindowFamily family = window_family(m, w);
  const RandomStream root(6);
  std::vector<double> exceed(3, 0.0);
  for (std::uint64_t i = 0; i < 20000; ++i) {
    RandomStream s = root.derive(i);
    const auto r = build_clan(m, w, s, Limits{}, {}, &family);
    for (int j = 0; j < 3; ++j) {
      exceed[static_cast<std::size_t>(j)] += r.stats.max_basis_size >= 6.0 + 2.0 * j ? 1.0 : 0.0;
    }
  }
  EXPECT_GT(exceed[0], exceed[1]);
  EXPECT_GT(exceed[1], exceed[2]);
}
