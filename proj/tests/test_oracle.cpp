#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "clansim/error.hpp"
#include "clansim/finite_volume.hpp"
#include "clansim/oracle.hpp"
#include "clansim/random_cluster.hpp"
#include "clansim/sampler.hpp"
#include "clansim/toy.hpp"

using namespace clansim;

TEST(Enumerate, ToyPair) {
  const ToyModel m = toy_hardcore({{"a", 0.5}, {"b", 0.5}}, {{"a", "b"}});
  const ExactLaw law = enumerate_exact(m, SiteWindow{{0, 1}});
  ASSERT_EQ(law.size(), 3u);
  EXPECT_NEAR(law.probability("{}"), 0.5, 1e-15);
  EXPECT_NEAR(law.probability("site 0"), 0.25, 1e-15);
  EXPECT_NEAR(law.probability("site 1"), 0.25, 1e-15);
  EXPECT_DOUBLE_EQ(law.normalization, 2.0);
}

TEST(Enumerate, SingleBondRandomCluster) {
  const RandomClusterModel m(2, 1, 0.5, 2.0);
  const ExactLaw law = enumerate_exact(m, WholeWindow{});
  ASSERT_EQ(law.size(), 2u);
  EXPECT_NEAR(law.probability("animal 0"), 1.0 / 3.0, 1e-15);
}

TEST(Enumerate, FreeIndividualIsTruncatedPoisson) {
  const double w = 0.7;
  const ToyModel m = toy_free({{"a", w}});
  const ExactLaw law = enumerate_exact(m, SiteWindow{{0}}, 6);
  ASSERT_EQ(law.size(), 7u);
  double tail = 0.0;
  double term = std::exp(-w);
  for (int k = 0; k <= 6; ++k) {
    tail += term;
    term *= w / (k + 1);
  }
  EXPECT_NEAR(law.probability("{}"), std::exp(-w) / tail, 1e-14);
  EXPECT_NEAR(law.truncated_mass, 1.0 - tail, 1e-14);
  double sum = 0.0;
  for (double p : law.probabilities) {
    sum += p;
  }
  EXPECT_NEAR(sum, 1.0, 1e-12);
}

TEST(Enumerate, PushforwardIdentityOnTwoByTwo) {
  const RandomClusterModel m(2, 2, 0.5, 2.0);
  const ExactLaw law = enumerate_exact(m, WholeWindow{});
  const BondGrid& grid = m.grid();
  double z = 0.0;
  std::vector<double> fk(1u << grid.bond_count());
  for (std::uint32_t open = 0; open < fk.size(); ++open) {
    fk[open] = rc_config_weight(BondConfig{open}, grid, 0.5, 2.0);
    z += fk[open];
  }
  ASSERT_EQ(law.size(), fk.size());
  for (std::uint32_t open = 0; open < fk.size(); ++open) {
    Configuration c;
    for (const auto& a : rc_project(BondConfig{open}, grid)) {
      c.items.push_back(m.animal_of(a.bonds));
    }
    EXPECT_NEAR(law.probability(configuration_key(c)), fk[open] / z, 1e-12);
  }
}

TEST(Enumerate, RefusesHugeSpaces) {
  std::vector<std::pair<std::string, double>> weights;
  for (int i = 0; i < 25; ++i) {
    weights.emplace_back("s" + std::to_string(i), 0.1);
  }
  const ToyModel m = toy_hardcore(weights, {});
  std::vector<std::uint32_t> all;
  for (std::uint32_t i = 0; i < 25; ++i) {
    all.push_back(i);
  }
  EXPECT_THROW(enumerate_exact(m, SiteWindow{all}), Error);
}

TEST(Enumerate, ContainsForwardSnapshots) {
  const ToyModel m = toy_hardcore({{"a", 0.8}, {"b", 0.6}, {"c", 1.2}}, {{"a", "b"}, {"b", "c"}});
  const Window w = SiteWindow{{0, 1, 2}};
  const ExactLaw law = enumerate_exact(m, w);
  RandomStream s(1);
  const Trajectory t = simulate_forward(m, w, Configuration{}, 0.0, 5000.0, s);
  int checked = 0;
  for (int k = 0; k < 10000; ++k) {
    const double at = 0.5 * k;
    ASSERT_GT(law.probability(configuration_key(t.at(at))), 0.0);
    ++checked;
  }
  EXPECT_EQ(checked, 10000);
}

TEST(ExactSample, Frequencies) {
  const ToyModel m = toy_hardcore({{"a", 0.5}, {"b", 0.5}}, {{"a", "b"}});
  const ExactLaw law = enumerate_exact(m, SiteWindow{{0, 1}});
  RandomStream s(2);
  Histogram h;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    ++h[configuration_key(exact_sample(law, s))];
  }
  EXPECT_NEAR(h["{}"] / 1e5, 0.5, 3.0 * std::sqrt(0.25 / n));
  EXPECT_NEAR(h["site 0"] / 1e5, 0.25, 3.0 * std::sqrt(0.1875 / n));
  EXPECT_LT(tv_distance(h, law), 0.02);
}

TEST(Statistics, TvEdgeCases) {
  const ToyModel m = toy_hardcore({{"a", 0.5}, {"b", 0.5}}, {{"a", "b"}});
  const ExactLaw law = enumerate_exact(m, SiteWindow{{0, 1}});
  EXPECT_NEAR(tv_distance({{"{}", 2}, {"site 0", 1}, {"site 1", 1}}, law), 0.0, 1e-15);
  EXPECT_NEAR(tv_distance({{"site 0; site 1", 5}}, law), 1.0, 1e-15);
}

TEST(Statistics, ChiSquareBasics) {
  const auto exact = chisq_gof({50, 25, 25}, {0.5, 0.25, 0.25});
  EXPECT_EQ(exact.statistic, 0.0);
  EXPECT_DOUBLE_EQ(exact.p_value, 1.0);
  EXPECT_THROW(chisq_gof({0, 0, 0}, {0.5, 0.25, 0.25}), Error);
}

TEST(Statistics, ChiSquareCalibrationAndPower) {
  const std::vector<double> cells = poisson_cells(1.0, 8);
  const RandomStream root(77);
  int rejected = 0;
  const int reps = 200;
  for (int r = 0; r < reps; ++r) {
    RandomStream s = root.derive(static_cast<std::uint64_t>(r));
    std::vector<double> obs(8, 0.0);
    for (int i = 0; i < 100000; ++i) {
      obs[std::min<std::size_t>(poisson_variate(1.0, s), 7)] += 1.0;
    }
    rejected += chisq_gof(obs, cells).p_value < 0.01 ? 1 : 0;
  }
  // Binomial(200, 0.01): more than 8 rejections has probability below 1e-3.
  EXPECT_LE(rejected, 8);
  RandomStream s(5);
  std::vector<double> obs(8, 0.0);
  for (int i = 0; i < 100000; ++i) {
    obs[std::min<std::size_t>(poisson_variate(1.2, s), 7)] += 1.0;
  }
  EXPECT_LT(chisq_gof(obs, cells).p_value, 1e-6);
}

TEST(Compare, PerfectSamplerPassesFreeSamplerFails) {
  const ToyModel m = toy_hardcore({{"a", 0.5}, {"b", 0.5}}, {{"a", "b"}});
  const ToyModel free = toy_free({{"a", 0.5}, {"b", 0.5}});
  const Window w = SiteWindow{{0, 1}};
  const ExactLaw law = enumerate_exact(m, w);
  const RandomStream root(8);
  const auto good = compare(
      [&](std::uint64_t i) {
        RandomStream s = root.derive(i);
        return perfect_sample(m, w, s, Limits{}, false).configuration;
      },
      law, 20000, 0.01);
  EXPECT_TRUE(good.pass) << good.text();
  const auto bad = compare(
      [&](std::uint64_t i) {
        RandomStream s = root.derive(i);
        return perfect_sample(free, w, s, Limits{}, false).configuration;
      },
      law, 20000, 0.01);
  EXPECT_FALSE(bad.pass) << bad.text();
  EXPECT_THROW(compare([](std::uint64_t) { return Configuration{}; }, law, 999, 0.01), Error);
}

TEST(Compare, TwoSampleSameLawPasses) {
  Histogram a{{"x", 5000}, {"y", 3000}, {"z", 2000}};
  Histogram b{{"x", 4950}, {"y", 3020}, {"z", 2030}};
  EXPECT_GT(chisq_two_sample(a, b).p_value, 0.01);
  Histogram c{{"x", 3000}, {"y", 5000}, {"z", 2000}};
  EXPECT_LT(chisq_two_sample(a, c).p_value, 1e-6);
}
