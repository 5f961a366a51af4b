#include <cmath>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "clansim/clan.hpp"
#include "clansim/cleaner.hpp"
#include "clansim/continuous_models.hpp"
#include "clansim/contours.hpp"
#include "clansim/error.hpp"
#include "clansim/finite_volume.hpp"
#include "clansim/oracle.hpp"
#include "clansim/random_cluster.hpp"
#include "clansim/sampler.hpp"
#include "clansim/toy.hpp"

using namespace clansim;

namespace {

const ToyModel& pair_model() {
  static const ToyModel m = toy_hardcore({{"a", 0.5}, {"b", 0.5}}, {{"a", "b"}});
  return m;
}

Cylinder cylinder(const Individual& g, double birth, double life) {
  Cylinder c;
  c.basis = g;
  c.birth = birth;
  c.lifetime = life;
  return c;
}

}  // namespace

TEST(PotentialBases, WindowAndIncompatibilityClauses) {
  const ToyModel m = toy_hardcore({{"a", 0.5}, {"b", 0.5}}, {{"a", "b"}});
  const Window only_a = SiteWindow{{0}};
  Clan h;
  EXPECT_EQ(potential_bases(h, only_a, m).members.size(), 1u);
  h.cylinders.push_back(cylinder(m.site("a"), -1.0, 2.0));
  EXPECT_EQ(potential_bases(h, only_a, m).members.size(), 2u);
  EXPECT_TRUE(in_potential_bases(h, only_a, m, m.site("b")));
}

TEST(PotentialBases, TiIsEarliestIncompatibleBirth) {
  const ToyModel m = toy_hardcore({{"a", 0.5}, {"b", 0.5}, {"c", 0.5}}, {{"a", "b"}});
  const Window wa = SiteWindow{{0}};
  Clan h;
  EXPECT_EQ(ti(h, wa, m, m.site("a")), 0.0);
  h.cylinders.push_back(cylinder(m.site("a"), -2.0, 3.0));
  EXPECT_EQ(ti(h, wa, m, m.site("b")), -2.0);
  h.cylinders.push_back(cylinder(m.site("a"), -5.0, 4.0));
  EXPECT_EQ(ti(h, wa, m, m.site("b")), -5.0);
  EXPECT_THROW(ti(h, wa, m, m.site("c")), Error);
}

TEST(BuildClan, EmptyWindowGivesEmptyClan) {
  RandomStream s(1);
  const auto r = build_clan(pair_model(), SiteWindow{{}}, s, Limits{});
  EXPECT_TRUE(r.clan.empty());
  EXPECT_EQ(r.stats.depth, 0.0);
  EXPECT_EQ(r.stats.generations, 0);
}

TEST(BuildClan, RootsArePoissonForSingleSite) {
  const ToyModel m = toy_hardcore({{"a", 0.1}}, {});
  const Window w = SiteWindow{{0}};
  const RandomStream root(5);
  const int n = 100000;
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    RandomStream s = root.derive(static_cast<std::uint64_t>(i));
    const auto r = build_clan(m, w, s, Limits{});
    for (const auto& c : r.clan.cylinders) {
      total += c.alive_at(0.0) ? 1.0 : 0.0;
    }
  }
  EXPECT_NEAR(total / n, 0.1, 0.003);
}

TEST(BuildClan, AncestorPropertyAndGenerationPartition) {
  const ContourModel contours(1.5, 8);
  const RandomClusterModel rc(2, 2, 0.5, 2.0);
  const LossNetworkModel loss(0.3, LengthLaw::uniform(1.0), 2);
  const AreaModel area(0.1, 0.8, GrainGeometry::disc(0.5));
  const StraussModel strauss(0.15, -0.7, false, 1.0, 1.0);
  struct Case {
    const Model* m;
    Window w;
  };
  const std::vector<Case> cases{
      {&pair_model(), SiteWindow{{0, 1}}},
      {&contours, BoxWindow{Eigen::AlignedBox2d(Eigen::Vector2d(0, 0), Eigen::Vector2d(3, 3))}},
      {&rc, WholeWindow{}},
      {&loss, IntervalWindow{0.0, 2.0}},
      {&area, BoxWindow{Eigen::AlignedBox2d(Eigen::Vector2d(0, 0), Eigen::Vector2d(2, 2))}},
      {&strauss, BoxWindow{Eigen::AlignedBox2d(Eigen::Vector2d(0, 0), Eigen::Vector2d(2, 2))}},
  };
  const RandomStream root(99);
  for (const auto& c : cases) {
    for (std::uint64_t i = 0; i < 300; ++i) {
      RandomStream s = root.derive(i);
      const auto r = build_clan(*c.m, c.w, s, Limits{});
      ASSERT_FALSE(r.truncated()) << c.m->id();
      EXPECT_NO_THROW(check_ancestor_property(r.clan, *c.m, c.w));
      const auto gens = clan_generations(r.clan, *c.m, c.w);
      std::size_t total = 0;
      for (const auto& g : gens) {
        total += g.size();
      }
      EXPECT_EQ(total, r.clan.size()) << c.m->id();
      EXPECT_EQ(static_cast<int>(gens.size()), r.stats.generations);
      for (std::size_t k = 1; k < r.clan.size(); ++k) {
        EXPECT_LE(r.clan.cylinders[k].birth, r.clan.cylinders[k - 1].birth);
      }
      for (const auto& cy : r.clan.cylinders) {
        EXPECT_GE(cy.lifetime, 0.0);
      }
    }
  }
}

TEST(BuildClan, TruncationKeepsPartialClan) {
  const ToyModel m = toy_hardcore({{"a", 3.0}, {"b", 3.0}}, {{"a", "b"}});
  RandomStream s(3);
  Limits tight;
  tight.max_size = 3;
  const auto r = build_clan(m, SiteWindow{{0, 1}}, s, tight);
  ASSERT_TRUE(r.truncated());
  EXPECT_EQ(r.stats.truncation, Truncation::Size);
  EXPECT_TRUE(r.clan.truncated);
  RandomStream s2(3);
  EXPECT_THROW(clean(r.clan, m, s2), Error);
  RandomStream s3(3);
  EXPECT_TRUE(clean(r.clan, m, s3, true).biased);
}

TEST(BuildClan, AlwaysResampleGivesSameLaw) {
  const Window w = SiteWindow{{0, 1}};
  const ExactLaw law = enumerate_exact(pair_model(), w);
  const RandomStream root(17);
  Histogram cached;
  Histogram fresh;
  const int n = 40000;
  for (int i = 0; i < n; ++i) {
    for (bool always : {false, true}) {
      RandomStream s = root.derive(static_cast<std::uint64_t>(i)).derive(always ? 1 : 0);
      const auto r = build_clan(pair_model(), w, s, Limits{}, BuildOptions{always});
      const KeptSet k = clean(r.clan, pair_model(), s);
      ++(always ? fresh : cached)[configuration_key(project(k, r.clan, pair_model(), w))];
    }
  }
  EXPECT_LT(tv_distance(cached, law), 0.015);
  EXPECT_LT(tv_distance(fresh, law), 0.015);
  EXPECT_GT(chisq_two_sample(cached, fresh).p_value, 0.001);
}

TEST(Clean, HandExamples) {
  const ToyModel& m = pair_model();
  Clan single;
  single.cylinders.push_back(cylinder(m.site("a"), -1.0, 2.0));
  RandomStream s(1);
  EXPECT_EQ(clean(single, m, s).kept_count(), 1u);

  Clan pair;
  pair.cylinders.push_back(cylinder(m.site("b"), -1.0, 2.0));
  pair.cylinders.push_back(cylinder(m.site("a"), -2.0, 3.0));
  RandomStream s2(1);
  const KeptSet k = clean(pair, m, s2);
  EXPECT_TRUE(k.kept[1]);
  EXPECT_FALSE(k.kept[0]);
  EXPECT_EQ(k.verdicts.back().acceptance, 0.0);
  const Configuration c = project(k, pair, m, SiteWindow{{0, 1}});
  ASSERT_EQ(c.size(), 1u);
  EXPECT_TRUE(c.items[0] == Individual{m.site("a")});

  const ToyModel free = toy_free({{"a", 2.0}});
  RandomStream s3(4);
  const auto r = build_clan(free, SiteWindow{{0}}, s3, Limits{});
  EXPECT_EQ(clean(r.clan, free, s3).kept_count(), r.clan.size());
  EXPECT_TRUE(project(KeptSet{}, Clan{}, m, SiteWindow{{0}}).empty());
}

TEST(Clean, DeterministicGivenStream) {
  const ContourModel m(1.0, 6);
  const Window w = BoxWindow{Eigen::AlignedBox2d(Eigen::Vector2d(0, 0), Eigen::Vector2d(2, 2))};
  RandomStream s(12);
  const auto r = build_clan(m, w, s, Limits{});
  RandomStream a(50);
  RandomStream b(50);
  EXPECT_EQ(verdict_text(clean(r.clan, m, a)), verdict_text(clean(r.clan, m, b)));
}

TEST(Clean, KeptCylindersAreCompatibleWhenAlive) {
  const ContourModel m(1.0, 8);
  const Window w = BoxWindow{Eigen::AlignedBox2d(Eigen::Vector2d(0, 0), Eigen::Vector2d(3, 3))};
  const RandomStream root(31);
  for (std::uint64_t i = 0; i < 200; ++i) {
    RandomStream s = root.derive(i);
    const auto r = build_clan(m, w, s, Limits{});
    const KeptSet k = clean(r.clan, m, s);
    const auto& cy = r.clan.cylinders;
    for (std::size_t x = 0; x < cy.size(); ++x) {
      for (std::size_t y = x + 1; y < cy.size(); ++y) {
        if (!k.kept[x] || !k.kept[y]) {
          continue;
        }
        const double t = std::max(cy[x].birth, cy[y].birth);
        if (cy[x].alive_at(t) && cy[y].alive_at(t)) {
          EXPECT_FALSE(m.incompatible(cy[x].basis, cy[y].basis));
        }
      }
    }
  }
}

TEST(Clean, SingleSiteOccupation) {
  const ToyModel m = toy_hardcore({{"a", 0.5}}, {});
  const auto samples = sample_many(m, SiteWindow{{0}}, 8, 100000, Limits{}, false, 1);
  double occupied = 0.0;
  for (const auto& s : samples) {
    occupied += static_cast<double>(s.configuration.size());
  }
  const double p = 1.0 / 3.0;
  EXPECT_NEAR(occupied / 1e5, p, 3.0 * std::sqrt(p * (1 - p) / 1e5));
}

TEST(FiniteVolume, ConstantWithoutEvents) {
  const ToyModel& m = pair_model();
  RandomStream s(2);
  const Trajectory t = simulate_forward(m, SiteWindow{{}}, Configuration{}, 0.0, 5.0, s);
  EXPECT_TRUE(t.events.empty());
  EXPECT_TRUE(t.final_configuration().empty());
}

TEST(FiniteVolume, HardCorePairNeverCoexists) {
  const ToyModel& m = pair_model();
  RandomStream s(6);
  const Trajectory t = simulate_forward(m, SiteWindow{{0, 1}}, Configuration{}, 0.0, 200.0, s);
  for (const auto& e : t.events) {
    EXPECT_LE(t.at(e.time).size(), 1u);
  }
}

TEST(FiniteVolume, FreeCountsArePoisson) {
  const ToyModel m = toy_free({{"a", 1.0}, {"b", 0.5}});
  const RandomStream root(13);
  const int n = 10000;
  std::vector<double> observed(8, 0.0);
  for (int i = 0; i < n; ++i) {
    RandomStream s = root.derive(static_cast<std::uint64_t>(i));
    const auto t = simulate_forward(m, SiteWindow{{0, 1}}, Configuration{}, 0.0, 30.0, s);
    observed[std::min<std::size_t>(t.final_configuration().size(), 7)] += 1.0;
  }
  EXPECT_GT(chisq_gof(observed, poisson_cells(1.5, 8)).p_value, 0.01);
}

TEST(FiniteVolume, TwoSweepMatchesForward) {
  const ContourModel contours(1.0, 8);
  const RandomClusterModel rc(2, 2, 0.4, 1.5);
  const ToyModel toy = toy_hardcore({{"a", 0.8}, {"b", 0.3}, {"c", 1.1}}, {{"a", "b"}, {"b", "c"}});
  struct Case {
    const Model* m;
    Window box;
  };
  const std::vector<Case> cases{
      {&toy, SiteWindow{{0, 1, 2}}},
      {&contours, BoxWindow{Eigen::AlignedBox2d(Eigen::Vector2d(0, 0), Eigen::Vector2d(4, 4))}},
      {&rc, WholeWindow{}},
  };
  const RandomStream root(44);
  for (const auto& c : cases) {
    for (std::uint64_t i = 0; i < 40; ++i) {
      RandomStream a = root.derive(i);
      RandomStream b = root.derive(i);
      const double t1 = 1.0 + 10.0 * a.derive(99).next_uniform();
      const Trajectory f = simulate_forward(*c.m, c.box, Configuration{}, 0.0, t1, a);
      const Trajectory g = two_sweep(*c.m, c.box, Configuration{}, 0.0, t1, b);
      EXPECT_EQ(configuration_key(f.final_configuration()), configuration_key(g.final_configuration()));
      EXPECT_EQ(f.event_text(), g.event_text());
    }
  }
}

TEST(Stationary, ToyPairMatchesEnumeration) {
  const ToyModel& m = pair_model();
  const Window w = SiteWindow{{0, 1}};
  const RandomStream root(70);
  Histogram h;
  for (std::uint64_t i = 0; i < 50000; ++i) {
    RandomStream s = root.derive(i);
    ++h[configuration_key(stationary_window(m, w, 0.0, s).configuration)];
  }
  EXPECT_LT(tv_distance(h, enumerate_exact(m, w)), 0.01);
}

TEST(Stationary, PoissonVariate) {
  RandomStream s(3);
  for (double mean : {0.5, 12.0, 75.0}) {
    double sum = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
      sum += static_cast<double>(poisson_variate(mean, s));
    }
    EXPECT_NEAR(sum / n, mean, 4.0 * std::sqrt(mean / n));
  }
}

TEST(Sampler, ThreadCountDoesNotChangeOutput) {
  const ContourModel m(1.5, 8);
  const Window w = BoxWindow{Eigen::AlignedBox2d(Eigen::Vector2d(0, 0), Eigen::Vector2d(4, 4))};
  const auto serial = sample_many(m, w, 5, 200, Limits{}, false, 1);
  const auto parallel = sample_many(m, w, 5, 200, Limits{}, false, 4);
  ASSERT_EQ(serial.size(), parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    EXPECT_EQ(serial[i].index, i);
    EXPECT_EQ(configuration_key(serial[i].configuration), configuration_key(parallel[i].configuration));
    EXPECT_EQ(serial[i].stats.depth, parallel[i].stats.depth);
  }
}

TEST(Sampler, RunIndexedRethrows) {
  const std::function<int(std::uint64_t)> job = [](std::uint64_t i) {
    if (i == 7) {
      throw Error(ErrorKind::Io, "boom");
    }
    return static_cast<int>(i);
  };
  EXPECT_THROW(run_indexed<int>(20, 3, job), Error);
}
