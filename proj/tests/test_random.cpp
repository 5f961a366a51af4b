#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "clansim/error.hpp"
#include "clansim/random.hpp"

using namespace clansim;

TEST(RandomStream, DeriveIsDeterministic) {
  const RandomStream root(42);
  RandomStream a = root.derive(0);
  RandomStream b = root.derive(0);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(a.next_bits(), b.next_bits());
  }
  RandomStream c = root.derive(1);
  RandomStream d = root.derive(0);
  EXPECT_NE(c.next_uniform(), d.next_uniform());
  EXPECT_EQ(root.counter(), 0u);
}

TEST(RandomStream, NestedPathsDiffer) {
  const RandomStream root(7);
  EXPECT_NE(root.derive(1).derive(2).next_bits(), root.derive(2).derive(1).next_bits());
  EXPECT_NE(RandomStream(1).derive(0).next_bits(), RandomStream(2).derive(0).next_bits());
}

TEST(RandomStream, CounterAdvancesByOne) {
  RandomStream s(3);
  for (int i = 0; i < 17; ++i) {
    s.next_uniform();
  }
  EXPECT_EQ(s.counter(), 17u);
  s.next_exponential(2.0);
  EXPECT_EQ(s.counter(), 18u);
}

TEST(RandomStream, UniformMeanAndKolmogorovSmirnov) {
  RandomStream s(11);
  const int n = 100000;
  std::vector<double> u(n);
  double sum = 0.0;
  for (auto& x : u) {
    x = s.next_uniform();
    ASSERT_GE(x, 0.0);
    ASSERT_LT(x, 1.0);
    sum += x;
  }
  EXPECT_NEAR(sum / n, 0.5, 0.003);
  std::sort(u.begin(), u.end());
  double d = 0.0;
  for (int i = 0; i < n; ++i) {
    d = std::max({d, (i + 1.0) / n - u[i], u[i] - static_cast<double>(i) / n});
  }
  // Asymptotic 1% critical value.
  EXPECT_LT(d, 1.6276 / std::sqrt(static_cast<double>(n)));
}

TEST(RandomStream, SiblingStreamsUncorrelated) {
  const RandomStream root(5);
  RandomStream a = root.derive(0);
  RandomStream b = root.derive(1);
  const int n = 100000;
  double sab = 0.0;
  for (int i = 0; i < n; ++i) {
    sab += (a.next_uniform() - 0.5) * (b.next_uniform() - 0.5);
  }
  const double corr = sab / n * 12.0;
  EXPECT_LT(std::abs(corr), 4.0 / std::sqrt(static_cast<double>(n)));
}

TEST(Exponential, InversionAndMean) {
  EXPECT_DOUBLE_EQ(exponential_from_uniform(1.0 - std::exp(-2.0), 2.0), 1.0);
  EXPECT_THROW(exponential_from_uniform(0.5, 0.0), Error);
  RandomStream s(9);
  EXPECT_THROW(s.next_exponential(-1.0), Error);
  double sum = 0.0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) {
    sum += s.next_exponential(1.0);
  }
  EXPECT_NEAR(sum / n, 1.0, 0.005);
}

TEST(FirstEvent, ClosedForm) {
  EXPECT_NEAR(first_event_from_uniform(0.5, 1.0, 0.0), -std::log(1.0 - std::log(2.0)), 1e-12);
  EXPECT_NEAR(first_event_from_uniform(0.5, 1.0, 0.0), 1.1814, 1e-4);
  EXPECT_EQ(first_event_from_uniform(std::exp(-1.0) * 0.999, 1.0, 0.0), kInfinity);
  EXPECT_EQ(first_event_from_uniform(0.3, 1.0, 0.0), kInfinity);
  RandomStream s(1);
  EXPECT_EQ(s.sample_first_event(0.0, 0.0), kInfinity);
}

TEST(FirstEvent, ParameterizationsAgree) {
  for (double lower : {0.0, 0.5, 3.0}) {
    for (double mass : {0.3, 2.0, 10.0}) {
      for (double u : {0.9, 0.99, 0.999}) {
        const double a = first_event_from_uniform(u, mass, lower);
        const double b = first_event_after_from_uniform(u, mass * std::exp(-lower), lower);
        if (std::isinf(a)) {
          EXPECT_TRUE(std::isinf(b));
        } else {
          EXPECT_NEAR(a, b, 1e-9);
          EXPECT_GT(a, lower);
        }
      }
    }
  }
}

TEST(FirstEvent, FiniteProbabilityMatchesSurvival) {
  RandomStream s(21);
  const int n = 100000;
  for (double mass : {0.1, 1.0, 4.0}) {
    for (double lower : {0.0, 1.0}) {
      int finite = 0;
      for (int i = 0; i < n; ++i) {
        finite += std::isfinite(s.sample_first_event(mass, lower)) ? 1 : 0;
      }
      const double p = 1.0 - std::exp(-mass * std::exp(-lower));
      const double se = std::sqrt(p * (1.0 - p) / n);
      EXPECT_NEAR(static_cast<double>(finite) / n, p, 3.5 * se) << mass << " " << lower;
    }
  }
}

TEST(FirstEvent, MatchesThinnedSimulation) {
  // Thinning of rate mass*e^{-t} on (0, 8) against the inversion's CDF at t = 1.
  RandomStream s(33);
  const double mass = 1.0;
  const int n = 50000;
  int thin_before = 0;
  int inv_before = 0;
  for (int i = 0; i < n; ++i) {
    double t = 0.0;
    while (true) {
      t += s.next_exponential(mass);
      if (t > 8.0) {
        break;
      }
      if (s.next_uniform() < std::exp(-t)) {
        break;
      }
    }
    thin_before += t <= 1.0 ? 1 : 0;
    inv_before += s.sample_first_event(mass, 0.0) <= 1.0 ? 1 : 0;
  }
  const double p = 1.0 - std::exp(-mass * (1.0 - std::exp(-1.0)));
  const double se = std::sqrt(p * (1.0 - p) / n);
  EXPECT_NEAR(static_cast<double>(thin_before) / n, p, 4.0 * se);
  EXPECT_NEAR(static_cast<double>(inv_before) / n, p, 4.0 * se);
}
