#ifndef CLANSIM_ORACLE_HPP
#define CLANSIM_ORACLE_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "clansim/model.hpp"

namespace clansim {

/// Canonical text key of a configuration ("{}" when empty).
std::string configuration_key(Configuration c);

/// Finite law over configurations, sorted by key.
struct ExactLaw {
  std::vector<Configuration> configurations;
  std::vector<std::string> keys;
  std::vector<double> probabilities;
  double normalization = 0.0;       // Z
  double truncated_mass = 0.0;      // Poisson mass beyond the multiplicity cap

  std::size_t size() const { return keys.size(); }
  /// Probability of a key, 0 when outside the support.
  double probability(const std::string& key) const;
};

inline constexpr std::size_t kMaxExactStates = std::size_t{1} << 20;

/// Exhaustive law of a product-form discrete model, marginalized to `window`.
///
/// Enumerates the whole family when it is finite, otherwise the individuals
/// contained in `window`. Self-incompatible individuals appear at most once;
/// others up to `multiplicity_cap` times with Poisson weights w^n / n!.
/// Throws Error(TooLarge) beyond kMaxExactStates configurations.
ExactLaw enumerate_exact(const DiscreteModel& m, const Window& window, int multiplicity_cap = 6);

/// Inverse-CDF draw.
Configuration exact_sample(const ExactLaw& law, RandomStream& stream);

using Histogram = std::map<std::string, std::uint64_t>;

/// (1/2) sum |p_hat - p|, counting empirical mass outside the support.
double tv_distance(const Histogram& empirical, const ExactLaw& law);

struct ChiSquare {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  int cells = 0;  // after pooling
};

/// Pearson goodness of fit. Cells with expected count below 5 are pooled.
/// Throws Error(InvalidParameter) when every observation is zero.
ChiSquare chisq_gof(const std::vector<double>& observed, const std::vector<double>& expected_prob);

/// Two-sample homogeneity test on histograms over arbitrary keys; cells with
/// expected count below 5 in either sample are pooled.
ChiSquare chisq_two_sample(const Histogram& a, const Histogram& b);

/// P(X = k) for k < cells - 1 and P(X >= cells - 1) in the last cell.
std::vector<double> poisson_cells(double mean, int cells);

struct CompareReport {
  std::size_t n = 0;
  double tv = 0.0;
  ChiSquare chisq;
  double level = 0.01;
  std::size_t outside_support = 0;
  bool pass = false;

  std::string text() const;
};

/// Draws sampler(i) for i < n and tests against the law. Fails when any draw
/// falls outside the support. Throws Error(InvalidParameter) for n < 1000.
CompareReport compare(const std::function<Configuration(std::uint64_t)>& sampler,
                      const ExactLaw& law, std::size_t n, double level);

/// Same verdict from an existing histogram.
CompareReport compare_histogram(const Histogram& h, const ExactLaw& law, double level);

}  // namespace clansim

#endif  // CLANSIM_ORACLE_HPP
