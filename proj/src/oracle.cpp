#include "clansim/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <boost/math/distributions/chi_squared.hpp>

#include "clansim/error.hpp"

namespace clansim {
namespace {

struct Enumerator {
  const DiscreteModel& model;
  const std::vector<Individual>& family;
  std::vector<int> caps;
  std::vector<Individual> chosen;
  double weight = 1.0;
  std::vector<std::pair<Configuration, double>> out;

  void walk(std::size_t i) {
    if (i == family.size()) {
      if (out.size() >= kMaxExactStates) {
        throw Error(ErrorKind::TooLarge, "exact enumeration exceeds " +
                                             std::to_string(kMaxExactStates) + " configurations");
      }
      out.emplace_back(Configuration{chosen}, weight);
      return;
    }
    walk(i + 1);
    const auto& g = family[i];
    for (const auto& t : chosen) {
      if (model.incompatible(g, t)) {
        return;
      }
    }
    const double w = model.weight(g);
    const double saved = weight;
    for (int n = 1; n <= caps[i]; ++n) {
      chosen.push_back(g);
      weight *= w / n;
      walk(i + 1);
    }
    chosen.resize(chosen.size() - static_cast<std::size_t>(caps[i]));
    weight = saved;
  }
};

double poisson_tail_above(double mean, int cap) {
  double p = std::exp(-mean);
  double cdf = p;
  for (int k = 1; k <= cap; ++k) {
    p *= mean / k;
    cdf += p;
  }
  return std::max(0.0, 1.0 - cdf);
}

ChiSquare pearson(const std::vector<double>& observed, const std::vector<double>& expected) {
  // Pool small cells, smallest expectation first, until each pooled cell has >= 5.
  std::vector<std::size_t> order(observed.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return expected[a] < expected[b]; });
  std::vector<double> obs;
  std::vector<double> exp;
  double pool_o = 0.0;
  double pool_e = 0.0;
  for (std::size_t i : order) {
    if (pool_e > 0.0 || expected[i] < 5.0) {
      pool_o += observed[i];
      pool_e += expected[i];
      if (pool_e >= 5.0) {
        obs.push_back(pool_o);
        exp.push_back(pool_e);
        pool_o = pool_e = 0.0;
      }
    } else {
      obs.push_back(observed[i]);
      exp.push_back(expected[i]);
    }
  }
  if (pool_e > 0.0 || pool_o > 0.0) {
    if (exp.empty()) {
      obs.push_back(pool_o);
      exp.push_back(pool_e);
    } else {
      const auto smallest = static_cast<std::size_t>(
          std::min_element(exp.begin(), exp.end()) - exp.begin());
      obs[smallest] += pool_o;
      exp[smallest] += pool_e;
    }
  }
  ChiSquare r;
  r.cells = static_cast<int>(obs.size());
  for (std::size_t i = 0; i < obs.size(); ++i) {
    if (exp[i] > 0.0) {
      const double d = obs[i] - exp[i];
      r.statistic += d * d / exp[i];
    } else if (obs[i] > 0.0) {
      r.statistic = kInfinity;
    }
  }
  return r;
}

}  // namespace

std::string configuration_key(Configuration c) {
  if (c.empty()) {
    return "{}";
  }
  c.canonicalize();
  std::string key;
  for (const auto& g : c.items) {
    if (!key.empty()) {
      key += "; ";
    }
    key += individual_text(g);
  }
  return key;
}

double ExactLaw::probability(const std::string& key) const {
  const auto it = std::lower_bound(keys.begin(), keys.end(), key);
  if (it == keys.end() || *it != key) {
    return 0.0;
  }
  return probabilities[static_cast<std::size_t>(it - keys.begin())];
}

ExactLaw enumerate_exact(const DiscreteModel& m, const Window& window, int multiplicity_cap) {
  if (!m.product_form()) {
    throw Error(ErrorKind::InvalidParameter, "exact enumeration needs a product-form model");
  }
  if (multiplicity_cap < 1) {
    throw Error(ErrorKind::InvalidParameter, "multiplicity cap must be at least 1");
  }
  std::vector<Individual> family;
  try {
    family = m.contained_in(WholeWindow{});
  } catch (const Error&) {
    family = m.contained_in(window);
  }
  Enumerator e{m, family, {}, {}, 1.0, {}};
  ExactLaw law;
  for (const auto& g : family) {
    const bool self = m.incompatible(g, g);
    e.caps.push_back(self ? 1 : multiplicity_cap);
    if (!self) {
      law.truncated_mass += poisson_tail_above(m.weight(g), multiplicity_cap);
    }
  }
  e.walk(0);

  std::map<std::string, std::pair<Configuration, double>> merged;
  for (auto& [config, w] : e.out) {
    Configuration marginal;
    for (const auto& g : config.items) {
      if (m.intersects(g, window)) {
        marginal.items.push_back(g);
      }
    }
    marginal.canonicalize();
    auto key = configuration_key(marginal);
    auto [it, fresh] = merged.try_emplace(std::move(key), std::move(marginal), 0.0);
    it->second.second += w;
    law.normalization += w;
  }
  for (auto& [key, entry] : merged) {
    law.keys.push_back(key);
    law.configurations.push_back(std::move(entry.first));
    law.probabilities.push_back(entry.second / law.normalization);
  }
  return law;
}

Configuration exact_sample(const ExactLaw& law, RandomStream& stream) {
  if (law.size() == 0) {
    throw Error(ErrorKind::ContractViolation, "sampling from an empty law");
  }
  const double u = stream.next_uniform();
  double cdf = 0.0;
  for (std::size_t i = 0; i < law.size(); ++i) {
    cdf += law.probabilities[i];
    if (u < cdf) {
      return law.configurations[i];
    }
  }
  return law.configurations.back();
}

double tv_distance(const Histogram& empirical, const ExactLaw& law) {
  double n = 0.0;
  for (const auto& [key, count] : empirical) {
    n += static_cast<double>(count);
  }
  if (n == 0.0) {
    return 1.0;
  }
  double total = 0.0;
  for (std::size_t i = 0; i < law.size(); ++i) {
    const auto it = empirical.find(law.keys[i]);
    const double p_hat = it == empirical.end() ? 0.0 : static_cast<double>(it->second) / n;
    total += std::abs(p_hat - law.probabilities[i]);
  }
  for (const auto& [key, count] : empirical) {
    if (!std::binary_search(law.keys.begin(), law.keys.end(), key)) {
      total += static_cast<double>(count) / n;
    }
  }
  return 0.5 * total;
}

ChiSquare chisq_gof(const std::vector<double>& observed, const std::vector<double>& expected_prob) {
  if (observed.size() != expected_prob.size()) {
    throw Error(ErrorKind::InvalidParameter, "observed and expected cell counts differ");
  }
  const double n = std::accumulate(observed.begin(), observed.end(), 0.0);
  if (!(n > 0.0)) {
    throw Error(ErrorKind::InvalidParameter, "chi-square test with no observations");
  }
  std::vector<double> expected(expected_prob.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    expected[i] = expected_prob[i] * n;
  }
  ChiSquare r = pearson(observed, expected);
  r.dof = r.cells - 1;
  if (r.dof < 1 || r.statistic == 0.0) {
    r.p_value = 1.0;
  } else if (!std::isfinite(r.statistic)) {
    r.p_value = 0.0;
  } else {
    r.p_value = boost::math::cdf(
        boost::math::complement(boost::math::chi_squared(r.dof), r.statistic));
  }
  return r;
}

ChiSquare chisq_two_sample(const Histogram& a, const Histogram& b) {
  double na = 0.0;
  double nb = 0.0;
  std::map<std::string, std::pair<double, double>> cells;
  for (const auto& [k, c] : a) {
    cells[k].first += static_cast<double>(c);
    na += static_cast<double>(c);
  }
  for (const auto& [k, c] : b) {
    cells[k].second += static_cast<double>(c);
    nb += static_cast<double>(c);
  }
  if (!(na > 0.0) || !(nb > 0.0)) {
    throw Error(ErrorKind::InvalidParameter, "two-sample test needs observations in both samples");
  }
  // Pool cells whose smaller expected count is below 5.
  const double n = na + nb;
  std::vector<std::pair<double, double>> pooled;
  std::pair<double, double> pool{0.0, 0.0};
  for (const auto& [k, c] : cells) {
    const double total = c.first + c.second;
    if (std::min(total * na / n, total * nb / n) < 5.0) {
      pool.first += c.first;
      pool.second += c.second;
      const double pt = pool.first + pool.second;
      if (std::min(pt * na / n, pt * nb / n) >= 5.0) {
        pooled.push_back(pool);
        pool = {0.0, 0.0};
      }
    } else {
      pooled.push_back(c);
    }
  }
  if (pool.first + pool.second > 0.0) {
    if (pooled.empty()) {
      pooled.push_back(pool);
    } else {
      pooled.back().first += pool.first;
      pooled.back().second += pool.second;
    }
  }
  ChiSquare r;
  r.cells = static_cast<int>(pooled.size());
  for (const auto& [ca, cb] : pooled) {
    const double total = ca + cb;
    const double ea = total * na / n;
    const double eb = total * nb / n;
    r.statistic += (ca - ea) * (ca - ea) / ea + (cb - eb) * (cb - eb) / eb;
  }
  r.dof = r.cells - 1;
  if (r.dof < 1 || r.statistic == 0.0) {
    r.p_value = 1.0;
  } else {
    r.p_value = boost::math::cdf(
        boost::math::complement(boost::math::chi_squared(r.dof), r.statistic));
  }
  return r;
}

std::vector<double> poisson_cells(double mean, int cells) {
  if (cells < 1) {
    throw Error(ErrorKind::InvalidParameter, "need at least one cell");
  }
  std::vector<double> out(static_cast<std::size_t>(cells), 0.0);
  double p = std::exp(-mean);
  double cdf = 0.0;
  for (int k = 0; k + 1 < cells; ++k) {
    out[static_cast<std::size_t>(k)] = p;
    cdf += p;
    p *= mean / (k + 1);
  }
  out.back() = std::max(0.0, 1.0 - cdf);
  return out;
}

CompareReport compare_histogram(const Histogram& h, const ExactLaw& law, double level) {
  CompareReport r;
  r.level = level;
  std::vector<double> observed(law.size(), 0.0);
  for (const auto& [key, count] : h) {
    r.n += count;
    const auto it = std::lower_bound(law.keys.begin(), law.keys.end(), key);
    if (it == law.keys.end() || *it != key) {
      r.outside_support += count;
    } else {
      observed[static_cast<std::size_t>(it - law.keys.begin())] += static_cast<double>(count);
    }
  }
  r.tv = tv_distance(h, law);
  if (r.n > r.outside_support) {
    r.chisq = chisq_gof(observed, law.probabilities);
  } else {
    r.chisq.p_value = 0.0;
  }
  r.pass = r.outside_support == 0 && r.chisq.p_value > level;
  return r;
}

CompareReport compare(const std::function<Configuration(std::uint64_t)>& sampler,
                      const ExactLaw& law, std::size_t n, double level) {
  if (n < 1000) {
    throw Error(ErrorKind::InvalidParameter, "compare needs at least 1000 draws");
  }
  Histogram h;
  for (std::uint64_t i = 0; i < n; ++i) {
    ++h[configuration_key(sampler(i))];
  }
  return compare_histogram(h, law, level);
}

std::string CompareReport::text() const {
  std::ostringstream out;
  out.precision(8);
  out << "n = " << n << ", TV = " << tv << ", chi-square = " << chisq.statistic << " on "
      << chisq.dof << " dof, p = " << chisq.p_value;
  if (outside_support > 0) {
    out << ", outside support = " << outside_support;
  }
  out << " -> " << (pass ? "pass" : "fail") << " at level " << level << '\n';
  return out.str();
}

}  // namespace clansim
