#include "clansim/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "clansim/continuous_models.hpp"
#include "clansim/contours.hpp"
#include "clansim/error.hpp"
#include "clansim/random_cluster.hpp"
#include "clansim/toy.hpp"

namespace clansim {
namespace {

SubcriticalityReport finish(SubcriticalityReport r) {
  r.alpha = kInfinity;
  for (const auto& b : r.bounds) {
    r.alpha = std::min(r.alpha, b.value);
  }
  r.subcritical = r.alpha < 1.0;
  return r;
}

/// sup_g (1/q(g)) sum_t q(t) m(g, t) over a finite family.
double discrete_alpha(const DiscreteModel& m, const std::vector<Individual>& family) {
  if (family.empty()) {
    return 0.0;
  }
  const Eigen::MatrixXd mm = offspring_matrix(m, family);
  Eigen::VectorXd q(static_cast<Eigen::Index>(family.size()));
  for (std::size_t i = 0; i < family.size(); ++i) {
    q[static_cast<Eigen::Index>(i)] = m.size(family[i]);
  }
  return (mm * q).cwiseQuotient(q).maxCoeff();
}

}  // namespace

Eigen::MatrixXd offspring_matrix(const DiscreteModel& m, const std::vector<Individual>& family) {
  const auto n = static_cast<Eigen::Index>(family.size());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto& g = family[static_cast<std::size_t>(i)];
      const auto& t = family[static_cast<std::size_t>(j)];
      if (m.incompatible(g, t)) {
        out(i, j) = m.weight(t);
      }
    }
  }
  return out;
}

SubcriticalityReport alpha(const Model& m) {
  SubcriticalityReport r;
  r.model = m.id();
  if (const auto* toy = dynamic_cast<const ToyModel*>(&m)) {
    r.q = "1";
    r.bounds.push_back({"sum_w_incompatible", discrete_alpha(*toy, toy->window_members(WholeWindow{}))});
    return finish(r);
  }
  if (const auto* rc = dynamic_cast<const RandomClusterModel*>(&m)) {
    r.q = "bond_count";
    r.bounds.push_back({"sum_qw_incompatible", discrete_alpha(*rc, rc->window_members(WholeWindow{}))});
    return finish(r);
  }
  if (const auto* cm = dynamic_cast<const ContourModel*>(&m)) {
    r.q = "link_count";
    double best = 0.0;
    for (std::uint32_t s = 0; s < cm->shapes().size(); ++s) {
      const Contour g{Eigen::Vector2i::Zero(), s};
      double sum = 0.0;
      for (const auto& t : cm->incompatible_with(g)) {
        sum += cm->size(t) * cm->weight(t);
      }
      best = std::max(best, sum / cm->size(g));
    }
    r.bounds.push_back({"sum_qw_incompatible", best});
    r.tail_order = std::exp(-cm->beta() * (cm->cutoff() + 1));
    return finish(r);
  }
  if (const auto* am = dynamic_cast<const AreaModel*>(&m)) {
    r.q = "1";
    r.bounds.push_back({"intensity_times_dilation", am->germ_intensity() * am->grain().dilation_content()});
    return finish(r);
  }
  if (const auto* sm = dynamic_cast<const StraussModel*>(&m)) {
    r.q = "1";
    r.bounds.push_back({"intensity_times_disc",
                        sm->germ_intensity() * std::numbers::pi * sm->radius() * sm->radius()});
    return finish(r);
  }
  if (const auto* ln = dynamic_cast<const LossNetworkModel*>(&m)) {
    r.q = "max(L,1)";
    const double rho1 = ln->law().first_moment();
    const double rho2 = ln->law().second_moment();
    r.bounds.push_back({"kappa(rho2+rho1+1)", ln->kappa() * (rho2 + rho1 + 1.0)});
    r.bounds.push_back({"kappa(sqrt(rho2)+rho1)", ln->kappa() * (std::sqrt(rho2) + rho1)});
    return finish(r);
  }
  throw Error(ErrorKind::InvalidParameter, "no subcriticality bound known for model " + m.id());
}

std::string SubcriticalityReport::text() const {
  std::ostringstream out;
  out.precision(10);
  out << "model " << model << " (q = " << q << ")\n";
  for (const auto& b : bounds) {
    out << "  bound " << b.name << " = " << b.value << '\n';
  }
  out << "  alpha = " << alpha << '\n';
  if (tail_order > 0.0) {
    out << "  beyond-cutoff order = " << tail_order << " (not included)\n";
  }
  out << "  verdict: " << (subcritical ? "subcritical" : "not certified") << '\n';
  return out.str();
}

DecayReport generation_decay_check(const std::vector<std::vector<double>>& generation_mass,
                                   double alpha, double q_root, int max_n) {
  DecayReport report;
  const auto n_clans = static_cast<double>(generation_mass.size());
  if (generation_mass.empty()) {
    return report;
  }
  for (int n = 0; n < max_n; ++n) {
    double sum = 0.0;
    double sum2 = 0.0;
    for (const auto& clan : generation_mass) {
      const double v = static_cast<std::size_t>(n) < clan.size() ? clan[static_cast<std::size_t>(n)] : 0.0;
      sum += v;
      sum2 += v * v;
    }
    GenerationRow row;
    row.n = n;
    row.mean = sum / n_clans;
    const double var = std::max(0.0, sum2 / n_clans - row.mean * row.mean);
    row.se = std::sqrt(var / n_clans);
    row.bound = q_root * std::pow(alpha, n);
    row.ok = row.mean <= row.bound + 3.0 * row.se;
    report.ok = report.ok && row.ok;
    report.rows.push_back(row);
  }
  return report;
}

std::string DecayReport::text() const {
  std::ostringstream out;
  out.precision(6);
  for (const auto& r : rows) {
    out << "n=" << r.n << " mean=" << r.mean << " se=" << r.se << " bound=" << r.bound
        << (r.ok ? " ok" : " EXCEEDED") << '\n';
  }
  return out.str();
}

double bias_bound(double p_exceed) {
  if (!(p_exceed >= 0.0) || !(p_exceed < 1.0)) {
    throw Error(ErrorKind::InvalidParameter, "bias_bound needs 0 <= p < 1");
  }
  return p_exceed / (1.0 - p_exceed);
}

BiasLedger::BiasLedger(const BiasLedger& other) : entries_(other.snapshot()) {}

void BiasLedger::append(const LedgerEntry& e) {
  std::lock_guard lock(mutex_);
  entries_.push_back(e);
}

LedgerEntry BiasLedger::record(std::uint64_t index, const BuildStats& stats) {
  LedgerEntry e;
  e.index = index;
  e.depth = stats.depth;
  e.generations = stats.generations;
  e.uniforms = stats.uniforms;
  e.max_basis_size = stats.max_basis_size;
  e.cylinders = stats.cylinders;
  e.truncation = stats.truncation;
  append(e);
  return e;
}

std::vector<LedgerEntry> BiasLedger::snapshot() const {
  std::vector<LedgerEntry> out;
  {
    std::lock_guard lock(mutex_);
    out = entries_;
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const LedgerEntry& a, const LedgerEntry& b) { return a.index < b.index; });
  return out;
}

std::size_t BiasLedger::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

TailFit fit_log_tail(const std::vector<int>& values, std::size_t lo, std::size_t hi) {
  TailFit fit;
  if (values.empty()) {
    return fit;
  }
  const int top = *std::max_element(values.begin(), values.end());
  std::vector<std::size_t> exceed(static_cast<std::size_t>(std::max(top, 0)) + 1, 0);
  for (int v : values) {
    for (int n = 0; n < v; ++n) {
      ++exceed[static_cast<std::size_t>(n)];
    }
  }
  std::vector<double> xs;
  std::vector<double> ys;
  const auto total = static_cast<double>(values.size());
  for (std::size_t n = 0; n < exceed.size(); ++n) {
    if (exceed[n] >= lo && exceed[n] <= hi) {
      xs.push_back(static_cast<double>(n));
      ys.push_back(std::log(static_cast<double>(exceed[n]) / total));
    }
  }
  fit.points = static_cast<int>(xs.size());
  if (xs.size() < 3) {
    return fit;
  }
  Eigen::MatrixXd design(static_cast<Eigen::Index>(xs.size()), 2);
  Eigen::VectorXd y(static_cast<Eigen::Index>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    design(static_cast<Eigen::Index>(i), 0) = 1.0;
    design(static_cast<Eigen::Index>(i), 1) = xs[i];
    y[static_cast<Eigen::Index>(i)] = ys[i];
  }
  const Eigen::Vector2d beta = design.colPivHouseholderQr().solve(y);
  const Eigen::VectorXd resid = y - design * beta;
  const double dof = static_cast<double>(xs.size()) - 2.0;
  const double sigma2 = resid.squaredNorm() / dof;
  const Eigen::Matrix2d cov = sigma2 * (design.transpose() * design).inverse();
  fit.available = true;
  fit.slope = beta[1];
  fit.se = std::sqrt(std::max(0.0, cov(1, 1)));
  return fit;
}

LedgerSummary bias_ledger_summary(const BiasLedger& ledger, double size_cutoff, double alpha) {
  const auto entries = ledger.snapshot();
  if (entries.empty()) {
    throw Error(ErrorKind::InvalidParameter, "bias ledger summary needs at least one run");
  }
  LedgerSummary s;
  s.runs = entries.size();
  std::size_t depth = 0;
  std::size_t size = 0;
  std::size_t cutoff = 0;
  std::vector<int> generations;
  generations.reserve(entries.size());
  for (const auto& e : entries) {
    s.truncated += e.truncation != Truncation::None ? 1 : 0;
    depth += e.truncation == Truncation::Depth ? 1 : 0;
    size += e.truncation == Truncation::Size ? 1 : 0;
    cutoff += e.max_basis_size >= size_cutoff ? 1 : 0;
    s.mean_depth += e.depth;
    s.max_depth = std::max(s.max_depth, e.depth);
    s.mean_uniforms += static_cast<double>(e.uniforms);
    s.max_basis_size = std::max(s.max_basis_size, e.max_basis_size);
    generations.push_back(e.generations);
  }
  const auto n = static_cast<double>(s.runs);
  s.mean_depth /= n;
  s.mean_uniforms /= n;
  s.p_depth = static_cast<double>(depth) / n;
  s.p_size = static_cast<double>(size) / n;
  s.p_cutoff = static_cast<double>(cutoff) / n;
  s.p_exceed = static_cast<double>(s.truncated) / n;
  s.bias = s.p_exceed < 1.0 ? bias_bound(s.p_exceed) : kInfinity;
  s.generation_tail = fit_log_tail(generations);
  s.alpha = alpha;
  if (alpha > 0.0 && s.generation_tail.available) {
    s.tail_consistent = s.generation_tail.slope <= std::log(alpha) + 3.0 * s.generation_tail.se;
  }
  return s;
}

std::string LedgerSummary::text() const {
  std::ostringstream out;
  out.precision(8);
  out << "runs " << runs << ", truncated " << truncated << '\n'
      << "P[depth limit] = " << p_depth << ", P[size limit] = " << p_size
      << ", P[K >= k] = " << p_cutoff << '\n'
      << "p_exceed = " << p_exceed << ", bias bound = " << bias << '\n'
      << "mean depth = " << mean_depth << ", max depth = " << max_depth
      << ", mean uniforms = " << mean_uniforms << ", max basis size = " << max_basis_size << '\n';
  if (generation_tail.available) {
    out << "generation tail slope = " << generation_tail.slope << " +- " << generation_tail.se
        << " over " << generation_tail.points << " points";
    if (alpha > 0.0) {
      out << ", log(alpha) = " << std::log(alpha)
          << (tail_consistent ? " (consistent)" : " (INCONSISTENT)");
    }
    out << '\n';
  } else {
    out << "generation tail: too few points for a fit\n";
  }
  return out.str();
}

}  // namespace clansim
