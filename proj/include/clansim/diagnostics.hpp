#ifndef CLANSIM_DIAGNOSTICS_HPP
#define CLANSIM_DIAGNOSTICS_HPP

#include <limits>
#include <mutex>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "clansim/clan.hpp"

namespace clansim {

struct BoundTerm {
  std::string name;
  double value = 0.0;
};

struct SubcriticalityReport {
  std::string model;
  std::string q;                  // size function used
  std::vector<BoundTerm> bounds;  // every closed form evaluated
  double alpha = 0.0;             // tightest bound
  bool subcritical = false;       // alpha < 1
  /// Order estimate of the mass beyond the size cutoff (contours only), kept
  /// apart from the certified number.
  double tail_order = 0.0;

  std::string text() const;
};

/// Mean-offspring matrix m(g, t) = w(t) I(g, t) of a finite discrete family,
/// rows and columns in `family` order.
Eigen::MatrixXd offspring_matrix(const DiscreteModel& m, const std::vector<Individual>& family);

/// Tightest available subcriticality bound for the model.
SubcriticalityReport alpha(const Model& m);

struct GenerationRow {
  int n = 0;
  double mean = 0.0;   // E q(A_n)
  double se = 0.0;
  double bound = 0.0;  // q_root alpha^n
  bool ok = true;
};

struct DecayReport {
  std::vector<GenerationRow> rows;
  bool ok = true;
  std::string text() const;
};

/// q-mass of each generation of each clan, e.g. from clan_generations.
/// Compares the sample means with q_root alpha^n for n < max_n.
DecayReport generation_decay_check(const std::vector<std::vector<double>>& generation_mass,
                                   double alpha, double q_root, int max_n);

/// p / (1 - p). Throws Error(InvalidParameter) unless 0 <= p < 1.
double bias_bound(double p_exceed);

struct LedgerEntry {
  std::uint64_t index = 0;
  double depth = 0.0;
  int generations = 0;
  std::uint64_t uniforms = 0;
  double max_basis_size = 0.0;
  std::size_t cylinders = 0;
  Truncation truncation = Truncation::None;
};

/// Append-only record of clan builds; safe to append from several threads.
class BiasLedger {
public:
  BiasLedger() = default;
  BiasLedger(const BiasLedger& other);
  BiasLedger& operator=(const BiasLedger&) = delete;

  void append(const LedgerEntry& e);
  LedgerEntry record(std::uint64_t index, const BuildStats& stats);
  /// Entries sorted by index.
  std::vector<LedgerEntry> snapshot() const;
  std::size_t size() const;

private:
  mutable std::mutex mutex_;
  std::vector<LedgerEntry> entries_;
};

/// Least-squares slope of log P[X > n] over integer n, using the points whose
/// exceedance count lies in [lo, hi]. Needs at least three such points.
struct TailFit {
  bool available = false;
  double slope = 0.0;
  double se = 0.0;
  int points = 0;
};

TailFit fit_log_tail(const std::vector<int>& values, std::size_t lo = 100,
                     std::size_t hi = std::numeric_limits<std::size_t>::max());

struct LedgerSummary {
  std::size_t runs = 0;
  std::size_t truncated = 0;
  double p_depth = 0.0;     // P[T > S] estimate: depth truncations
  double p_size = 0.0;      // size truncations
  double p_cutoff = 0.0;    // P[K >= k]
  double p_exceed = 0.0;    // any truncation
  double bias = 0.0;        // bias_bound(p_exceed)
  double mean_depth = 0.0;
  double max_depth = 0.0;
  double mean_uniforms = 0.0;
  double max_basis_size = 0.0;
  TailFit generation_tail;  // fit of log P[generations > n]
  double alpha = 0.0;       // certified alpha, when given
  bool tail_consistent = true;  // slope <= log(alpha) + 3 se

  std::string text() const;
};

/// Throws Error(InvalidParameter) on an empty ledger. `alpha` <= 0 skips the
/// comparison with the certified rate.
LedgerSummary bias_ledger_summary(const BiasLedger& ledger, double size_cutoff, double alpha);

}  // namespace clansim

#endif  // CLANSIM_DIAGNOSTICS_HPP
