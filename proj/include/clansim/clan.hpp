#ifndef CLANSIM_CLAN_HPP
#define CLANSIM_CLAN_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "clansim/model.hpp"

namespace clansim {

/// Space-time cylinder: basis, birth time and lifetime. Life is the closed
/// interval [birth, birth + lifetime].
struct Cylinder {
  Individual basis;
  double birth = 0.0;
  double lifetime = 0.0;
  /// Clan cylinder whose obligation triggered this insertion, or -1 for
  /// window-only insertions.
  int parent = -1;

  double death() const { return birth + lifetime; }
  bool alive_at(double t) const { return birth <= t && t <= death(); }
};

/// Clan of ancestors of a window at time 0.
struct Clan {
  std::vector<Cylinder> cylinders;  // insertion order; births strictly decrease
  std::vector<int> generation;      // per cylinder; roots are 0
  double depth = 0.0;               // backward time of the last insertion
  bool truncated = false;

  std::size_t size() const { return cylinders.size(); }
  bool empty() const { return cylinders.empty(); }
};

struct Limits {
  double max_depth = 1000.0;        // S, in backward time
  std::size_t max_size = 100000;    // cylinders
  double size_cutoff = 10.0;        // k, bound on size(basis)
};

enum class Truncation { None, Depth, Size, Cutoff };

std::string truncation_name(Truncation t);

/// Measurements of one build, truncated or not.
struct BuildStats {
  double depth = 0.0;
  std::uint64_t uniforms = 0;  // T
  double max_basis_size = 0.0; // K
  std::size_t cylinders = 0;
  int generations = 0;         // deepest generation index + 1; 0 for empty clans
  Truncation truncation = Truncation::None;
};

struct BuildResult {
  Clan clan;
  BuildStats stats;

  bool truncated() const { return stats.truncation != Truncation::None; }
};

struct BuildOptions {
  /// Resample every pending time after each insertion instead of only the
  /// ones whose TI changed. Same law, more uniforms; kept for A/B tests.
  bool always_resample = false;
};

/// Bases of the potential ancestors given the partial clan `h`.
///
/// Discrete models list them explicitly (sorted). Continuous models return a
/// bounded cover of germ regions; membership is then decided by
/// `in_potential_bases`.
struct PotentialBases {
  std::vector<Individual> members;
  std::vector<Region> regions;
};

PotentialBases potential_bases(const Clan& h, const Window& window, const Model& m);

bool in_potential_bases(const Clan& h, const Window& window, const Model& m,
                        const Individual& theta);

/// Earliest birth among clan cylinders incompatible with theta, 0 if none.
/// Throws Error(ContractViolation) when theta is not a potential basis.
double ti(const Clan& h, const Window& window, const Model& m, const Individual& theta);

/// Window members of a discrete model with running weight sums. Depends only
/// on (model, window), so samplers prepare it once and share it.
struct WindowFamily {
  std::vector<Individual> members;
  std::vector<double> cumulative;
  double mass = 0.0;
};

WindowFamily window_family(const DiscreteModel& m, const Window& window);

/// Backward construction of the clan of ancestors of `window` at time 0.
/// Consumes only `stream`. Truncation is reported in the stats, with the
/// partial clan kept. `family`, when given, must come from window_family on
/// the same model and window; it is ignored for continuous models.
BuildResult build_clan(const Model& m, const Window& window, RandomStream& stream,
                       const Limits& limits, const BuildOptions& options = {},
                       const WindowFamily* family = nullptr);

/// Generation sets: element 0 holds the roots, element n the cylinders whose
/// shortest ancestor path to a root has n links.
std::vector<std::vector<int>> clan_generations(const Clan& c, const Model& m,
                                               const Window& window);

/// True iff `older` is an ancestor of `younger`: incompatible bases, born
/// strictly earlier and alive at the younger one's birth.
bool is_ancestor(const Model& m, const Cylinder& older, const Cylinder& younger);

/// Throws Error(ContractViolation) unless every cylinder is a root or an
/// ancestor of another clan cylinder.
void check_ancestor_property(const Clan& c, const Model& m, const Window& window);

/// One line per cylinder: index, basis, birth, lifetime, parent, generation.
std::string clan_text(const Clan& c);

}  // namespace clansim

#endif  // CLANSIM_CLAN_HPP
