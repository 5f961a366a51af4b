#ifndef CLANSIM_CLEANER_HPP
#define CLANSIM_CLEANER_HPP

#include <string>
#include <vector>

#include "clansim/clan.hpp"

namespace clansim {

struct Verdict {
  int cylinder = 0;
  double acceptance = 1.0;  // M(basis | kept incompatible ancestors alive at birth)
  double flag = 0.0;
  bool kept = false;
};

/// Outcome of cleaning a clan: one verdict per cylinder in birth order.
struct KeptSet {
  std::vector<bool> kept;       // indexed like the clan's cylinders
  std::vector<Verdict> verdicts;
  bool biased = false;          // cleaned a truncated clan

  std::size_t kept_count() const;
};

/// Cylinder indices sorted by birth, ties by insertion order.
std::vector<int> birth_order(const std::vector<Cylinder>& cylinders);

/// Forward pass over the clan: a cylinder is kept iff a fresh uniform is
/// below M(basis | bases of kept, incompatible cylinders alive at its birth).
/// Throws Error(Truncated) on truncated clans unless `biased` is set.
KeptSet clean(const Clan& c, const Model& m, RandomStream& stream, bool biased = false);

/// Bases of kept cylinders alive at time 0 that intersect the window,
/// canonicalized.
Configuration project(const KeptSet& k, const Clan& c, const Model& m, const Window& window);

/// One line per verdict: cylinder, M, flag, kept.
std::string verdict_text(const KeptSet& k);

}  // namespace clansim

#endif  // CLANSIM_CLEANER_HPP
