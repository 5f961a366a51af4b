#ifndef CLANSIM_FINITE_VOLUME_HPP
#define CLANSIM_FINITE_VOLUME_HPP

#include <string>
#include <vector>

#include "clansim/clan.hpp"

namespace clansim {

enum class EventKind { Birth, Death };

struct Event {
  double time = 0.0;
  EventKind kind = EventKind::Birth;
  int cylinder = 0;
  bool accepted = false;  // births only
};

/// Forward run on a bounded family over [t0, t1].
///
/// `cylinders` holds the initial cylinders first (born at t0, always kept),
/// then the free cylinders in birth order. `flags` are the uniforms used by
/// the acceptance tests.
struct Trajectory {
  double t0 = 0.0;
  double t1 = 0.0;
  std::size_t initial = 0;
  std::vector<Cylinder> cylinders;
  std::vector<double> flags;
  std::vector<bool> kept;
  std::vector<Event> events;  // births and deaths of kept cylinders, in time order

  /// Bases of kept cylinders alive at t, canonicalized.
  Configuration at(double t) const;
  Configuration final_configuration() const { return at(t1); }
  std::string event_text() const;
};

/// Sequential construction: free births in time order, each accepted iff its
/// flag is below M(basis | current configuration); deaths after Exp(1)
/// lifetimes. `box` names the finite family; it must be bounded.
///
/// Draw order: for each initial individual a lifetime then a flag; then per
/// free event the interarrival time, the basis, the lifetime and the flag.
Trajectory simulate_forward(const Model& m, const Window& box, const Configuration& initial,
                            double t0, double t1, RandomStream& stream);

/// Same free cylinders (same draw order) generated first, then the keep-sweep
/// in birth order. Bit-identical to simulate_forward on a shared stream.
Trajectory two_sweep(const Model& m, const Window& box, const Configuration& initial,
                     double t0, double t1, RandomStream& stream);

struct StationaryRun {
  Configuration configuration;  // projection on the inner window at time 0
  double depth = 0.0;           // -tau*, the regeneration depth
  std::size_t cylinders = 0;
};

/// Exact sample of the finite-volume law on `window` dilated by `margin`
/// (site and whole windows ignore the margin). Runs the free process backward from
/// time 0 until the last instant tau* with no free cylinder alive, keeps by
/// the forward sweep from tau*, and projects to `window` at time 0.
/// Throws Error(Truncated) when the regeneration depth exceeds `max_depth`.
StationaryRun stationary_window(const Model& m, const Window& window, double margin,
                                RandomStream& stream, double max_depth = 1000.0);

/// Same, with the free family of the dilated window prepared by the caller,
/// as m.finite_family(m.dilate(window, margin)).
StationaryRun stationary_window(const Model& m, const Window& window, const FiniteFamily& family,
                                RandomStream& stream, double max_depth = 1000.0);

/// Poisson variate by inversion, split into chunks of mean at most 30.
std::uint64_t poisson_variate(double mean, RandomStream& stream);

}  // namespace clansim

#endif  // CLANSIM_FINITE_VOLUME_HPP
