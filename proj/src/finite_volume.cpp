#include "clansim/finite_volume.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <queue>
#include <sstream>

#include "clansim/cleaner.hpp"
#include "clansim/error.hpp"

namespace clansim {
namespace {

struct FreeDraws {
  std::vector<Cylinder> cylinders;
  std::vector<double> flags;
  std::size_t initial = 0;
};

void require_bounded(const Window& box) {
  if (std::holds_alternative<BoxWindow>(box)) {
    const auto& b = std::get<BoxWindow>(box).box;
    if (b.isEmpty() || !b.min().allFinite() || !b.max().allFinite()) {
      throw Error(ErrorKind::Unbounded, "finite-volume box must be bounded and nonempty");
    }
  } else if (const auto* i = std::get_if<IntervalWindow>(&box)) {
    if (!std::isfinite(i->lo) || !std::isfinite(i->hi) || i->hi < i->lo) {
      throw Error(ErrorKind::Unbounded, "finite-volume interval must be bounded");
    }
  }
}

void draw_initial(const Configuration& initial, double t0, RandomStream& stream, FreeDraws& d) {
  for (const auto& g : initial.items) {
    const double life = stream.next_exponential(1.0);
    const double flag = stream.next_uniform();
    d.cylinders.push_back(Cylinder{g, t0, life, -1});
    d.flags.push_back(flag);
  }
  d.initial = initial.size();
}

/// Draws the next free event after `t`; returns false past t1.
bool draw_event(const FiniteFamily& family, double& t, double t1, RandomStream& stream,
                FreeDraws& d) {
  const double mass = family.mass();
  if (!(mass > 0.0)) {
    return false;
  }
  t += stream.next_exponential(mass);
  if (t > t1) {
    return false;
  }
  Individual g = family.sample(stream);
  const double life = stream.next_exponential(1.0);
  const double flag = stream.next_uniform();
  d.cylinders.push_back(Cylinder{std::move(g), t, life, -1});
  d.flags.push_back(flag);
  return true;
}

void add_deaths(Trajectory& tr) {
  for (std::size_t i = 0; i < tr.cylinders.size(); ++i) {
    if (tr.kept[i] && tr.cylinders[i].death() <= tr.t1) {
      tr.events.push_back(Event{tr.cylinders[i].death(), EventKind::Death, static_cast<int>(i), true});
    }
  }
}

void sort_events(std::vector<Event>& events) {
  std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    if (a.time != b.time) {
      return a.time < b.time;
    }
    return a.kind == EventKind::Death && b.kind == EventKind::Birth;
  });
}

}  // namespace

Configuration Trajectory::at(double t) const {
  Configuration out;
  for (std::size_t i = 0; i < cylinders.size(); ++i) {
    if (kept[i] && cylinders[i].alive_at(t)) {
      out.items.push_back(cylinders[i].basis);
    }
  }
  out.canonicalize();
  return out;
}

std::string Trajectory::event_text() const {
  std::ostringstream out;
  char buf[64];
  for (const auto& e : events) {
    std::snprintf(buf, sizeof buf, "%.17g %s %d ", e.time,
                  e.kind == EventKind::Birth ? "birth" : "death", e.cylinder);
    out << buf << (e.kind == EventKind::Birth ? (e.accepted ? "accepted" : "rejected") : "-")
        << ' ' << individual_text(cylinders[static_cast<std::size_t>(e.cylinder)].basis) << '\n';
  }
  return out.str();
}

Trajectory simulate_forward(const Model& m, const Window& box, const Configuration& initial,
                            double t0, double t1, RandomStream& stream) {
  require_bounded(box);
  const auto family = m.finite_family(box);
  FreeDraws d;
  draw_initial(initial, t0, stream, d);

  Trajectory tr;
  tr.t0 = t0;
  tr.t1 = t1;
  tr.initial = d.initial;
  std::vector<int> alive;  // kept cylinders, birth order
  for (std::size_t i = 0; i < d.initial; ++i) {
    alive.push_back(static_cast<int>(i));
  }
  std::vector<Individual> xi;
  double t = t0;
  while (draw_event(*family, t, t1, stream, d)) {
    const auto idx = d.cylinders.size() - 1;
    const auto& cyl = d.cylinders[idx];
    // Deaths strictly before this birth leave the configuration.
    std::erase_if(alive, [&](int j) { return d.cylinders[static_cast<std::size_t>(j)].death() < t; });
    xi.clear();
    for (int j : alive) {
      xi.push_back(d.cylinders[static_cast<std::size_t>(j)].basis);
    }
    const bool accepted = d.flags[idx] < m.acceptance_prob(cyl.basis, xi);
    tr.events.push_back(Event{t, EventKind::Birth, static_cast<int>(idx), accepted});
    if (accepted) {
      alive.push_back(static_cast<int>(idx));
    }
  }
  tr.cylinders = std::move(d.cylinders);
  tr.flags = std::move(d.flags);
  tr.kept.assign(tr.cylinders.size(), false);
  for (std::size_t i = 0; i < tr.initial; ++i) {
    tr.kept[i] = true;
  }
  for (const auto& e : tr.events) {
    if (e.accepted) {
      tr.kept[static_cast<std::size_t>(e.cylinder)] = true;
    }
  }
  add_deaths(tr);
  sort_events(tr.events);
  return tr;
}

Trajectory two_sweep(const Model& m, const Window& box, const Configuration& initial, double t0,
                     double t1, RandomStream& stream) {
  require_bounded(box);
  const auto family = m.finite_family(box);
  FreeDraws d;
  draw_initial(initial, t0, stream, d);
  double t = t0;
  while (draw_event(*family, t, t1, stream, d)) {
  }

  Trajectory tr;
  tr.t0 = t0;
  tr.t1 = t1;
  tr.initial = d.initial;
  tr.cylinders = std::move(d.cylinders);
  tr.flags = std::move(d.flags);
  tr.kept.assign(tr.cylinders.size(), false);
  std::vector<int> kept;
  for (std::size_t i = 0; i < tr.initial; ++i) {
    tr.kept[i] = true;
    kept.push_back(static_cast<int>(i));
  }
  std::vector<Individual> xi;
  for (std::size_t i = tr.initial; i < tr.cylinders.size(); ++i) {
    const auto& cyl = tr.cylinders[i];
    xi.clear();
    for (int j : kept) {
      const auto& other = tr.cylinders[static_cast<std::size_t>(j)];
      if (other.alive_at(cyl.birth) && m.incompatible(other.basis, cyl.basis)) {
        xi.push_back(other.basis);
      }
    }
    const bool accepted = tr.flags[i] < m.acceptance_prob(cyl.basis, xi);
    tr.events.push_back(Event{cyl.birth, EventKind::Birth, static_cast<int>(i), accepted});
    if (accepted) {
      tr.kept[i] = true;
      kept.push_back(static_cast<int>(i));
    }
  }
  add_deaths(tr);
  sort_events(tr.events);
  return tr;
}

std::uint64_t poisson_variate(double mean, RandomStream& stream) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) {
    throw Error(ErrorKind::InvalidParameter, "Poisson mean must be finite and nonnegative");
  }
  std::uint64_t total = 0;
  double left = mean;
  while (left > 0.0) {
    const double mu = std::min(left, 30.0);
    left -= mu;
    const double u = stream.next_uniform();
    double p = std::exp(-mu);
    double cdf = p;
    std::uint64_t k = 0;
    while (u >= cdf && k < 1000) {
      ++k;
      p *= mu / static_cast<double>(k);
      cdf += p;
    }
    total += k;
  }
  return total;
}

StationaryRun stationary_window(const Model& m, const Window& window, double margin,
                                RandomStream& stream, double max_depth) {
  const Window outer = m.dilate(window, margin);
  require_bounded(outer);
  return stationary_window(m, window, *m.finite_family(outer), stream, max_depth);
}

StationaryRun stationary_window(const Model& m, const Window& window, const FiniteFamily& family,
                                RandomStream& stream, double max_depth) {
  const double mass = family.mass();

  Clan free;  // reused as a plain cylinder container
  double earliest = 0.0;
  if (mass > 0.0) {
    // Cylinders alive at time 0: Poisson(mass) many with Exp(1) ages.
    const auto n = poisson_variate(mass, stream);
    for (std::uint64_t i = 0; i < n; ++i) {
      Individual g = family.sample(stream);
      const double age = stream.next_exponential(1.0);
      const double residual = stream.next_exponential(1.0);
      free.cylinders.push_back(Cylinder{std::move(g), -age, age + residual, -1});
      earliest = std::min(earliest, -age);
    }
    // Earlier deaths arrive backward at rate `mass`; stop at the first gap.
    double death = 0.0;
    while (true) {
      death -= stream.next_exponential(mass);
      if (death < earliest) {
        break;
      }
      Individual g = family.sample(stream);
      const double life = stream.next_exponential(1.0);
      free.cylinders.push_back(Cylinder{std::move(g), death - life, life, -1});
      earliest = std::min(earliest, death - life);
      if (-earliest > max_depth) {
        throw Error(ErrorKind::Truncated, "regeneration search exceeded depth " +
                                              std::to_string(max_depth) + " (reached " +
                                              std::to_string(-earliest) + ")");
      }
    }
  }
  const KeptSet kept = clean(free, m, stream);
  StationaryRun run;
  run.configuration = project(kept, free, m, window);
  run.depth = -earliest;
  run.cylinders = free.size();
  return run;
}

}  // namespace clansim
