#include "clansim/clan.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <queue>
#include <sstream>
#include <unordered_map>

#include "clansim/error.hpp"

namespace clansim {
namespace {

struct Obligation {
  double ti = 0.0;
  int parent = -1;
};

/// Earliest birth among clan cylinders incompatible with theta.
Obligation earliest_incompatible(const Clan& h, const Model& m, const Individual& theta) {
  Obligation o;
  for (std::size_t i = 0; i < h.cylinders.size(); ++i) {
    const auto& c = h.cylinders[i];
    if (c.birth < o.ti && m.incompatible(c.basis, theta)) {
      o.ti = c.birth;
      o.parent = static_cast<int>(i);
    }
  }
  return o;
}

void insert(Clan& clan, BuildStats& stats, const Model& m, const Individual& basis,
            double tau, const Obligation& o, RandomStream& stream, const Limits& limits) {
  if (!(tau + o.ti > 0.0)) {
    throw Error(ErrorKind::ContractViolation, "clan insertion with non-positive span t + TI");
  }
  const double lifetime = (tau + o.ti) + stream.next_exponential(1.0);
  clan.cylinders.push_back(Cylinder{basis, -tau, lifetime, o.parent});
  clan.depth = tau;
  const double size = m.size(basis);
  stats.max_basis_size = std::max(stats.max_basis_size, size);
  if (size > limits.size_cutoff) {
    stats.truncation = Truncation::Cutoff;
  } else if (clan.cylinders.size() > limits.max_size) {
    stats.truncation = Truncation::Size;
  }
}

struct Pending {
  double time;
  std::size_t entry;
  std::uint32_t version;

  bool operator>(const Pending& o) const {
    return time != o.time ? time > o.time : entry > o.entry;
  }
};

struct Entry {
  Individual basis;
  double weight;
  Obligation obligation;
  std::uint32_t version = 0;
};

void build_discrete(const DiscreteModel& m, const WindowFamily& family, RandomStream& stream,
                    const Limits& limits, const BuildOptions& options, Clan& clan,
                    BuildStats& stats) {
  std::vector<Entry> entries;
  std::unordered_map<Individual, std::size_t, IndividualHash> index;
  std::priority_queue<Pending, std::vector<Pending>, std::greater<>> heap;

  auto schedule = [&](std::size_t e, double lower) {
    auto& entry = entries[e];
    ++entry.version;
    const double rate = entry.weight * std::exp(-(lower + entry.obligation.ti));
    const double t = stream.sample_first_event_after(rate, lower);
    if (t != kInfinity) {
      heap.push(Pending{t, e, entry.version});
    }
  };
  auto lookup = [&](const Individual& g) {
    auto [it, fresh] = index.try_emplace(g, entries.size());
    if (fresh) {
      entries.push_back(Entry{g, m.weight(g), {}, 0});
    }
    return it->second;
  };

  // Window members without an incompatible cylinder all have TI = 0, so they
  // are drawn together as one process of rate mass * e^{-s}. An event whose
  // member already has its own entry is discarded: that entry carries it now.
  double pooled = kInfinity;
  if (options.always_resample) {
    for (const auto& g : family.members) {
      schedule(lookup(g), 0.0);
    }
  } else {
    pooled = stream.sample_first_event_after(family.mass, 0.0);
  }
  while (!heap.empty() || pooled != kInfinity) {
    if (pooled != kInfinity && (heap.empty() || pooled < heap.top().time)) {
      const double tau = pooled;
      const double pick = stream.next_uniform() * family.mass;
      auto it = std::upper_bound(family.cumulative.begin(), family.cumulative.end(), pick);
      if (it == family.cumulative.end()) {
        --it;
      }
      const Individual& basis = family.members[static_cast<std::size_t>(it - family.cumulative.begin())];
      pooled = stream.sample_first_event_after(family.mass * std::exp(-tau), tau);
      if (index.contains(basis)) {
        continue;
      }
      if (tau > limits.max_depth) {
        stats.truncation = Truncation::Depth;
        clan.depth = tau;
        return;
      }
      insert(clan, stats, m, basis, tau, Obligation{}, stream, limits);
      if (stats.truncation != Truncation::None) {
        return;
      }
      const int c = static_cast<int>(clan.cylinders.size()) - 1;
      for (const auto& theta : m.incompatible_with(basis)) {
        const auto e = lookup(theta);
        entries[e].obligation = Obligation{-tau, c};
        schedule(e, tau);
      }
      continue;
    }
    const Pending top = heap.top();
    heap.pop();
    if (top.version != entries[top.entry].version) {
      continue;
    }
    const double tau = top.time;
    if (tau > limits.max_depth) {
      stats.truncation = Truncation::Depth;
      clan.depth = tau;
      return;
    }
    const Individual basis = entries[top.entry].basis;
    insert(clan, stats, m, basis, tau, entries[top.entry].obligation, stream, limits);
    if (stats.truncation != Truncation::None) {
      return;
    }
    const int c = static_cast<int>(clan.cylinders.size()) - 1;
    bool self_rescheduled = false;
    std::vector<bool> touched;
    if (options.always_resample) {
      touched.assign(entries.size(), false);
    }
    for (const auto& theta : m.incompatible_with(basis)) {
      const auto e = lookup(theta);
      entries[e].obligation = Obligation{-tau, c};
      schedule(e, tau);
      self_rescheduled = self_rescheduled || e == top.entry;
      if (options.always_resample && e < touched.size()) {
        touched[e] = true;
      }
    }
    if (!self_rescheduled) {
      schedule(top.entry, tau);
      if (options.always_resample) {
        touched[top.entry] = true;
      }
    }
    if (options.always_resample) {
      for (std::size_t e = 0; e < touched.size(); ++e) {
        if (!touched[e]) {
          schedule(e, tau);
        }
      }
    }
  }
}

void build_continuous(const ContinuousModel& m, const Window& window, RandomStream& stream,
                      const Limits& limits, Clan& clan, BuildStats& stats) {
  std::vector<Region> regions = m.window_regions(window);
  std::vector<double> cumulative;
  double total = 0.0;
  auto add_region = [&](const Region& r) {
    total += m.region_mass(r);
    cumulative.push_back(total);
  };
  for (const auto& r : regions) {
    add_region(r);
  }
  double tau = 0.0;  // backward time of the last insertion
  double s = 0.0;    // current candidate time
  while (true) {
    // Dominating rate total * e^{-(s - tau)} bounds w e^{-(s + TI)} since TI >= -tau.
    s = stream.sample_first_event_after(total * std::exp(-(s - tau)), s);
    if (s == kInfinity) {
      return;
    }
    const double pick = stream.next_uniform() * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), pick);
    if (it == cumulative.end()) {
      --it;
    }
    const auto& region = regions[static_cast<std::size_t>(it - cumulative.begin())];
    const Individual theta = m.sample_in(region, stream);
    const double u = stream.next_uniform();

    const Obligation o = earliest_incompatible(clan, m, theta);
    const bool member = o.parent >= 0 || m.intersects(theta, window);
    if (!member) {
      continue;
    }
    int cover = 0;
    for (const auto& r : regions) {
      cover += m.region_contains(r, theta) ? 1 : 0;
    }
    const double accept = std::exp(-(tau + o.ti)) / std::max(cover, 1);
    if (!(u < accept)) {
      continue;
    }
    if (s > limits.max_depth) {
      stats.truncation = Truncation::Depth;
      clan.depth = s;
      return;
    }
    insert(clan, stats, m, theta, s, o, stream, limits);
    if (stats.truncation != Truncation::None) {
      return;
    }
    tau = s;
    regions.push_back(m.neighbor_region(theta));
    add_region(regions.back());
  }
}

}  // namespace

std::string truncation_name(Truncation t) {
  switch (t) {
    case Truncation::None:
      return "none";
    case Truncation::Depth:
      return "depth";
    case Truncation::Size:
      return "size";
    case Truncation::Cutoff:
      return "cutoff";
  }
  return "none";
}

PotentialBases potential_bases(const Clan& h, const Window& window, const Model& m) {
  PotentialBases out;
  if (const auto* d = dynamic_cast<const DiscreteModel*>(&m)) {
    out.members = d->window_members(window);
    for (const auto& c : h.cylinders) {
      auto more = d->incompatible_with(c.basis);
      out.members.insert(out.members.end(), more.begin(), more.end());
    }
    std::sort(out.members.begin(), out.members.end(), individual_less);
    out.members.erase(std::unique(out.members.begin(), out.members.end()), out.members.end());
    return out;
  }
  const auto& cm = dynamic_cast<const ContinuousModel&>(m);
  out.regions = cm.window_regions(window);
  for (const auto& c : h.cylinders) {
    out.regions.push_back(cm.neighbor_region(c.basis));
  }
  return out;
}

bool in_potential_bases(const Clan& h, const Window& window, const Model& m,
                        const Individual& theta) {
  if (m.intersects(theta, window)) {
    return true;
  }
  return std::any_of(h.cylinders.begin(), h.cylinders.end(),
                     [&](const Cylinder& c) { return m.incompatible(c.basis, theta); });
}

double ti(const Clan& h, const Window& window, const Model& m, const Individual& theta) {
  if (!in_potential_bases(h, window, m, theta)) {
    throw Error(ErrorKind::ContractViolation,
                "TI asked for " + individual_text(theta) + ", which is not a potential basis");
  }
  return earliest_incompatible(h, m, theta).ti;
}

WindowFamily window_family(const DiscreteModel& m, const Window& window) {
  WindowFamily f;
  f.members = m.window_members(window);
  f.cumulative.reserve(f.members.size());
  for (const auto& g : f.members) {
    f.mass += m.weight(g);
    f.cumulative.push_back(f.mass);
  }
  return f;
}

BuildResult build_clan(const Model& m, const Window& window, RandomStream& stream,
                       const Limits& limits, const BuildOptions& options,
                       const WindowFamily* family) {
  BuildResult result;
  const std::uint64_t start = stream.counter();
  if (const auto* d = dynamic_cast<const DiscreteModel*>(&m)) {
    if (family != nullptr) {
      build_discrete(*d, *family, stream, limits, options, result.clan, result.stats);
    } else {
      build_discrete(*d, window_family(*d, window), stream, limits, options, result.clan,
                     result.stats);
    }
  } else {
    build_continuous(dynamic_cast<const ContinuousModel&>(m), window, stream, limits,
                     result.clan, result.stats);
  }
  auto& clan = result.clan;
  clan.truncated = result.stats.truncation != Truncation::None;
  const auto generations = clan_generations(clan, m, window);
  clan.generation.assign(clan.size(), -1);
  for (std::size_t n = 0; n < generations.size(); ++n) {
    for (int i : generations[n]) {
      clan.generation[static_cast<std::size_t>(i)] = static_cast<int>(n);
    }
  }
  if (!clan.truncated) {
    check_ancestor_property(clan, m, window);
  }
  result.stats.depth = clan.depth;
  result.stats.uniforms = stream.counter() - start;
  result.stats.cylinders = clan.size();
  result.stats.generations = static_cast<int>(generations.size());
  return result;
}

bool is_ancestor(const Model& m, const Cylinder& older, const Cylinder& younger) {
  return older.birth < younger.birth && older.death() >= younger.birth &&
         m.incompatible(older.basis, younger.basis);
}

std::vector<std::vector<int>> clan_generations(const Clan& c, const Model& m,
                                               const Window& window) {
  const std::size_t n = c.size();
  std::vector<int> gen(n, -1);
  std::vector<std::vector<int>> out;
  std::deque<int> queue;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& cyl = c.cylinders[i];
    if (cyl.alive_at(0.0) && m.intersects(cyl.basis, window)) {
      gen[i] = 0;
      queue.push_back(static_cast<int>(i));
    }
  }
  while (!queue.empty()) {
    const int i = queue.front();
    queue.pop_front();
    const auto& younger = c.cylinders[static_cast<std::size_t>(i)];
    for (std::size_t j = 0; j < n; ++j) {
      if (gen[j] < 0 && is_ancestor(m, c.cylinders[j], younger)) {
        gen[j] = gen[static_cast<std::size_t>(i)] + 1;
        queue.push_back(static_cast<int>(j));
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (gen[i] < 0) {
      continue;
    }
    const auto g = static_cast<std::size_t>(gen[i]);
    if (out.size() <= g) {
      out.resize(g + 1);
    }
    out[g].push_back(static_cast<int>(i));
  }
  return out;
}

void check_ancestor_property(const Clan& c, const Model& m, const Window& window) {
  const auto generations = clan_generations(c, m, window);
  std::size_t reached = 0;
  for (const auto& g : generations) {
    reached += g.size();
  }
  if (reached != c.size()) {
    throw Error(ErrorKind::ContractViolation,
                "clan has " + std::to_string(c.size() - reached) +
                    " cylinders that are neither roots nor ancestors");
  }
}

std::string clan_text(const Clan& c) {
  std::ostringstream out;
  char buf[64];
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto& cyl = c.cylinders[i];
    out << i << ' ' << individual_text(cyl.basis);
    std::snprintf(buf, sizeof buf, " %.17g %.17g", cyl.birth, cyl.lifetime);
    out << buf << ' ' << cyl.parent << ' '
        << (i < c.generation.size() ? c.generation[i] : -1) << '\n';
  }
  return out.str();
}

}  // namespace clansim
