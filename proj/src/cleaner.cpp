#include "clansim/cleaner.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "clansim/error.hpp"

namespace clansim {

std::size_t KeptSet::kept_count() const {
  return static_cast<std::size_t>(std::count(kept.begin(), kept.end(), true));
}

std::vector<int> birth_order(const std::vector<Cylinder>& cylinders) {
  std::vector<int> order(cylinders.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return cylinders[static_cast<std::size_t>(a)].birth <
           cylinders[static_cast<std::size_t>(b)].birth;
  });
  return order;
}

KeptSet clean(const Clan& c, const Model& m, RandomStream& stream, bool biased) {
  if (c.truncated && !biased) {
    throw Error(ErrorKind::Truncated, "refusing to clean a truncated clan outside biased mode");
  }
  KeptSet out;
  out.biased = c.truncated;
  out.kept.assign(c.size(), false);
  std::vector<int> kept_so_far;
  std::vector<Individual> xi;
  for (int i : birth_order(c.cylinders)) {
    const auto& cyl = c.cylinders[static_cast<std::size_t>(i)];
    xi.clear();
    for (int j : kept_so_far) {
      const auto& other = c.cylinders[static_cast<std::size_t>(j)];
      if (other.alive_at(cyl.birth) && m.incompatible(other.basis, cyl.basis)) {
        xi.push_back(other.basis);
      }
    }
    Verdict v;
    v.cylinder = i;
    v.acceptance = m.acceptance_prob(cyl.basis, xi);
    v.flag = stream.next_uniform();
    v.kept = v.flag < v.acceptance;
    if (v.kept) {
      kept_so_far.push_back(i);
      out.kept[static_cast<std::size_t>(i)] = true;
    }
    out.verdicts.push_back(v);
  }
  return out;
}

Configuration project(const KeptSet& k, const Clan& c, const Model& m, const Window& window) {
  Configuration out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto& cyl = c.cylinders[i];
    if (k.kept[i] && cyl.alive_at(0.0) && m.intersects(cyl.basis, window)) {
      out.items.push_back(cyl.basis);
    }
  }
  out.canonicalize();
  return out;
}

std::string verdict_text(const KeptSet& k) {
  std::ostringstream out;
  char buf[80];
  for (const auto& v : k.verdicts) {
    std::snprintf(buf, sizeof buf, "%d %.17g %.17g %d\n", v.cylinder, v.acceptance, v.flag,
                  v.kept ? 1 : 0);
    out << buf;
  }
  return out.str();
}

}  // namespace clansim
