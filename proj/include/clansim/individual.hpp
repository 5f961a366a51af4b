#ifndef CLANSIM_INDIVIDUAL_HPP
#define CLANSIM_INDIVIDUAL_HPP

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

namespace clansim {

/// Germ of a fixed-grain point process (area-interaction, Strauss). Planar.
struct Germ {
  Eigen::Vector2d x = Eigen::Vector2d::Zero();
};

/// Call of the one-dimensional loss network: segment [x, x + length].
struct Call {
  double x = 0.0;
  double length = 1.0;
};

/// Peierls contour: catalog shape translated by `anchor` (the lower-left
/// corner of its bounding box).
struct Contour {
  Eigen::Vector2i anchor = Eigen::Vector2i::Zero();
  std::uint32_t shape = 0;
};

/// Labelled individual of a finite toy family.
struct Site {
  std::uint32_t id = 0;
};

/// Connected bond set of a random-cluster grid, by catalog index.
struct Animal {
  std::uint32_t id = 0;
};

using Individual = std::variant<Germ, Call, Contour, Site, Animal>;

bool operator==(const Germ& a, const Germ& b);
bool operator==(const Call& a, const Call& b);
bool operator==(const Contour& a, const Contour& b);
bool operator==(const Site& a, const Site& b);
bool operator==(const Animal& a, const Animal& b);

/// Strict total order used for canonical configuration keys.
bool individual_less(const Individual& a, const Individual& b);

std::string kind_name(const Individual& g);

/// Space-separated text form, e.g. "germ 0.5 1.25" or "site 3". Reals are
/// written with 17 significant digits so the text round-trips.
std::string individual_text(const Individual& g);

struct IndividualHash {
  std::size_t operator()(const Individual& g) const;
};

struct BoxWindow {
  Eigen::AlignedBox2d box;
};

struct IntervalWindow {
  double lo = 0.0;
  double hi = 0.0;
};

struct SiteWindow {
  std::vector<std::uint32_t> sites;
};

/// Every individual of a finite family (random-cluster grid).
struct WholeWindow {};

using Window = std::variant<BoxWindow, IntervalWindow, SiteWindow, WholeWindow>;

/// Finite multiset of individuals; repeated entries are multiplicities.
struct Configuration {
  std::vector<Individual> items;

  std::size_t size() const { return items.size(); }
  bool empty() const { return items.empty(); }
  std::size_t count(const Individual& g) const;

  /// Sorts items by `individual_less`.
  void canonicalize();
};

}  // namespace clansim

#endif  // CLANSIM_INDIVIDUAL_HPP
