#include "clansim/individual.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <tuple>

namespace clansim {

bool operator==(const Germ& a, const Germ& b) { return a.x == b.x; }
bool operator==(const Call& a, const Call& b) {
  return a.x == b.x && a.length == b.length;
}
bool operator==(const Contour& a, const Contour& b) {
  return a.anchor == b.anchor && a.shape == b.shape;
}
bool operator==(const Site& a, const Site& b) { return a.id == b.id; }
bool operator==(const Animal& a, const Animal& b) { return a.id == b.id; }

namespace {

struct Less {
  bool operator()(const Germ& a, const Germ& b) const {
    return std::tie(a.x.x(), a.x.y()) < std::tie(b.x.x(), b.x.y());
  }
  bool operator()(const Call& a, const Call& b) const {
    return std::tie(a.x, a.length) < std::tie(b.x, b.length);
  }
  bool operator()(const Contour& a, const Contour& b) const {
    return std::make_tuple(a.anchor.x(), a.anchor.y(), a.shape) <
           std::make_tuple(b.anchor.x(), b.anchor.y(), b.shape);
  }
  bool operator()(const Site& a, const Site& b) const { return a.id < b.id; }
  bool operator()(const Animal& a, const Animal& b) const { return a.id < b.id; }
  template <class A, class B>
  bool operator()(const A&, const B&) const {
    return false;
  }
};

std::size_t combine(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

bool individual_less(const Individual& a, const Individual& b) {
  if (a.index() != b.index()) {
    return a.index() < b.index();
  }
  return std::visit(Less{}, a, b);
}

std::string kind_name(const Individual& g) {
  static constexpr const char* kNames[] = {"germ", "call", "contour", "site", "animal"};
  return kNames[g.index()];
}

std::string individual_text(const Individual& g) {
  char buf[96];
  std::visit(
      [&buf](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Germ>) {
          std::snprintf(buf, sizeof buf, "germ %.17g %.17g", v.x.x(), v.x.y());
        } else if constexpr (std::is_same_v<T, Call>) {
          std::snprintf(buf, sizeof buf, "call %.17g %.17g", v.x, v.length);
        } else if constexpr (std::is_same_v<T, Contour>) {
          std::snprintf(buf, sizeof buf, "contour %d %d %u", v.anchor.x(), v.anchor.y(), v.shape);
        } else if constexpr (std::is_same_v<T, Site>) {
          std::snprintf(buf, sizeof buf, "site %u", v.id);
        } else {
          std::snprintf(buf, sizeof buf, "animal %u", v.id);
        }
      },
      g);
  return buf;
}

std::size_t IndividualHash::operator()(const Individual& g) const {
  std::size_t h = g.index();
  std::visit(
      [&h](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Germ>) {
          h = combine(h, std::hash<double>{}(v.x.x()));
          h = combine(h, std::hash<double>{}(v.x.y()));
        } else if constexpr (std::is_same_v<T, Call>) {
          h = combine(h, std::hash<double>{}(v.x));
          h = combine(h, std::hash<double>{}(v.length));
        } else if constexpr (std::is_same_v<T, Contour>) {
          h = combine(h, static_cast<std::size_t>(static_cast<std::uint32_t>(v.anchor.x())));
          h = combine(h, static_cast<std::size_t>(static_cast<std::uint32_t>(v.anchor.y())));
          h = combine(h, v.shape);
        } else {
          h = combine(h, v.id);
        }
      },
      g);
  return h;
}

std::size_t Configuration::count(const Individual& g) const {
  return static_cast<std::size_t>(std::count(items.begin(), items.end(), g));
}

void Configuration::canonicalize() {
  std::sort(items.begin(), items.end(), individual_less);
}

}  // namespace clansim
