#include "clansim/contours.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "clansim/error.hpp"

namespace clansim {
namespace {

using Cell = Eigen::Vector2i;

bool vec_less(const Eigen::Vector2i& a, const Eigen::Vector2i& b) {
  return a.x() != b.x() ? a.x() < b.x() : a.y() < b.y();
}

std::vector<Eigen::Vector2i> vertices_of(const std::vector<Link>& links) {
  std::vector<Eigen::Vector2i> v;
  v.reserve(2 * links.size());
  for (const auto& l : links) {
    v.push_back(l.from());
    v.push_back(l.to());
  }
  std::sort(v.begin(), v.end(), vec_less);
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

/// Redelmeier enumeration of fixed 8-connected cell sets.
class PolypletWalker {
public:
  PolypletWalker(int max_cells, std::function<void(const std::vector<Cell>&)> emit)
      : n_(max_cells), span_(2 * max_cells + 1), reached_(span_ * (max_cells + 1), false),
        emit_(std::move(emit)) {}

  void run() {
    if (n_ < 1) {
      return;
    }
    mark({0, 0}, true);
    recurse({Cell(0, 0)});
  }

private:
  bool valid(const Cell& c) const {
    return (c.y() > 0 || (c.y() == 0 && c.x() >= 0)) && std::abs(c.x()) <= n_ && c.y() <= n_;
  }
  std::size_t slot(const Cell& c) const {
    return static_cast<std::size_t>(c.y()) * span_ + static_cast<std::size_t>(c.x() + n_);
  }
  void mark(const Cell& c, bool on) { reached_[slot(c)] = on; }

  void recurse(std::vector<Cell> untried) {
    while (!untried.empty()) {
      const Cell c = untried.back();
      untried.pop_back();
      poly_.push_back(c);
      emit_(poly_);
      if (static_cast<int>(poly_.size()) < n_) {
        std::vector<Cell> added;
        auto next = untried;
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const Cell nb(c.x() + dx, c.y() + dy);
            if ((dx != 0 || dy != 0) && valid(nb) && !reached_[slot(nb)]) {
              mark(nb, true);
              added.push_back(nb);
              next.push_back(nb);
            }
          }
        }
        recurse(std::move(next));
        for (const auto& a : added) {
          mark(a, false);
        }
      }
      poly_.pop_back();
    }
  }

  int n_;
  std::size_t span_;
  std::vector<bool> reached_;
  std::vector<Cell> poly_;
  std::function<void(const std::vector<Cell>&)> emit_;
};

/// Edges with odd multiplicity among the cell boundaries.
std::vector<Link> boundary(const std::vector<Cell>& cells) {
  std::map<Link, int> count;
  for (const auto& c : cells) {
    ++count[Link{c.x(), c.y(), false}];
    ++count[Link{c.x(), c.y() + 1, false}];
    ++count[Link{c.x(), c.y(), true}];
    ++count[Link{c.x() + 1, c.y(), true}];
  }
  std::vector<Link> out;
  for (const auto& [l, k] : count) {
    if (k % 2 == 1) {
      out.push_back(l);
    }
  }
  return out;
}

bool sorted_intersect(const std::vector<Eigen::Vector2i>& a, const Eigen::Vector2i& da,
                      const std::vector<Eigen::Vector2i>& b, const Eigen::Vector2i& db) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    const Eigen::Vector2i u = *i + da;
    const Eigen::Vector2i v = *j + db;
    if (u == v) {
      return true;
    }
    if (vec_less(u, v)) {
      ++i;
    } else {
      ++j;
    }
  }
  return false;
}

}  // namespace

bool is_closed(const std::vector<Link>& links) {
  std::map<std::pair<int, int>, int> degree;
  for (const auto& l : links) {
    ++degree[{l.from().x(), l.from().y()}];
    ++degree[{l.to().x(), l.to().y()}];
  }
  return std::all_of(degree.begin(), degree.end(), [](const auto& kv) { return kv.second % 2 == 0; });
}

bool is_connected(const std::vector<Link>& links) {
  if (links.empty()) {
    return false;
  }
  std::vector<bool> seen(links.size(), false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  std::size_t visited = 1;
  auto touch = [](const Link& a, const Link& b) {
    return a.from() == b.from() || a.from() == b.to() || a.to() == b.from() || a.to() == b.to();
  };
  while (!stack.empty()) {
    const auto i = stack.back();
    stack.pop_back();
    for (std::size_t j = 0; j < links.size(); ++j) {
      if (!seen[j] && touch(links[i], links[j])) {
        seen[j] = true;
        ++visited;
        stack.push_back(j);
      }
    }
  }
  return visited == links.size();
}

ContourShape canonical_shape(std::vector<Link> links) {
  ContourShape s;
  auto verts = vertices_of(links);
  if (verts.empty()) {
    return s;
  }
  Eigen::Vector2i lo = verts.front();
  Eigen::Vector2i hi = verts.front();
  for (const auto& v : verts) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  for (auto& l : links) {
    l.x -= lo.x();
    l.y -= lo.y();
  }
  std::sort(links.begin(), links.end());
  s.links = std::move(links);
  s.vertices = vertices_of(s.links);
  s.width = hi.x() - lo.x();
  s.height = hi.y() - lo.y();
  return s;
}

std::vector<std::size_t> count_polyplets(int max_cells) {
  std::vector<std::size_t> counts(static_cast<std::size_t>(std::max(max_cells, 0)) + 1, 0);
  PolypletWalker(max_cells, [&](const std::vector<Cell>& p) { ++counts[p.size()]; }).run();
  return counts;
}

std::vector<ContourShape> enumerate_shapes(int cutoff) {
  if (cutoff < 4) {
    return {};
  }
  if (cutoff > 12) {
    throw Error(ErrorKind::TooLarge, "contour cutoff above 12 is not supported");
  }
  // A closed link set is the mod-2 boundary of a unique finite cell set; when
  // the link set is connected the cells are 8-connected, and the discrete
  // isoperimetric inequality bounds their number by cutoff^2 / 16.
  const int max_cells = cutoff * cutoff / 16;
  std::set<std::vector<Link>> seen;
  std::vector<ContourShape> shapes;
  PolypletWalker(max_cells, [&](const std::vector<Cell>& cells) {
    auto links = boundary(cells);
    if (links.empty() || static_cast<int>(links.size()) > cutoff || !is_connected(links)) {
      return;
    }
    auto shape = canonical_shape(std::move(links));
    if (seen.insert(shape.links).second) {
      shapes.push_back(std::move(shape));
    }
  }).run();
  std::sort(shapes.begin(), shapes.end(), [](const ContourShape& a, const ContourShape& b) {
    if (a.links.size() != b.links.size()) {
      return a.links.size() < b.links.size();
    }
    return a.links < b.links;
  });
  return shapes;
}

double contour_weight(const ContourShape& shape, double beta) {
  if (!(beta > 0.0)) {
    throw Error(ErrorKind::InvalidParameter, "contour weight: beta must be positive");
  }
  return std::exp(-beta * static_cast<double>(shape.link_count()));
}

ContourModel::ContourModel(double beta, int cutoff)
    : beta_(beta), cutoff_(cutoff), shapes_(enumerate_shapes(cutoff)) {
  if (!(beta > 0.0)) {
    throw Error(ErrorKind::InvalidParameter, "contour model: beta must be positive");
  }
  if (shapes_.empty()) {
    throw Error(ErrorKind::InvalidParameter, "contour model: cutoff must be at least 4");
  }
  neighbor_offsets_.resize(shapes_.size());
  for (std::uint32_t i = 0; i < shapes_.size(); ++i) {
    std::vector<Contour> offsets;
    for (std::uint32_t j = 0; j < shapes_.size(); ++j) {
      for (const auto& v : shapes_[i].vertices) {
        for (const auto& u : shapes_[j].vertices) {
          offsets.push_back(Contour{v - u, j});
        }
      }
    }
    std::sort(offsets.begin(), offsets.end(), [](const Contour& a, const Contour& b) {
      return individual_less(a, b);
    });
    offsets.erase(std::unique(offsets.begin(), offsets.end()), offsets.end());
    neighbor_offsets_[i] = std::move(offsets);
  }
}

const Contour& ContourModel::check(const Individual& g) const {
  const auto* c = std::get_if<Contour>(&g);
  if (c == nullptr || c->shape >= shapes_.size()) {
    reject_kind(g);
  }
  return *c;
}

bool ContourModel::compatible(const Contour& a, const Contour& b) const {
  return !sorted_intersect(shapes_.at(a.shape).vertices, a.anchor, shapes_.at(b.shape).vertices,
                           b.anchor);
}

bool ContourModel::incompatible(const Individual& g, const Individual& t) const {
  return !compatible(check(g), check(t));
}

double ContourModel::acceptance_prob(const Individual& g, std::span<const Individual> xi) const {
  const auto& c = check(g);
  for (const auto& t : xi) {
    if (!compatible(c, check(t))) {
      return 0.0;
    }
  }
  return 1.0;
}

double ContourModel::size(const Individual& g) const {
  return static_cast<double>(shapes_[check(g).shape].link_count());
}

double ContourModel::weight(const Individual& g) const {
  return contour_weight(shapes_[check(g).shape], beta_);
}

double ContourModel::interaction_horizon() const {
  int extent = 0;
  for (const auto& s : shapes_) {
    extent = std::max({extent, s.width, s.height});
  }
  return extent;
}

std::vector<Link> ContourModel::links(const Contour& c) const {
  auto out = shapes_.at(c.shape).links;
  for (auto& l : out) {
    l.x += c.anchor.x();
    l.y += c.anchor.y();
  }
  return out;
}

namespace {

const Eigen::AlignedBox2d& box_of(const Window& region) {
  const auto* b = std::get_if<BoxWindow>(&region);
  if (b == nullptr) {
    throw Error(ErrorKind::InvalidParameter, "contour windows are boxes");
  }
  if (!b->box.min().allFinite() || !b->box.max().allFinite()) {
    throw Error(ErrorKind::Unbounded, "contour window must be bounded");
  }
  return b->box;
}

bool link_in(const Link& l, const Eigen::Vector2i& anchor, const Eigen::AlignedBox2d& box) {
  return box.contains((l.from() + anchor).cast<double>()) &&
         box.contains((l.to() + anchor).cast<double>());
}

}  // namespace

bool ContourModel::intersects(const Individual& g, const Window& region) const {
  const auto& c = check(g);
  const auto& box = box_of(region);
  return std::any_of(shapes_[c.shape].links.begin(), shapes_[c.shape].links.end(),
                     [&](const Link& l) { return link_in(l, c.anchor, box); });
}

std::vector<Individual> ContourModel::incompatible_with(const Individual& g) const {
  const auto& c = check(g);
  std::vector<Individual> out;
  out.reserve(neighbor_offsets_[c.shape].size());
  for (const auto& off : neighbor_offsets_[c.shape]) {
    out.emplace_back(Contour{c.anchor + off.anchor, off.shape});
  }
  return out;
}

std::vector<Individual> ContourModel::window_members(const Window& region) const {
  const auto& box = box_of(region);
  std::vector<Contour> found;
  for (std::uint32_t s = 0; s < shapes_.size(); ++s) {
    for (const auto& l : shapes_[s].links) {
      const Eigen::Vector2i a = l.from();
      const Eigen::Vector2i b = l.to();
      const int x0 = static_cast<int>(std::ceil(box.min().x() - std::min(a.x(), b.x())));
      const int x1 = static_cast<int>(std::floor(box.max().x() - std::max(a.x(), b.x())));
      const int y0 = static_cast<int>(std::ceil(box.min().y() - std::min(a.y(), b.y())));
      const int y1 = static_cast<int>(std::floor(box.max().y() - std::max(a.y(), b.y())));
      for (int x = x0; x <= x1; ++x) {
        for (int y = y0; y <= y1; ++y) {
          found.push_back(Contour{{x, y}, s});
        }
      }
    }
  }
  std::sort(found.begin(), found.end(),
            [](const Contour& a, const Contour& b) { return individual_less(a, b); });
  found.erase(std::unique(found.begin(), found.end()), found.end());
  return {found.begin(), found.end()};
}

std::vector<Individual> ContourModel::contained_in(const Window& region) const {
  const auto& box = box_of(region);
  std::vector<Contour> found;
  for (std::uint32_t s = 0; s < shapes_.size(); ++s) {
    const int x0 = static_cast<int>(std::ceil(box.min().x()));
    const int y0 = static_cast<int>(std::ceil(box.min().y()));
    const int x1 = static_cast<int>(std::floor(box.max().x())) - shapes_[s].width;
    const int y1 = static_cast<int>(std::floor(box.max().y())) - shapes_[s].height;
    for (int x = x0; x <= x1; ++x) {
      for (int y = y0; y <= y1; ++y) {
        found.push_back(Contour{{x, y}, s});
      }
    }
  }
  std::sort(found.begin(), found.end(),
            [](const Contour& a, const Contour& b) { return individual_less(a, b); });
  return {found.begin(), found.end()};
}

std::string ContourModel::catalog_text() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < shapes_.size(); ++i) {
    out << "shape " << i << " links " << shapes_[i].link_count() << ":";
    for (const auto& l : shapes_[i].links) {
      out << ' ' << l.x << ',' << l.y << (l.vertical ? 'V' : 'H');
    }
    out << '\n';
  }
  return out.str();
}

std::vector<Contour> enumerate_contours(int cutoff, const Eigen::AlignedBox2d& region) {
  if (cutoff < 4) {
    return {};
  }
  const ContourModel model(1.0, cutoff);
  std::vector<Contour> out;
  for (const auto& g : model.window_members(BoxWindow{region})) {
    out.push_back(std::get<Contour>(g));
  }
  return out;
}

}  // namespace clansim
