#include "clansim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "clansim/error.hpp"

namespace clansim {
namespace {

using Interval = std::pair<double, double>;

double union_length(std::vector<Interval>& parts) {
  std::sort(parts.begin(), parts.end());
  double total = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  bool open = false;
  for (const auto& [a, b] : parts) {
    if (b <= a) {
      continue;
    }
    if (!open || a > hi) {
      if (open) {
        total += hi - lo;
      }
      lo = a;
      hi = b;
      open = true;
    } else {
      hi = std::max(hi, b);
    }
  }
  if (open) {
    total += hi - lo;
  }
  return total;
}

/// Horizontal chord of the grain centred at c at height y, as [lo, hi].
Interval chord(const Eigen::Vector2d& c, double y, const GrainGeometry& g) {
  if (g.shape == GrainShape::Square) {
    const double half = 0.5 * g.size;
    if (std::abs(y - c.y()) > half) {
      return {0.0, 0.0};
    }
    return {c.x() - half, c.x() + half};
  }
  const double dy = y - c.y();
  const double h2 = g.size * g.size - dy * dy;
  if (h2 <= 0.0) {
    return {0.0, 0.0};
  }
  const double h = std::sqrt(h2);
  return {c.x() - h, c.x() + h};
}

// Area of a union of equal discs by Green's theorem over the boundary arcs.
double disc_union_area(std::vector<Eigen::Vector2d> centers, double r) {
  std::sort(centers.begin(), centers.end(), [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  centers.erase(std::unique(centers.begin(), centers.end()), centers.end());
  const double two_pi = 2.0 * std::numbers::pi;
  double twice_area = 0.0;
  for (std::size_t i = 0; i < centers.size(); ++i) {
    const Eigen::Vector2d& c = centers[i];
    std::vector<Interval> covered;
    for (std::size_t j = 0; j < centers.size(); ++j) {
      if (j == i) {
        continue;
      }
      const Eigen::Vector2d delta = centers[j] - c;
      const double d = delta.norm();
      if (d >= 2.0 * r) {
        continue;
      }
      const double mid = std::atan2(delta.y(), delta.x());
      const double half = std::acos(d / (2.0 * r));
      double lo = std::fmod(mid - half + 2.0 * two_pi, two_pi);
      double hi = lo + 2.0 * half;
      if (hi > two_pi) {
        covered.emplace_back(lo, two_pi);
        covered.emplace_back(0.0, hi - two_pi);
      } else {
        covered.emplace_back(lo, hi);
      }
    }
    std::sort(covered.begin(), covered.end());
    auto arc = [&](double a, double b) {
      if (b <= a) {
        return;
      }
      twice_area += r * r * (b - a) + c.x() * r * (std::sin(b) - std::sin(a)) -
                    c.y() * r * (std::cos(b) - std::cos(a));
    };
    double at = 0.0;
    for (const auto& [lo, hi] : covered) {
      arc(at, lo);
      at = std::max(at, hi);
    }
    arc(at, two_pi);
  }
  return 0.5 * twice_area;
}

}  // namespace

GrainGeometry GrainGeometry::disc(double radius) {
  if (!(radius > 0.0)) {
    throw Error(ErrorKind::InvalidParameter, "grain radius must be positive");
  }
  return {GrainShape::Disc, radius};
}

GrainGeometry GrainGeometry::square(double side) {
  if (!(side > 0.0)) {
    throw Error(ErrorKind::InvalidParameter, "grain side must be positive");
  }
  return {GrainShape::Square, side};
}

double GrainGeometry::content() const {
  return shape == GrainShape::Disc ? std::numbers::pi * size * size : size * size;
}

double GrainGeometry::dilation_content() const {
  return shape == GrainShape::Disc ? 4.0 * std::numbers::pi * size * size : 4.0 * size * size;
}

double GrainGeometry::reach() const { return shape == GrainShape::Disc ? size : 0.5 * size; }

bool GrainGeometry::overlaps(const Eigen::Vector2d& x, const Eigen::Vector2d& y) const {
  if (shape == GrainShape::Disc) {
    return (x - y).squaredNorm() <= 4.0 * size * size;
  }
  return (x - y).cwiseAbs().maxCoeff() <= size;
}

bool GrainGeometry::meets(const Eigen::Vector2d& x, const Eigen::AlignedBox2d& box) const {
  if (shape == GrainShape::Disc) {
    return box.exteriorDistance(x) <= size;
  }
  const Eigen::Vector2d half = Eigen::Vector2d::Constant(0.5 * size);
  return box.intersects(Eigen::AlignedBox2d(x - half, x + half));
}

double GrainGeometry::dilated_box_content(const Eigen::AlignedBox2d& box) const {
  const Eigen::Vector2d side = box.sizes();
  if (shape == GrainShape::Disc) {
    return side.x() * side.y() + 2.0 * size * (side.x() + side.y()) +
           std::numbers::pi * size * size;
  }
  return (side.x() + size) * (side.y() + size);
}

double uncovered_content_exact(const Eigen::Vector2d& x, std::span<const Eigen::Vector2d> xi,
                               const GrainGeometry& grain) {
  if (grain.shape == GrainShape::Square) {
    const double half = 0.5 * grain.size;
    const Eigen::AlignedBox2d own(x.array() - half, x.array() + half);
    std::vector<Eigen::AlignedBox2d> cover;
    std::vector<double> xs{own.min().x(), own.max().x()};
    std::vector<double> ys{own.min().y(), own.max().y()};
    for (const auto& y : xi) {
      const Eigen::AlignedBox2d other(y.array() - half, y.array() + half);
      const auto cut = own.intersection(other);
      if (!cut.isEmpty() && cut.volume() > 0.0) {
        cover.push_back(cut);
        xs.push_back(cut.min().x());
        xs.push_back(cut.max().x());
        ys.push_back(cut.min().y());
        ys.push_back(cut.max().y());
      }
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
    double covered = 0.0;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
      for (std::size_t j = 0; j + 1 < ys.size(); ++j) {
        const Eigen::Vector2d mid(0.5 * (xs[i] + xs[i + 1]), 0.5 * (ys[j] + ys[j + 1]));
        if (std::any_of(cover.begin(), cover.end(),
                        [&](const Eigen::AlignedBox2d& b) { return b.contains(mid); })) {
          covered += (xs[i + 1] - xs[i]) * (ys[j + 1] - ys[j]);
        }
      }
    }
    return std::max(0.0, grain.content() - covered);
  }
  const double r = grain.size;
  std::vector<Eigen::Vector2d> near;
  for (const auto& y : xi) {
    if ((x - y).norm() < 2.0 * r) {
      near.push_back(y);
    }
  }
  if (near.size() > 2) {
    throw Error(ErrorKind::ContractViolation,
                "closed-form uncovered content handles at most two overlapping discs");
  }
  if (near.empty()) {
    return grain.content();
  }
  const double others = disc_union_area(near, r);
  near.push_back(x);
  return std::max(0.0, disc_union_area(near, r) - others);
}

double uncovered_content_quadrature(const Eigen::Vector2d& x, std::span<const Eigen::Vector2d> xi,
                                    const GrainGeometry& grain) {
  std::vector<Eigen::Vector2d> near;
  for (const auto& y : xi) {
    if (grain.overlaps(x, y)) {
      near.push_back(y);
    }
  }
  const double reach = grain.reach();
  const double y_lo = x.y() - reach;
  const double y_hi = x.y() + reach;
  std::vector<double> cuts{y_lo, y_hi};
  auto add_cut = [&](double y) {
    if (y > y_lo && y < y_hi) {
      cuts.push_back(y);
    }
  };
  std::vector<Eigen::Vector2d> centres{x};
  centres.insert(centres.end(), near.begin(), near.end());
  for (std::size_t i = 0; i < centres.size(); ++i) {
    add_cut(centres[i].y() - reach);
    add_cut(centres[i].y() + reach);
    if (grain.shape == GrainShape::Disc) {
      for (std::size_t j = i + 1; j < centres.size(); ++j) {
        const Eigen::Vector2d delta = centres[j] - centres[i];
        const double d = delta.norm();
        if (d <= 0.0 || d >= 2.0 * reach) {
          continue;
        }
        const Eigen::Vector2d mid = 0.5 * (centres[i] + centres[j]);
        const double h = std::sqrt(reach * reach - 0.25 * d * d);
        const Eigen::Vector2d perp(-delta.y() / d, delta.x() / d);
        add_cut(mid.y() + h * perp.y());
        add_cut(mid.y() - h * perp.y());
      }
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  auto slice = [&](double y) {
    const auto own = chord(x, y, grain);
    if (own.second <= own.first) {
      return 0.0;
    }
    std::vector<Interval> parts;
    for (const auto& c : near) {
      const auto other = chord(c, y, grain);
      parts.emplace_back(std::max(other.first, own.first), std::min(other.second, own.second));
    }
    return (own.second - own.first) - union_length(parts);
  };

  boost::math::quadrature::tanh_sinh<double> integrator;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] - cuts[i] <= 0.0) {
      continue;
    }
    total += integrator.integrate(slice, cuts[i], cuts[i + 1], 1e-12);
  }
  return std::max(0.0, total);
}

double uncovered_content(const Eigen::Vector2d& x, std::span<const Eigen::Vector2d> xi,
                         const GrainGeometry& grain) {
  if (grain.shape == GrainShape::Square) {
    return uncovered_content_exact(x, xi, grain);
  }
  int overlapping = 0;
  for (const auto& y : xi) {
    if ((x - y).norm() < 2.0 * grain.size) {
      ++overlapping;
    }
  }
  if (overlapping <= 2) {
    return uncovered_content_exact(x, xi, grain);
  }
  return uncovered_content_quadrature(x, xi, grain);
}

}  // namespace clansim
