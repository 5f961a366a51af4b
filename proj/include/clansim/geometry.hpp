#ifndef CLANSIM_GEOMETRY_HPP
#define CLANSIM_GEOMETRY_HPP

#include <span>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace clansim {

enum class GrainShape { Disc, Square };

/// Fixed planar grain centred at the germ: a disc of radius `size` or an
/// axis-aligned square of side `size`.
struct GrainGeometry {
  GrainShape shape = GrainShape::Disc;
  double size = 1.0;

  static GrainGeometry disc(double radius);
  static GrainGeometry square(double side);

  /// Lebesgue content m(G).
  double content() const;
  /// Content of the dilation {x : (x+G) meets G}: 4 pi r^2 or (2s)^2.
  double dilation_content() const;
  /// Largest coordinate offset between a germ and a point of its grain.
  double reach() const;
  /// True iff x+G and y+G intersect.
  bool overlaps(const Eigen::Vector2d& x, const Eigen::Vector2d& y) const;
  /// True iff x+G meets the closed box.
  bool meets(const Eigen::Vector2d& x, const Eigen::AlignedBox2d& box) const;
  /// Content of (box dilated by G).
  double dilated_box_content(const Eigen::AlignedBox2d& box) const;
};

/// m((x+G) \ (xi (+) G)): exact geometry for squares and for discs with at most
/// two overlapping neighbours, quadrature otherwise.
double uncovered_content(const Eigen::Vector2d& x, std::span<const Eigen::Vector2d> xi,
                         const GrainGeometry& grain);

/// Closed-form path: squares (any number of neighbours) or discs with at most
/// two neighbours overlapping x+G (boundary-arc integral of the disc union).
/// Throws Error(ContractViolation) otherwise.
double uncovered_content_exact(const Eigen::Vector2d& x, std::span<const Eigen::Vector2d> xi,
                               const GrainGeometry& grain);

/// Quadrature path: integrates the uncovered chord length over horizontal
/// slices, split at every height where the integrand has a kink. Absolute
/// tolerance 1e-9 m(G).
double uncovered_content_quadrature(const Eigen::Vector2d& x, std::span<const Eigen::Vector2d> xi,
                                    const GrainGeometry& grain);

}  // namespace clansim

#endif  // CLANSIM_GEOMETRY_HPP
