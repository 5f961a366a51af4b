#ifndef CLANSIM_CONTOURS_HPP
#define CLANSIM_CONTOURS_HPP

#include <string>
#include <vector>

#include "clansim/model.hpp"

namespace clansim {

/// Unit edge of Z^2: horizontal from (x, y) to (x+1, y) or vertical from
/// (x, y) to (x, y+1).
struct Link {
  int x = 0;
  int y = 0;
  bool vertical = false;

  Eigen::Vector2i from() const { return {x, y}; }
  Eigen::Vector2i to() const { return vertical ? Eigen::Vector2i(x, y + 1) : Eigen::Vector2i(x + 1, y); }

  auto operator<=>(const Link&) const = default;
};

/// Contour shape in canonical position: its vertices have minimum x and y
/// equal to zero. Links and vertices are sorted.
struct ContourShape {
  std::vector<Link> links;
  std::vector<Eigen::Vector2i> vertices;
  int width = 0;
  int height = 0;

  std::size_t link_count() const { return links.size(); }
};

bool is_closed(const std::vector<Link>& links);
bool is_connected(const std::vector<Link>& links);

/// Translates `links` so that the minimal vertex coordinates are zero.
ContourShape canonical_shape(std::vector<Link> links);

/// Every contour shape with at most `cutoff` links, ordered by link count
/// and then lexicographically by link list. Empty for cutoff < 4.
/// Throws Error(TooLarge) for cutoff > 12.
std::vector<ContourShape> enumerate_shapes(int cutoff);

/// Number of fixed 8-connected cell sets (polyplets) by size, up to `max_cells`.
/// Exposed for testing the enumerator.
std::vector<std::size_t> count_polyplets(int max_cells);

/// e^{-beta |shape|}.
double contour_weight(const ContourShape& shape, double beta);

/// Low-temperature Ising contours of Z^2 with a size cutoff: Poisson
/// weights e^{-beta |gamma|}, exclusion through shared link endpoints.
class ContourModel final : public DiscreteModel {
public:
  ContourModel(double beta, int cutoff);

  std::string id() const override { return "ising_contours"; }

  bool incompatible(const Individual& g, const Individual& t) const override;
  double acceptance_prob(const Individual& g, std::span<const Individual> xi) const override;
  double size(const Individual& g) const override;
  double delta_psi() const override { return 1.0; }
  bool intersects(const Individual& g, const Window& region) const override;
  bool product_form() const override { return true; }
  double interaction_horizon() const override;

  double weight(const Individual& g) const override;
  std::vector<Individual> incompatible_with(const Individual& g) const override;
  std::vector<Individual> window_members(const Window& region) const override;
  std::vector<Individual> contained_in(const Window& box) const override;

  double beta() const { return beta_; }
  int cutoff() const { return cutoff_; }
  const std::vector<ContourShape>& shapes() const { return shapes_; }
  const ContourShape& shape(const Contour& c) const { return shapes_.at(c.shape); }

  /// Links of the anchored contour in absolute coordinates.
  std::vector<Link> links(const Contour& c) const;

  /// True iff no link of one shares an endpoint with a link of the other.
  bool compatible(const Contour& a, const Contour& b) const;

  /// Plain-text catalog, one shape per line.
  std::string catalog_text() const;

private:
  const Contour& check(const Individual& g) const;

  double beta_;
  int cutoff_;
  std::vector<ContourShape> shapes_;
  // For each shape: (other shape, relative anchor) pairs that are incompatible.
  std::vector<std::vector<Contour>> neighbor_offsets_;
};

/// All anchored contours of size <= cutoff with a link in `region`, each once,
/// sorted by individual order.
std::vector<Contour> enumerate_contours(int cutoff, const Eigen::AlignedBox2d& region);

}  // namespace clansim

#endif  // CLANSIM_CONTOURS_HPP
