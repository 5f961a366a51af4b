#ifndef CLANSIM_RANDOM_CLUSTER_HPP
#define CLANSIM_RANDOM_CLUSTER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "clansim/model.hpp"

namespace clansim {

/// Nearest-neighbour bonds of an nx-by-ny grid of sites, at most 3x3 sites.
class BondGrid {
public:
  BondGrid(int nx, int ny);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int site_count() const { return nx_ * ny_; }
  int bond_count() const { return static_cast<int>(ends_.size()); }

  /// Site indices (row-major) of both ends of bond b.
  std::pair<int, int> ends(int b) const { return ends_.at(static_cast<std::size_t>(b)); }
  Eigen::Vector2i site_position(int s) const { return {s % nx_, s / nx_}; }

  /// Bitmask of sites touched by the bonds in `bonds`.
  std::uint32_t vertex_mask(std::uint32_t bonds) const;
  bool connected(std::uint32_t bonds) const;

private:
  int nx_;
  int ny_;
  std::vector<std::pair<int, int>> ends_;
};

/// Connected, nonempty bond set.
struct BondAnimal {
  std::uint32_t bonds = 0;
  int bond_count = 0;    // B
  int vertex_count = 0;  // V
};

/// Bond configuration: bit b set iff bond b is open.
struct BondConfig {
  std::uint32_t open = 0;

  int open_count() const;                         // O
  int closed_count(const BondGrid& grid) const;   // C
  int cluster_count(const BondGrid& grid) const;  // L, isolated sites included
};

/// (p/(1-p))^B (1/q)^(V-1). Throws on p outside (0,1) or q <= 0.
double rc_weight(const BondAnimal& animal, double p, double q);

/// Unnormalized Fortuin-Kasteleyn weight p^O (1-p)^C q^L.
double rc_config_weight(const BondConfig& zeta, const BondGrid& grid, double p, double q);

/// Maximal connected components of the open bonds.
std::vector<BondAnimal> rc_project(const BondConfig& zeta, const BondGrid& grid);

/// Union of vertex-disjoint animals. Throws Error(InvalidIndividual) when two
/// animals share a site.
BondConfig rc_reassemble(const std::vector<BondAnimal>& animals);

/// Random-cluster model in its animal representation: individuals are bond
/// animals of the grid, incompatible when they share a site.
class RandomClusterModel final : public DiscreteModel {
public:
  RandomClusterModel(int nx, int ny, double p, double q);

  std::string id() const override { return "random_cluster"; }

  bool incompatible(const Individual& g, const Individual& t) const override;
  double acceptance_prob(const Individual& g, std::span<const Individual> xi) const override;
  /// Bond count B.
  double size(const Individual& g) const override;
  double delta_psi() const override { return 1.0; }
  bool intersects(const Individual& g, const Window& region) const override;
  bool product_form() const override { return true; }
  double interaction_horizon() const override { return 0.0; }

  double weight(const Individual& g) const override;
  std::vector<Individual> incompatible_with(const Individual& g) const override;
  std::vector<Individual> window_members(const Window& region) const override;
  std::vector<Individual> contained_in(const Window& box) const override;

  const BondGrid& grid() const { return grid_; }
  const std::vector<BondAnimal>& animals() const { return animals_; }
  const BondAnimal& animal(const Animal& a) const { return animals_.at(a.id); }
  /// Catalog index of a connected bond set; throws when not an animal.
  Animal animal_of(std::uint32_t bonds) const;
  double p() const { return p_; }
  double q() const { return q_; }

private:
  std::uint32_t check(const Individual& g) const;

  BondGrid grid_;
  double p_;
  double q_;
  std::vector<BondAnimal> animals_;
  std::vector<std::uint32_t> vertex_masks_;
};

}  // namespace clansim

#endif  // CLANSIM_RANDOM_CLUSTER_HPP
