#include "clansim/random_cluster.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "clansim/error.hpp"

namespace clansim {

BondGrid::BondGrid(int nx, int ny) : nx_(nx), ny_(ny) {
  if (nx < 1 || ny < 1 || nx > 3 || ny > 3 || nx * ny < 2) {
    throw Error(ErrorKind::TooLarge, "random-cluster grid must have 2..9 sites within 3x3");
  }
  for (int y = 0; y < ny; ++y) {
    for (int x = 0; x < nx; ++x) {
      const int s = y * nx + x;
      if (x + 1 < nx) {
        ends_.emplace_back(s, s + 1);
      }
      if (y + 1 < ny) {
        ends_.emplace_back(s, s + nx);
      }
    }
  }
}

std::uint32_t BondGrid::vertex_mask(std::uint32_t bonds) const {
  std::uint32_t mask = 0;
  for (int b = 0; b < bond_count(); ++b) {
    if (bonds & (1u << b)) {
      mask |= (1u << ends_[static_cast<std::size_t>(b)].first) |
              (1u << ends_[static_cast<std::size_t>(b)].second);
    }
  }
  return mask;
}

bool BondGrid::connected(std::uint32_t bonds) const {
  if (bonds == 0) {
    return false;
  }
  std::uint32_t reached = bonds & (~bonds + 1);  // lowest bond
  for (bool grew = true; grew;) {
    grew = false;
    const auto verts = vertex_mask(reached);
    for (int b = 0; b < bond_count(); ++b) {
      const auto bit = 1u << b;
      if ((bonds & bit) && !(reached & bit)) {
        const auto [u, v] = ends(b);
        if (verts & ((1u << u) | (1u << v))) {
          reached |= bit;
          grew = true;
        }
      }
    }
  }
  return reached == bonds;
}

int BondConfig::open_count() const { return std::popcount(open); }

int BondConfig::closed_count(const BondGrid& grid) const {
  return grid.bond_count() - open_count();
}

int BondConfig::cluster_count(const BondGrid& grid) const {
  std::vector<int> parent(static_cast<std::size_t>(grid.site_count()));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int s) {
    while (parent[static_cast<std::size_t>(s)] != s) {
      s = parent[static_cast<std::size_t>(s)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(s)])];
    }
    return s;
  };
  int clusters = grid.site_count();
  for (int b = 0; b < grid.bond_count(); ++b) {
    if (open & (1u << b)) {
      const auto [u, v] = grid.ends(b);
      const int ru = find(u);
      const int rv = find(v);
      if (ru != rv) {
        parent[static_cast<std::size_t>(ru)] = rv;
        --clusters;
      }
    }
  }
  return clusters;
}

double rc_weight(const BondAnimal& animal, double p, double q) {
  if (!(p > 0.0 && p < 1.0)) {
    throw Error(ErrorKind::InvalidParameter, "random cluster: p must lie in (0,1)");
  }
  if (!(q > 0.0)) {
    throw Error(ErrorKind::InvalidParameter, "random cluster: q must be positive");
  }
  return std::pow(p / (1.0 - p), animal.bond_count) * std::pow(1.0 / q, animal.vertex_count - 1);
}

double rc_config_weight(const BondConfig& zeta, const BondGrid& grid, double p, double q) {
  return std::pow(p, zeta.open_count()) * std::pow(1.0 - p, zeta.closed_count(grid)) *
         std::pow(q, zeta.cluster_count(grid));
}

std::vector<BondAnimal> rc_project(const BondConfig& zeta, const BondGrid& grid) {
  std::vector<BondAnimal> out;
  std::uint32_t left = zeta.open;
  while (left != 0) {
    std::uint32_t comp = left & (~left + 1);
    for (bool grew = true; grew;) {
      grew = false;
      const auto verts = grid.vertex_mask(comp);
      for (int b = 0; b < grid.bond_count(); ++b) {
        const auto bit = 1u << b;
        if ((left & bit) && !(comp & bit)) {
          const auto [u, v] = grid.ends(b);
          if (verts & ((1u << u) | (1u << v))) {
            comp |= bit;
            grew = true;
          }
        }
      }
    }
    left &= ~comp;
    out.push_back(BondAnimal{comp, std::popcount(comp), std::popcount(grid.vertex_mask(comp))});
  }
  return out;
}

BondConfig rc_reassemble(const std::vector<BondAnimal>& animals) {
  BondConfig zeta;
  for (const auto& a : animals) {
    if (zeta.open & a.bonds) {
      throw Error(ErrorKind::InvalidIndividual, "reassembly: animals overlap");
    }
    zeta.open |= a.bonds;
  }
  return zeta;
}

RandomClusterModel::RandomClusterModel(int nx, int ny, double p, double q)
    : grid_(nx, ny), p_(p), q_(q) {
  if (!(p > 0.0 && p < 1.0)) {
    throw Error(ErrorKind::InvalidParameter, "random cluster: p must lie in (0,1)");
  }
  if (!(q > 0.0)) {
    throw Error(ErrorKind::InvalidParameter, "random cluster: q must be positive");
  }
  const std::uint32_t all = (1u << grid_.bond_count()) - 1;
  for (std::uint32_t bonds = 1; bonds <= all; ++bonds) {
    if (grid_.connected(bonds)) {
      const auto verts = grid_.vertex_mask(bonds);
      animals_.push_back(BondAnimal{bonds, std::popcount(bonds), std::popcount(verts)});
      vertex_masks_.push_back(verts);
    }
  }
}

std::uint32_t RandomClusterModel::check(const Individual& g) const {
  const auto* a = std::get_if<Animal>(&g);
  if (a == nullptr || a->id >= animals_.size()) {
    reject_kind(g);
  }
  return a->id;
}

Animal RandomClusterModel::animal_of(std::uint32_t bonds) const {
  const auto it = std::find_if(animals_.begin(), animals_.end(),
                               [bonds](const BondAnimal& a) { return a.bonds == bonds; });
  if (it == animals_.end()) {
    throw Error(ErrorKind::InvalidIndividual, "bond set is not an animal of this grid");
  }
  return Animal{static_cast<std::uint32_t>(it - animals_.begin())};
}

bool RandomClusterModel::incompatible(const Individual& g, const Individual& t) const {
  return (vertex_masks_[check(g)] & vertex_masks_[check(t)]) != 0;
}

double RandomClusterModel::acceptance_prob(const Individual& g,
                                           std::span<const Individual> xi) const {
  const auto mask = vertex_masks_[check(g)];
  for (const auto& t : xi) {
    if (mask & vertex_masks_[check(t)]) {
      return 0.0;
    }
  }
  return 1.0;
}

double RandomClusterModel::size(const Individual& g) const {
  return animals_[check(g)].bond_count;
}

double RandomClusterModel::weight(const Individual& g) const {
  return rc_weight(animals_[check(g)], p_, q_);
}

bool RandomClusterModel::intersects(const Individual& g, const Window& region) const {
  const auto i = check(g);
  if (std::holds_alternative<WholeWindow>(region)) {
    return true;
  }
  if (const auto* b = std::get_if<BoxWindow>(&region)) {
    for (int s = 0; s < grid_.site_count(); ++s) {
      if ((vertex_masks_[i] & (1u << s)) && b->box.contains(grid_.site_position(s).cast<double>())) {
        return true;
      }
    }
    return false;
  }
  throw Error(ErrorKind::InvalidParameter, "random-cluster windows are boxes or the whole grid");
}

std::vector<Individual> RandomClusterModel::incompatible_with(const Individual& g) const {
  const auto mask = vertex_masks_[check(g)];
  std::vector<Individual> out;
  for (std::uint32_t j = 0; j < animals_.size(); ++j) {
    if (mask & vertex_masks_[j]) {
      out.emplace_back(Animal{j});
    }
  }
  return out;
}

std::vector<Individual> RandomClusterModel::window_members(const Window& region) const {
  std::vector<Individual> out;
  for (std::uint32_t j = 0; j < animals_.size(); ++j) {
    if (intersects(Animal{j}, region)) {
      out.emplace_back(Animal{j});
    }
  }
  return out;
}

std::vector<Individual> RandomClusterModel::contained_in(const Window& box) const {
  if (std::holds_alternative<WholeWindow>(box)) {
    return window_members(box);
  }
  const auto* b = std::get_if<BoxWindow>(&box);
  if (b == nullptr) {
    throw Error(ErrorKind::InvalidParameter, "random-cluster windows are boxes or the whole grid");
  }
  std::vector<Individual> out;
  for (std::uint32_t j = 0; j < animals_.size(); ++j) {
    bool inside = true;
    for (int s = 0; s < grid_.site_count(); ++s) {
      if ((vertex_masks_[j] & (1u << s)) && !b->box.contains(grid_.site_position(s).cast<double>())) {
        inside = false;
      }
    }
    if (inside) {
      out.emplace_back(Animal{j});
    }
  }
  return out;
}

}  // namespace clansim
