#ifndef CLANSIM_MODEL_HPP
#define CLANSIM_MODEL_HPP

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "clansim/individual.hpp"
#include "clansim/random.hpp"

namespace clansim {

/// Finite-volume family of individuals with its dominating intensity: the
/// free process of a bounded box draws births from here.
class FiniteFamily {
public:
  virtual ~FiniteFamily() = default;
  virtual double mass() const = 0;
  virtual Individual sample(RandomStream& s) const = 0;
};

/// A target birth-and-death process.
///
/// Births are attempted at the dominating intensity and accepted with
/// probability `acceptance_prob`; deaths happen at rate one. Implementations
/// are immutable after construction and may be shared across threads.
///
/// Every implementation guarantees:
///  - 0 <= acceptance_prob <= 1;
///  - acceptance_prob(g, xi) only depends on entries t of xi with
///    incompatible(g, t);
///  - size(g) >= 1.
class Model {
public:
  virtual ~Model() = default;

  virtual std::string id() const = 0;
  virtual bool is_discrete() const = 0;

  /// True iff the presence of `t` can change the birth rate of `g`.
  /// Throws Error(InvalidIndividual) when either kind does not belong here.
  virtual bool incompatible(const Individual& g, const Individual& t) const = 0;

  virtual double acceptance_prob(const Individual& g,
                                 std::span<const Individual> xi) const = 0;

  virtual double size(const Individual& g) const = 0;

  /// Supremum of the Radon-Nikodym ratio; the dominating intensity is this
  /// times the reference intensity.
  virtual double delta_psi() const = 0;

  /// Total dominating mass of the individuals intersecting `region`.
  /// Throws Error(Unbounded) on unbounded regions.
  virtual double dominating_mass(const Window& region) const = 0;

  virtual bool intersects(const Individual& g, const Window& region) const = 0;

  /// Acceptance has the exclusion product form prod [1 - I(g, t)].
  virtual bool product_form() const = 0;

  /// Free process of the individuals whose germ (continuous) or whole body
  /// (discrete) lies in `box`.
  virtual std::unique_ptr<FiniteFamily> finite_family(const Window& box) const = 0;

  /// Distance beyond which two individuals cannot be incompatible.
  virtual double interaction_horizon() const = 0;

  /// Dilates a window by the interaction horizon.
  Window dilate(const Window& region, double amount) const;

protected:
  [[noreturn]] void reject_kind(const Individual& g) const;
};

/// Countable family of individuals with explicit weights.
class DiscreteModel : public Model {
public:
  bool is_discrete() const final { return true; }

  virtual double weight(const Individual& g) const = 0;

  /// All t with incompatible(g, t), each listed once.
  virtual std::vector<Individual> incompatible_with(const Individual& g) const = 0;

  /// All individuals intersecting `region`, each listed once.
  virtual std::vector<Individual> window_members(const Window& region) const = 0;

  /// All individuals contained in `box` (finite-volume family).
  virtual std::vector<Individual> contained_in(const Window& box) const = 0;

  double dominating_mass(const Window& region) const override;
  std::unique_ptr<FiniteFamily> finite_family(const Window& box) const override;
};

/// Germ proposal region of a continuous model: an axis-aligned box of germ
/// positions. One-dimensional models use the x-range only.
struct Region {
  Eigen::AlignedBox2d box;
};

/// Germ-grain model on R or R^2 with intensity f dx pi(dg), f constant.
class ContinuousModel : public Model {
public:
  bool is_discrete() const final { return false; }

  virtual int dimension() const = 0;

  /// Dominating germ intensity (already multiplied by delta_psi).
  virtual double germ_intensity() const = 0;

  /// Boxes covering the germs of every individual intersecting `region`.
  virtual std::vector<Region> window_regions(const Window& region) const = 0;

  /// Box covering the germs of every individual incompatible with `g`.
  virtual Region neighbor_region(const Individual& g) const = 0;

  /// Draws an individual with germ uniform in the region and grain from the
  /// grain law.
  virtual Individual sample_in(const Region& r, RandomStream& s) const = 0;

  bool region_contains(const Region& r, const Individual& g) const;
  double region_mass(const Region& r) const;

  std::unique_ptr<FiniteFamily> finite_family(const Window& box) const override;

  virtual Eigen::Vector2d germ_of(const Individual& g) const = 0;
};

}  // namespace clansim

#endif  // CLANSIM_MODEL_HPP
