#ifndef CLANSIM_CONTINUOUS_MODELS_HPP
#define CLANSIM_CONTINUOUS_MODELS_HPP

#include <string>

#include "clansim/geometry.hpp"
#include "clansim/model.hpp"

namespace clansim {

/// Area-interaction process with a fixed grain.
///
/// Repulsive (phi < 1): intensity kappa phi^{-m(G)}, M = phi^{m(G) - u}.
/// Attractive (phi > 1): intensity kappa, M = phi^{-u}. Here u is the
/// uncovered content of the new grain. Grains that overlap are incompatible.
class AreaModel final : public ContinuousModel {
public:
  AreaModel(double kappa, double phi, GrainGeometry grain);

  std::string id() const override { return "area"; }
  int dimension() const override { return 2; }

  bool incompatible(const Individual& g, const Individual& t) const override;
  double acceptance_prob(const Individual& g, std::span<const Individual> xi) const override;
  double size(const Individual& g) const override;
  double delta_psi() const override;
  double dominating_mass(const Window& region) const override;
  bool intersects(const Individual& g, const Window& region) const override;
  bool product_form() const override { return false; }
  double interaction_horizon() const override { return 2.0 * grain_.reach(); }

  double germ_intensity() const override { return kappa_ * delta_psi(); }
  std::vector<Region> window_regions(const Window& region) const override;
  Region neighbor_region(const Individual& g) const override;
  Individual sample_in(const Region& r, RandomStream& s) const override;
  Eigen::Vector2d germ_of(const Individual& g) const override;

  double kappa() const { return kappa_; }
  double phi() const { return phi_; }
  const GrainGeometry& grain() const { return grain_; }

private:
  const Germ& check(const Individual& g) const;

  double kappa_;
  double phi_;
  GrainGeometry grain_;
};

/// Repulsive Strauss process: M = e^{beta2 n_r}, where n_r counts points of
/// the configuration at distance < r. The hard-core flag stands for
/// beta2 = -infinity (M = 1{n_r = 0}).
class StraussModel final : public ContinuousModel {
public:
  /// Throws Error(InvalidParameter) for beta2 > 0, which is not integrable.
  StraussModel(double exp_beta1, double beta2, bool hardcore, double radius, double base_rate);

  std::string id() const override { return "strauss"; }
  int dimension() const override { return 2; }

  bool incompatible(const Individual& g, const Individual& t) const override;
  double acceptance_prob(const Individual& g, std::span<const Individual> xi) const override;
  double size(const Individual& g) const override;
  double delta_psi() const override { return exp_beta1_; }
  double dominating_mass(const Window& region) const override;
  bool intersects(const Individual& g, const Window& region) const override;
  bool product_form() const override { return hardcore_; }
  double interaction_horizon() const override { return radius_; }

  double germ_intensity() const override { return base_rate_ * exp_beta1_; }
  std::vector<Region> window_regions(const Window& region) const override;
  Region neighbor_region(const Individual& g) const override;
  Individual sample_in(const Region& r, RandomStream& s) const override;
  Eigen::Vector2d germ_of(const Individual& g) const override;

  double exp_beta1() const { return exp_beta1_; }
  double beta2() const { return beta2_; }
  bool hardcore() const { return hardcore_; }
  double radius() const { return radius_; }
  double base_rate() const { return base_rate_; }

private:
  const Germ& check(const Individual& g) const;

  double exp_beta1_;
  double beta2_;
  bool hardcore_;
  double radius_;
  double base_rate_;
};

enum class LengthKind { Fixed, Uniform, TruncatedExponential };

/// Bounded call-length distribution.
struct LengthLaw {
  LengthKind kind = LengthKind::Fixed;
  double length = 1.0;  // Fixed
  double mean = 1.0;    // TruncatedExponential: mean of the untruncated law
  double max = 1.0;     // Uniform, TruncatedExponential: upper end of the support

  static LengthLaw fixed(double length);
  static LengthLaw uniform(double max);
  static LengthLaw truncated_exponential(double mean, double max);

  double upper() const;
  double first_moment() const;
  double second_moment() const;
  double sample(RandomStream& s) const;
  std::string describe() const;
};

/// One-dimensional loss network: calls [x, x + L] arrive at rate kappa dx and
/// are blocked when they would push the load anywhere above the capacity.
class LossNetworkModel final : public ContinuousModel {
public:
  LossNetworkModel(double kappa, LengthLaw law, int capacity);

  std::string id() const override { return "loss_network"; }
  int dimension() const override { return 1; }

  bool incompatible(const Individual& g, const Individual& t) const override;
  double acceptance_prob(const Individual& g, std::span<const Individual> xi) const override;
  /// max(L, 1).
  double size(const Individual& g) const override;
  double delta_psi() const override { return 1.0; }
  double dominating_mass(const Window& region) const override;
  bool intersects(const Individual& g, const Window& region) const override;
  bool product_form() const override { return capacity_ == 1; }
  double interaction_horizon() const override { return law_.upper(); }

  double germ_intensity() const override { return kappa_; }
  std::vector<Region> window_regions(const Window& region) const override;
  Region neighbor_region(const Individual& g) const override;
  Individual sample_in(const Region& r, RandomStream& s) const override;
  Eigen::Vector2d germ_of(const Individual& g) const override;

  double kappa() const { return kappa_; }
  const LengthLaw& law() const { return law_; }
  int capacity() const { return capacity_; }

  /// Largest number of calls of xi covering a point of [x, x + L].
  int peak_load(const Call& c, std::span<const Individual> xi) const;

private:
  const Call& check(const Individual& g) const;

  double kappa_;
  LengthLaw law_;
  int capacity_;
};

}  // namespace clansim

#endif  // CLANSIM_CONTINUOUS_MODELS_HPP
