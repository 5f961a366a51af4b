#ifndef CLANSIM_TOY_HPP
#define CLANSIM_TOY_HPP

#include <string>
#include <utility>
#include <vector>

#include "clansim/model.hpp"

namespace clansim {

/// Finite labelled family with explicit weights.
///
/// In exclusion mode every label is incompatible with itself and with its
/// listed partners, and M is the hard-core product. In free mode nothing is
/// incompatible and M is identically one.
class ToyModel final : public DiscreteModel {
public:
  ToyModel(std::vector<std::string> labels, std::vector<double> weights,
           const std::vector<std::pair<std::string, std::string>>& pairs, bool exclusion);

  std::string id() const override { return exclusion_ ? "toy_hardcore" : "toy_free"; }

  bool incompatible(const Individual& g, const Individual& t) const override;
  double acceptance_prob(const Individual& g, std::span<const Individual> xi) const override;
  double size(const Individual& g) const override;
  double delta_psi() const override { return 1.0; }
  bool intersects(const Individual& g, const Window& region) const override;
  bool product_form() const override { return true; }
  double interaction_horizon() const override { return 0.0; }

  double weight(const Individual& g) const override;
  std::vector<Individual> incompatible_with(const Individual& g) const override;
  std::vector<Individual> window_members(const Window& region) const override;
  std::vector<Individual> contained_in(const Window& box) const override;

  std::size_t site_count() const { return labels_.size(); }
  const std::string& label(std::uint32_t id) const { return labels_.at(id); }
  /// Throws Error(InvalidIndividual) for unknown labels.
  Site site(const std::string& label) const;
  bool exclusion() const { return exclusion_; }

private:
  std::uint32_t check(const Individual& g) const;

  std::vector<std::string> labels_;
  std::vector<double> weights_;
  std::vector<std::vector<std::uint32_t>> partners_;
  std::vector<std::vector<bool>> matrix_;
  bool exclusion_;
};

/// Exclusion toy model: weights by label plus symmetric incompatible pairs.
ToyModel toy_hardcore(const std::vector<std::pair<std::string, double>>& weights,
                      const std::vector<std::pair<std::string, std::string>>& pairs);

/// Non-interacting toy model (M = 1, no incompatibilities).
ToyModel toy_free(const std::vector<std::pair<std::string, double>>& weights);

}  // namespace clansim

#endif  // CLANSIM_TOY_HPP
