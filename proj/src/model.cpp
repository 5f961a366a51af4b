#include "clansim/model.hpp"

#include <algorithm>
#include <cmath>

#include "clansim/error.hpp"

namespace clansim {
namespace {

class DiscreteFamily final : public FiniteFamily {
public:
  DiscreteFamily(const DiscreteModel& model, std::vector<Individual> members)
      : members_(std::move(members)) {
    cumulative_.reserve(members_.size());
    double acc = 0.0;
    for (const auto& g : members_) {
      acc += model.weight(g);
      cumulative_.push_back(acc);
    }
  }

  double mass() const override { return cumulative_.empty() ? 0.0 : cumulative_.back(); }

  Individual sample(RandomStream& s) const override {
    if (members_.empty()) {
      throw Error(ErrorKind::ContractViolation, "sampling from an empty family");
    }
    const double u = s.next_uniform() * mass();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it == cumulative_.end()) {
      --it;
    }
    return members_[static_cast<std::size_t>(it - cumulative_.begin())];
  }

private:
  std::vector<Individual> members_;
  std::vector<double> cumulative_;
};

class ContinuousFamily final : public FiniteFamily {
public:
  ContinuousFamily(const ContinuousModel& model, Region region)
      : model_(model), region_(region) {}

  double mass() const override { return model_.region_mass(region_); }
  Individual sample(RandomStream& s) const override { return model_.sample_in(region_, s); }

private:
  const ContinuousModel& model_;
  Region region_;
};

}  // namespace

Window Model::dilate(const Window& region, double amount) const {
  if (const auto* b = std::get_if<BoxWindow>(&region)) {
    Eigen::AlignedBox2d box = b->box;
    box.min().array() -= amount;
    box.max().array() += amount;
    return BoxWindow{box};
  }
  if (const auto* i = std::get_if<IntervalWindow>(&region)) {
    return IntervalWindow{i->lo - amount, i->hi + amount};
  }
  return region;
}

void Model::reject_kind(const Individual& g) const {
  throw Error(ErrorKind::InvalidIndividual,
              "individual of kind '" + kind_name(g) + "' does not belong to model " + id());
}

double DiscreteModel::dominating_mass(const Window& region) const {
  double total = 0.0;
  for (const auto& g : window_members(region)) {
    total += weight(g);
  }
  return total;
}

std::unique_ptr<FiniteFamily> DiscreteModel::finite_family(const Window& box) const {
  return std::make_unique<DiscreteFamily>(*this, contained_in(box));
}

bool ContinuousModel::region_contains(const Region& r, const Individual& g) const {
  const Eigen::Vector2d x = germ_of(g);
  if (dimension() == 1) {
    return x.x() >= r.box.min().x() && x.x() <= r.box.max().x();
  }
  return r.box.contains(x);
}

double ContinuousModel::region_mass(const Region& r) const {
  if (r.box.isEmpty()) {
    return 0.0;
  }
  const Eigen::Vector2d side = r.box.sizes();
  const double volume = dimension() == 1 ? side.x() : side.x() * side.y();
  return germ_intensity() * volume;
}

std::unique_ptr<FiniteFamily> ContinuousModel::finite_family(const Window& box) const {
  Region region;
  if (const auto* b = std::get_if<BoxWindow>(&box)) {
    region.box = b->box;
  } else if (const auto* i = std::get_if<IntervalWindow>(&box)) {
    region.box = Eigen::AlignedBox2d(Eigen::Vector2d(i->lo, 0.0), Eigen::Vector2d(i->hi, 0.0));
  } else {
    throw Error(ErrorKind::Unbounded, "continuous finite volume needs a box or interval");
  }
  if (!region.box.min().allFinite() || !region.box.max().allFinite()) {
    throw Error(ErrorKind::Unbounded, "finite-volume box must be bounded");
  }
  return std::make_unique<ContinuousFamily>(*this, region);
}

}  // namespace clansim
