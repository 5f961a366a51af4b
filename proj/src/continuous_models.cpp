#include "clansim/continuous_models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "clansim/error.hpp"

namespace clansim {
namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw Error(ErrorKind::InvalidParameter, std::string(what) + " must be finite and positive");
  }
}

const Eigen::AlignedBox2d& bounded_box(const Window& region, const std::string& model) {
  const auto* b = std::get_if<BoxWindow>(&region);
  if (b == nullptr) {
    throw Error(ErrorKind::Unbounded, model + " needs a box window");
  }
  if (b->box.isEmpty() || !b->box.min().allFinite() || !b->box.max().allFinite()) {
    throw Error(ErrorKind::Unbounded, model + " window must be a bounded nonempty box");
  }
  return b->box;
}

Eigen::AlignedBox2d grow(const Eigen::AlignedBox2d& box, double amount) {
  Eigen::AlignedBox2d out = box;
  out.min().array() -= amount;
  out.max().array() += amount;
  return out;
}

Eigen::AlignedBox2d around(const Eigen::Vector2d& x, double half) {
  return {x.array() - half, x.array() + half};
}

Individual sample_germ(const Region& r, RandomStream& s) {
  const Eigen::Vector2d side = r.box.sizes();
  const double u = s.next_uniform();
  const double v = s.next_uniform();
  return Germ{r.box.min() + Eigen::Vector2d(u * side.x(), v * side.y())};
}

std::vector<Eigen::Vector2d> germs_of(std::span<const Individual> xi) {
  std::vector<Eigen::Vector2d> out;
  out.reserve(xi.size());
  for (const auto& t : xi) {
    const auto* g = std::get_if<Germ>(&t);
    if (g == nullptr) {
      throw Error(ErrorKind::InvalidIndividual, "expected a germ, got " + kind_name(t));
    }
    out.push_back(g->x);
  }
  return out;
}

}  // namespace

AreaModel::AreaModel(double kappa, double phi, GrainGeometry grain)
    : kappa_(kappa), phi_(phi), grain_(grain) {
  require_positive(kappa, "area model kappa");
  require_positive(phi, "area model phi");
  require_positive(grain.size, "grain size");
}

const Germ& AreaModel::check(const Individual& g) const {
  const auto* p = std::get_if<Germ>(&g);
  if (p == nullptr) {
    reject_kind(g);
  }
  return *p;
}

bool AreaModel::incompatible(const Individual& g, const Individual& t) const {
  return grain_.overlaps(check(g).x, check(t).x);
}

double AreaModel::acceptance_prob(const Individual& g, std::span<const Individual> xi) const {
  const auto& x = check(g).x;
  if (phi_ == 1.0) {
    return 1.0;
  }
  const auto centres = germs_of(xi);
  const double u = uncovered_content(x, centres, grain_);
  if (phi_ < 1.0) {
    return std::pow(phi_, grain_.content() - u);
  }
  return std::pow(phi_, -u);
}

double AreaModel::size(const Individual& g) const {
  check(g);
  return 1.0;
}

double AreaModel::delta_psi() const {
  return phi_ < 1.0 ? std::pow(phi_, -grain_.content()) : 1.0;
}

double AreaModel::dominating_mass(const Window& region) const {
  return germ_intensity() * grain_.dilated_box_content(bounded_box(region, id()));
}

bool AreaModel::intersects(const Individual& g, const Window& region) const {
  const auto& x = check(g).x;
  if (const auto* b = std::get_if<BoxWindow>(&region)) {
    return grain_.meets(x, b->box);
  }
  return std::holds_alternative<WholeWindow>(region);
}

std::vector<Region> AreaModel::window_regions(const Window& region) const {
  return {Region{grow(bounded_box(region, id()), grain_.reach())}};
}

Region AreaModel::neighbor_region(const Individual& g) const {
  return Region{around(check(g).x, 2.0 * grain_.reach())};
}

Individual AreaModel::sample_in(const Region& r, RandomStream& s) const { return sample_germ(r, s); }

Eigen::Vector2d AreaModel::germ_of(const Individual& g) const { return check(g).x; }

StraussModel::StraussModel(double exp_beta1, double beta2, bool hardcore, double radius,
                           double base_rate)
    : exp_beta1_(exp_beta1),
      beta2_(beta2),
      hardcore_(hardcore),
      radius_(radius),
      base_rate_(base_rate) {
  require_positive(exp_beta1, "strauss exp_beta1");
  require_positive(radius, "strauss radius");
  require_positive(base_rate, "strauss base_rate");
  if (!hardcore && !(beta2 <= 0.0)) {
    throw Error(ErrorKind::InvalidParameter,
                "strauss beta2 > 0 is not integrable; use beta2 <= 0 or hardcore");
  }
}

const Germ& StraussModel::check(const Individual& g) const {
  const auto* p = std::get_if<Germ>(&g);
  if (p == nullptr) {
    reject_kind(g);
  }
  return *p;
}

bool StraussModel::incompatible(const Individual& g, const Individual& t) const {
  return (check(g).x - check(t).x).norm() < radius_;
}

double StraussModel::acceptance_prob(const Individual& g, std::span<const Individual> xi) const {
  int n = 0;
  for (const auto& t : xi) {
    if (incompatible(g, t)) {
      ++n;
    }
  }
  if (hardcore_) {
    return n == 0 ? 1.0 : 0.0;
  }
  return std::exp(beta2_ * n);
}

double StraussModel::size(const Individual& g) const {
  check(g);
  return 1.0;
}

double StraussModel::dominating_mass(const Window& region) const {
  return germ_intensity() * bounded_box(region, id()).volume();
}

bool StraussModel::intersects(const Individual& g, const Window& region) const {
  const auto& x = check(g).x;
  if (const auto* b = std::get_if<BoxWindow>(&region)) {
    return b->box.contains(x);
  }
  return std::holds_alternative<WholeWindow>(region);
}

std::vector<Region> StraussModel::window_regions(const Window& region) const {
  return {Region{bounded_box(region, id())}};
}

Region StraussModel::neighbor_region(const Individual& g) const {
  return Region{around(check(g).x, radius_)};
}

Individual StraussModel::sample_in(const Region& r, RandomStream& s) const {
  return sample_germ(r, s);
}

Eigen::Vector2d StraussModel::germ_of(const Individual& g) const { return check(g).x; }

LengthLaw LengthLaw::fixed(double length) {
  require_positive(length, "call length");
  LengthLaw law;
  law.kind = LengthKind::Fixed;
  law.length = length;
  law.max = length;
  return law;
}

LengthLaw LengthLaw::uniform(double max) {
  require_positive(max, "uniform length max");
  LengthLaw law;
  law.kind = LengthKind::Uniform;
  law.max = max;
  return law;
}

LengthLaw LengthLaw::truncated_exponential(double mean, double max) {
  require_positive(mean, "truncated exponential mean");
  require_positive(max, "truncated exponential max");
  LengthLaw law;
  law.kind = LengthKind::TruncatedExponential;
  law.mean = mean;
  law.max = max;
  return law;
}

double LengthLaw::upper() const { return kind == LengthKind::Fixed ? length : max; }

double LengthLaw::first_moment() const {
  switch (kind) {
    case LengthKind::Fixed:
      return length;
    case LengthKind::Uniform:
      return 0.5 * max;
    case LengthKind::TruncatedExponential: {
      const double a = max / mean;
      const double z = -std::expm1(-a);
      return mean * (1.0 - (a + 1.0) * std::exp(-a)) / z;
    }
  }
  return 0.0;
}

double LengthLaw::second_moment() const {
  switch (kind) {
    case LengthKind::Fixed:
      return length * length;
    case LengthKind::Uniform:
      return max * max / 3.0;
    case LengthKind::TruncatedExponential: {
      const double a = max / mean;
      const double z = -std::expm1(-a);
      return mean * mean * (2.0 - (a * a + 2.0 * a + 2.0) * std::exp(-a)) / z;
    }
  }
  return 0.0;
}

double LengthLaw::sample(RandomStream& s) const {
  switch (kind) {
    case LengthKind::Fixed:
      return length;
    case LengthKind::Uniform:
      return max * (1.0 - s.next_uniform());
    case LengthKind::TruncatedExponential: {
      const double z = -std::expm1(-max / mean);
      const double x = -mean * std::log1p(-s.next_uniform() * z);
      return std::clamp(x, std::numeric_limits<double>::min(), max);
    }
  }
  return length;
}

std::string LengthLaw::describe() const {
  std::ostringstream out;
  out.precision(17);
  switch (kind) {
    case LengthKind::Fixed:
      out << "{kind = \"fixed\", length = " << length << "}";
      break;
    case LengthKind::Uniform:
      out << "{kind = \"uniform\", max = " << max << "}";
      break;
    case LengthKind::TruncatedExponential:
      out << "{kind = \"truncexp\", mean = " << mean << ", max = " << max << "}";
      break;
  }
  return out.str();
}

LossNetworkModel::LossNetworkModel(double kappa, LengthLaw law, int capacity)
    : kappa_(kappa), law_(law), capacity_(capacity) {
  require_positive(kappa, "loss network kappa");
  if (!std::isfinite(law.upper())) {
    throw Error(ErrorKind::InvalidParameter, "call lengths need bounded support");
  }
  if (capacity < 1) {
    throw Error(ErrorKind::InvalidParameter, "loss network capacity must be at least 1");
  }
}

const Call& LossNetworkModel::check(const Individual& g) const {
  const auto* p = std::get_if<Call>(&g);
  if (p == nullptr || !(p->length > 0.0)) {
    reject_kind(g);
  }
  return *p;
}

bool LossNetworkModel::incompatible(const Individual& g, const Individual& t) const {
  const auto& a = check(g);
  const auto& b = check(t);
  return a.x <= b.x + b.length && b.x <= a.x + a.length;
}

int LossNetworkModel::peak_load(const Call& c, std::span<const Individual> xi) const {
  std::vector<const Call*> overlapping;
  for (const auto& t : xi) {
    const auto& b = check(t);
    if (c.x <= b.x + b.length && b.x <= c.x + c.length) {
      overlapping.push_back(&b);
    }
  }
  // The load on [x, x + L] is maximal at x or at a left end inside it.
  std::vector<double> probes{c.x};
  for (const auto* b : overlapping) {
    if (b->x > c.x) {
      probes.push_back(b->x);
    }
  }
  int peak = 0;
  for (double u : probes) {
    int load = 0;
    for (const auto* b : overlapping) {
      if (b->x <= u && u <= b->x + b->length) {
        ++load;
      }
    }
    peak = std::max(peak, load);
  }
  return peak;
}

double LossNetworkModel::acceptance_prob(const Individual& g, std::span<const Individual> xi) const {
  return peak_load(check(g), xi) + 1 <= capacity_ ? 1.0 : 0.0;
}

double LossNetworkModel::size(const Individual& g) const { return std::max(check(g).length, 1.0); }

double LossNetworkModel::dominating_mass(const Window& region) const {
  const auto* i = std::get_if<IntervalWindow>(&region);
  if (i == nullptr || !std::isfinite(i->lo) || !std::isfinite(i->hi) || i->hi < i->lo) {
    throw Error(ErrorKind::Unbounded, "loss network needs a bounded interval window");
  }
  return kappa_ * (i->hi - i->lo + law_.first_moment());
}

bool LossNetworkModel::intersects(const Individual& g, const Window& region) const {
  const auto& c = check(g);
  if (const auto* i = std::get_if<IntervalWindow>(&region)) {
    return c.x <= i->hi && c.x + c.length >= i->lo;
  }
  return std::holds_alternative<WholeWindow>(region);
}

std::vector<Region> LossNetworkModel::window_regions(const Window& region) const {
  const auto* i = std::get_if<IntervalWindow>(&region);
  if (i == nullptr || !std::isfinite(i->lo) || !std::isfinite(i->hi) || i->hi < i->lo) {
    throw Error(ErrorKind::Unbounded, "loss network needs a bounded interval window");
  }
  return {Region{{Eigen::Vector2d(i->lo - law_.upper(), 0.0), Eigen::Vector2d(i->hi, 0.0)}}};
}

Region LossNetworkModel::neighbor_region(const Individual& g) const {
  const auto& c = check(g);
  return Region{{Eigen::Vector2d(c.x - law_.upper(), 0.0), Eigen::Vector2d(c.x + c.length, 0.0)}};
}

Individual LossNetworkModel::sample_in(const Region& r, RandomStream& s) const {
  const double x = r.box.min().x() + s.next_uniform() * r.box.sizes().x();
  return Call{x, law_.sample(s)};
}

Eigen::Vector2d LossNetworkModel::germ_of(const Individual& g) const {
  return {check(g).x, 0.0};
}

}  // namespace clansim
