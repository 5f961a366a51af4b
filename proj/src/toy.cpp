#include "clansim/toy.hpp"

#include <algorithm>
#include <cmath>

#include "clansim/error.hpp"

namespace clansim {

ToyModel::ToyModel(std::vector<std::string> labels, std::vector<double> weights,
                   const std::vector<std::pair<std::string, std::string>>& pairs,
                   bool exclusion)
    : labels_(std::move(labels)), weights_(std::move(weights)), exclusion_(exclusion) {
  if (labels_.size() != weights_.size()) {
    throw Error(ErrorKind::InvalidParameter, "toy model: labels and weights differ in length");
  }
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i])) {
      throw Error(ErrorKind::InvalidParameter,
                  "toy model: weight of '" + labels_[i] + "' must be finite and positive");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (labels_[i] == labels_[j]) {
        throw Error(ErrorKind::InvalidParameter, "toy model: duplicate label '" + labels_[i] + "'");
      }
    }
  }
  const auto n = labels_.size();
  matrix_.assign(n, std::vector<bool>(n, false));
  if (exclusion_) {
    for (std::size_t i = 0; i < n; ++i) {
      matrix_[i][i] = true;
    }
    for (const auto& [a, b] : pairs) {
      const auto i = site(a).id;
      const auto j = site(b).id;
      matrix_[i][j] = matrix_[j][i] = true;
    }
  } else if (!pairs.empty()) {
    throw Error(ErrorKind::InvalidParameter, "toy model: free mode takes no incompatible pairs");
  }
  partners_.resize(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < n; ++j) {
      if (matrix_[i][j]) {
        partners_[i].push_back(j);
      }
    }
  }
}

Site ToyModel::site(const std::string& label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) {
    throw Error(ErrorKind::InvalidIndividual, "toy model: unknown label '" + label + "'");
  }
  return Site{static_cast<std::uint32_t>(it - labels_.begin())};
}

std::uint32_t ToyModel::check(const Individual& g) const {
  const auto* s = std::get_if<Site>(&g);
  if (s == nullptr || s->id >= labels_.size()) {
    reject_kind(g);
  }
  return s->id;
}

bool ToyModel::incompatible(const Individual& g, const Individual& t) const {
  return matrix_[check(g)][check(t)];
}

double ToyModel::acceptance_prob(const Individual& g, std::span<const Individual> xi) const {
  const auto i = check(g);
  for (const auto& t : xi) {
    if (matrix_[i][check(t)]) {
      return 0.0;
    }
  }
  return 1.0;
}

double ToyModel::size(const Individual& g) const {
  check(g);
  return 1.0;
}

double ToyModel::weight(const Individual& g) const { return weights_[check(g)]; }

bool ToyModel::intersects(const Individual& g, const Window& region) const {
  const auto i = check(g);
  if (std::holds_alternative<WholeWindow>(region)) {
    return true;
  }
  if (const auto* s = std::get_if<SiteWindow>(&region)) {
    return std::find(s->sites.begin(), s->sites.end(), i) != s->sites.end();
  }
  throw Error(ErrorKind::InvalidParameter, "toy model windows are site lists");
}

std::vector<Individual> ToyModel::incompatible_with(const Individual& g) const {
  std::vector<Individual> out;
  for (auto j : partners_[check(g)]) {
    out.emplace_back(Site{j});
  }
  return out;
}

std::vector<Individual> ToyModel::window_members(const Window& region) const {
  std::vector<Individual> out;
  for (std::uint32_t i = 0; i < labels_.size(); ++i) {
    if (intersects(Site{i}, region)) {
      out.emplace_back(Site{i});
    }
  }
  return out;
}

std::vector<Individual> ToyModel::contained_in(const Window& box) const {
  return window_members(box);
}

namespace {

std::pair<std::vector<std::string>, std::vector<double>> split(
    const std::vector<std::pair<std::string, double>>& weights) {
  std::vector<std::string> labels;
  std::vector<double> w;
  for (const auto& [l, v] : weights) {
    labels.push_back(l);
    w.push_back(v);
  }
  return {labels, w};
}

}  // namespace

ToyModel toy_hardcore(const std::vector<std::pair<std::string, double>>& weights,
                      const std::vector<std::pair<std::string, std::string>>& pairs) {
  auto [labels, w] = split(weights);
  return ToyModel(std::move(labels), std::move(w), pairs, true);
}

ToyModel toy_free(const std::vector<std::pair<std::string, double>>& weights) {
  auto [labels, w] = split(weights);
  return ToyModel(std::move(labels), std::move(w), {}, false);
}

}  // namespace clansim
