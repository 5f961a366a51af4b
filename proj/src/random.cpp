#include "clansim/random.hpp"

#include <cmath>
#include <string>

#include "clansim/error.hpp"

namespace clansim {
namespace {

// SplitMix64 finalizer (Steele, Lea and Flood).
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t key_for(std::uint64_t seed, const std::vector<std::uint64_t>& path) {
  std::uint64_t key = mix64(seed ^ 0x6a09e667f3bcc909ULL);
  for (std::uint64_t index : path) {
    key = mix64(key ^ mix64(index + kGolden));
  }
  return key;
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed) : RandomStream(seed, {}) {}

RandomStream::RandomStream(std::uint64_t seed, std::vector<std::uint64_t> path)
    : seed_(seed), path_(std::move(path)), key_(key_for(seed_, path_)) {}

RandomStream RandomStream::derive(std::uint64_t index) const {
  auto child = path_;
  child.push_back(index);
  return RandomStream(seed_, std::move(child));
}

std::uint64_t RandomStream::next_bits() {
  ++counter_;
  return mix64(key_ + counter_ * kGolden);
}

double RandomStream::next_uniform() {
  return static_cast<double>(next_bits() >> 11) * 0x1.0p-53;
}

double RandomStream::next_exponential(double rate) {
  if (!(rate > 0.0)) {
    throw Error(ErrorKind::InvalidParameter,
                "exponential rate must be positive, got " + std::to_string(rate));
  }
  return exponential_from_uniform(next_uniform(), rate);
}

double RandomStream::sample_first_event(double effective_mass, double lower) {
  return first_event_from_uniform(next_uniform(), effective_mass, lower);
}

double RandomStream::sample_first_event_after(double rate_at_lower, double lower) {
  return first_event_after_from_uniform(next_uniform(), rate_at_lower, lower);
}

double exponential_from_uniform(double u, double rate) {
  if (!(rate > 0.0)) {
    throw Error(ErrorKind::InvalidParameter,
                "exponential rate must be positive, got " + std::to_string(rate));
  }
  return -std::log1p(-u) / rate;
}

double first_event_from_uniform(double u, double effective_mass, double lower) {
  if (!(effective_mass > 0.0) || u <= 0.0) {
    return kInfinity;
  }
  const double rhs = std::exp(-lower) + std::log(u) / effective_mass;
  if (!(rhs > 0.0)) {
    return kInfinity;
  }
  const double t = -std::log(rhs);
  return t > lower ? t : std::nextafter(lower, kInfinity);
}

double first_event_after_from_uniform(double u, double rate_at_lower, double lower) {
  if (!(rate_at_lower > 0.0) || u <= 0.0) {
    return kInfinity;
  }
  const double arg = 1.0 + std::log(u) / rate_at_lower;
  if (!(arg > 0.0)) {
    return kInfinity;
  }
  const double t = lower - std::log(arg);
  return t > lower ? t : std::nextafter(lower, kInfinity);
}

}  // namespace clansim
