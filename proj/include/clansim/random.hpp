#ifndef CLANSIM_RANDOM_HPP
#define CLANSIM_RANDOM_HPP

#include <cstdint>
#include <limits>
#include <vector>

namespace clansim {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Counter-based random stream.
///
/// Every draw is a pure function of (key, counter), where the key is a hash of
/// the seed and the derivation path. Streams are therefore reproducible across
/// platforms and schedules, and child streams can be created by index without
/// touching the parent.
class RandomStream {
public:
  explicit RandomStream(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }
  const std::vector<std::uint64_t>& path() const { return path_; }
  std::uint64_t counter() const { return counter_; }

  /// Child stream; deterministic in (this stream's seed and path, index).
  /// The parent's counter is neither read nor advanced.
  RandomStream derive(std::uint64_t index) const;

  std::uint64_t next_bits();

  /// Uniform on [0, 1) with 53 random bits.
  double next_uniform();

  /// Exp(rate) by inversion. Throws on rate <= 0.
  double next_exponential(double rate);

  /// First event time of the Poisson process on (lower, inf) with intensity
  /// effective_mass * e^{-t} dt, or kInfinity if it has no event.
  double sample_first_event(double effective_mass, double lower);

  /// Same law, parameterized by the intensity at `lower` (effective_mass *
  /// e^{-lower}); stays accurate when lower is large.
  double sample_first_event_after(double rate_at_lower, double lower);

private:
  RandomStream(std::uint64_t seed, std::vector<std::uint64_t> path);

  std::uint64_t seed_;
  std::vector<std::uint64_t> path_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Inversion -ln(1-u)/rate. Throws on rate <= 0.
double exponential_from_uniform(double u, double rate);

/// Inversion used by RandomStream::sample_first_event: solves
/// e^{-t} = e^{-lower} + ln(u)/effective_mass, returning kInfinity when the
/// right-hand side is not positive.
double first_event_from_uniform(double u, double effective_mass, double lower);

/// lower - ln(1 + ln(u)/rate_at_lower), or kInfinity when the argument of the
/// outer logarithm is not positive.
double first_event_after_from_uniform(double u, double rate_at_lower, double lower);

}  // namespace clansim

#endif  // CLANSIM_RANDOM_HPP
