#ifndef CLANSIM_SAMPLER_HPP
#define CLANSIM_SAMPLER_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "clansim/clan.hpp"

namespace clansim {

/// One window sample: the projected configuration and the build measurements.
struct WindowSample {
  std::uint64_t index = 0;
  Configuration configuration;
  BuildStats stats;
  bool truncated = false;
};

/// Clan construction followed by cleaning and projection, on one stream.
/// A truncated clan yields an empty configuration unless `biased` is set, in
/// which case the partial clan is cleaned anyway.
WindowSample perfect_sample(const Model& m, const Window& window, RandomStream& stream,
                            const Limits& limits, bool biased,
                            const WindowFamily* family = nullptr);

/// Runs `job(i)` for i < n on `threads` workers. Results come back in index
/// order; each job must depend only on its index.
template <class T>
std::vector<T> run_indexed(std::uint64_t n, int threads, const std::function<T(std::uint64_t)>& job);

/// perfect_sample for indices [0, n) on streams RandomStream(seed).derive(i).
std::vector<WindowSample> sample_many(const Model& m, const Window& window, std::uint64_t seed,
                                      std::uint64_t n, const Limits& limits, bool biased,
                                      int threads);

}  // namespace clansim

#include "clansim/sampler_impl.hpp"

#endif  // CLANSIM_SAMPLER_HPP
