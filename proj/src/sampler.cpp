#include "clansim/sampler.hpp"

#include <optional>

#include "clansim/cleaner.hpp"

namespace clansim {

WindowSample perfect_sample(const Model& m, const Window& window, RandomStream& stream,
                            const Limits& limits, bool biased, const WindowFamily* family) {
  WindowSample out;
  BuildResult built = build_clan(m, window, stream, limits, {}, family);
  out.stats = built.stats;
  out.truncated = built.truncated();
  if (out.truncated && !biased) {
    return out;
  }
  const KeptSet kept = clean(built.clan, m, stream, biased);
  out.configuration = project(kept, built.clan, m, window);
  return out;
}

std::vector<WindowSample> sample_many(const Model& m, const Window& window, std::uint64_t seed,
                                      std::uint64_t n, const Limits& limits, bool biased,
                                      int threads) {
  const RandomStream root(seed);
  std::optional<WindowFamily> family;
  if (const auto* d = dynamic_cast<const DiscreteModel*>(&m)) {
    family = window_family(*d, window);
  }
  const WindowFamily* shared = family ? &*family : nullptr;
  return run_indexed<WindowSample>(n, threads, [&](std::uint64_t i) {
    RandomStream stream = root.derive(i);
    WindowSample s = perfect_sample(m, window, stream, limits, biased, shared);
    s.index = i;
    return s;
  });
}

}  // namespace clansim
