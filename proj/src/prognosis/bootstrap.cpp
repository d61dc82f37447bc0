#include "vitalclust/prognosis/bootstrap.hpp"

#include <cmath>
#include <stdexcept>

#include "vitalclust/core/hash.hpp"
#include "vitalclust/core/parallel.hpp"
#include "vitalclust/core/rng.hpp"

namespace vitalclust::prognosis {

RateEstimate mortality_bootstrap(const std::vector<bool>& flags, int b,
                                 std::uint64_t seed, int workers) {
  if (flags.empty()) throw std::invalid_argument("mortality_bootstrap: empty flags");
  if (b < 1) throw std::invalid_argument("mortality_bootstrap: B must be >= 1");

  const std::size_t n = flags.size();
  std::size_t deaths = 0;
  for (const bool f : flags) deaths += f ? 1 : 0;

  RateEstimate est;
  est.mean = static_cast<double>(deaths) / static_cast<double>(n);

  std::vector<double> means(static_cast<std::size_t>(b));
  parallel_for(means.size(), workers, [&](std::size_t i) {
    SeededRng rng(hash64(seed, static_cast<std::uint64_t>(i)));
    std::size_t hits = 0;
    for (std::size_t j = 0; j < n; ++j)
      hits += flags[rng.uniform_index(n)] ? 1 : 0;
    means[i] = static_cast<double>(hits) / static_cast<double>(n);
  });

  double acc = 0.0;
  for (const double m : means) acc += m;
  const double grand = acc / static_cast<double>(b);
  double var = 0.0;
  for (const double m : means) var += (m - grand) * (m - grand);
  est.se = std::sqrt(var / static_cast<double>(b));
  return est;
}

}  // namespace vitalclust::prognosis
