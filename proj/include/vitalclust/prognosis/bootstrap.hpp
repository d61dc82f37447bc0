#pragma once

#include <cstdint>
#include <vector>

namespace vitalclust::prognosis {

struct RateEstimate {
  double mean = 0.0;  // fraction of true flags
  double se = 0.0;    // population SD of the B resample means
};

// Resample-with-replacement bootstrap of a Bernoulli mean. Resample b
// draws its indices from SeededRng(hash64(seed, b)), so the result is
// independent of worker count and resample evaluation order.
RateEstimate mortality_bootstrap(const std::vector<bool>& flags, int b,
                                 std::uint64_t seed, int workers = 1);

}  // namespace vitalclust::prognosis
