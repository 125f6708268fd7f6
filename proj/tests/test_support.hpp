#pragma once

#include <cstdint>
#include <vector>

#include "larp/rng.hpp"
#include "larp/sample.hpp"

namespace larp::test {

/// Random sample of size n with values uniform on [lo, hi).
inline std::vector<double> random_values(SplitMix64& rng, std::size_t n, double lo = 0.0,
                                         double hi = 1.0) {
    std::vector<double> xs(n);
    for (double& x : xs) {
        x = lo + (hi - lo) * rng.next_unit();
    }
    return xs;
}

inline Sample random_sample(SplitMix64& rng, std::size_t n, double lo = 0.0, double hi = 1.0) {
    return Sample(random_values(rng, n, lo, hi));
}

}  // namespace larp::test
