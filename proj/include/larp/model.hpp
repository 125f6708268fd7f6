#pragma once

#include <cstddef>

#include "larp/rng.hpp"
#include "larp/sample.hpp"

namespace larp {

/// Target distribution N(theta, sigma^2). sigma must be positive.
struct GaussianTarget {
    double theta = 0.0;
    double sigma = 1.0;

    friend bool operator==(const GaussianTarget&, const GaussianTarget&) = default;
};

/// Target distribution Ber(theta), theta in [0,1]. Only used by the
/// population-level lower-bound instance; never sampled.
struct BernoulliTarget {
    double theta = 0.5;

    friend bool operator==(const BernoulliTarget&, const BernoulliTarget&) = default;
};

/// epsilon-contamination with unit-variance Gaussian noise N(noise_mean, 1).
/// epsilon must lie in [0, 1/2).
struct ContaminationSpec {
    double epsilon = 0.0;
    double noise_mean = 0.0;

    friend bool operator==(const ContaminationSpec&, const ContaminationSpec&) = default;
};

void validate(const GaussianTarget& target);
void validate(const BernoulliTarget& target);
void validate(const ContaminationSpec& contamination);

/// Draws n points i.i.d. from (1-eps) * N(theta, sigma^2) + eps * N(m, 1).
///
/// Contamination is decided per point by an independent Bernoulli(eps)
/// draw. The result is sorted. Identical (seed, inputs) give bit-identical
/// output on the same build, independent of any threading in the caller.
///
/// Throws std::invalid_argument for n == 0 or invalid target/contamination.
Sample draw_contaminated(const GaussianTarget& target,
                         const ContaminationSpec& contamination,
                         std::size_t n,
                         Seed seed);

}  // namespace larp
