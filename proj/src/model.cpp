#include "larp/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace larp {

void validate(const GaussianTarget& target) {
    if (!(target.sigma > 0.0) || !std::isfinite(target.sigma) || !std::isfinite(target.theta)) {
        throw std::invalid_argument("GaussianTarget: sigma must be a positive finite real");
    }
}

void validate(const BernoulliTarget& target) {
    if (!(target.theta >= 0.0 && target.theta <= 1.0)) {
        throw std::invalid_argument("BernoulliTarget: theta must lie in [0, 1]");
    }
}

void validate(const ContaminationSpec& contamination) {
    if (!(contamination.epsilon >= 0.0 && contamination.epsilon < 0.5)) {
        throw std::invalid_argument("ContaminationSpec: epsilon must lie in [0, 1/2)");
    }
    if (!std::isfinite(contamination.noise_mean)) {
        throw std::invalid_argument("ContaminationSpec: noise_mean must be finite");
    }
}

Sample draw_contaminated(const GaussianTarget& target,
                         const ContaminationSpec& contamination,
                         std::size_t n,
                         Seed seed) {
    validate(target);
    validate(contamination);
    if (n == 0) {
        throw std::invalid_argument("draw_contaminated: n must be at least 1");
    }

    SplitMix64 rng(seed);
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) {
        // Per-point i.i.d. Bernoulli(eps) contamination, exactly the Huber
        // mixture definition (rather than a fixed floor(eps*n) count).
        const double u = rng.next_unit();
        const double z = rng.next_gaussian();
        xs[i] = (u < contamination.epsilon) ? contamination.noise_mean + z
                                            : target.theta + target.sigma * z;
    }
    std::sort(xs.begin(), xs.end());
    return Sample::from_sorted(std::move(xs));
}

}  // namespace larp
