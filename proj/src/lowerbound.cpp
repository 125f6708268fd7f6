#include "larp/lowerbound.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "larp/estimators.hpp"

namespace larp {

void validate(const BernoulliInstance& instance) {
    if (!(instance.epsilon > 0.0 && instance.epsilon < 0.5)) {
        throw std::invalid_argument("BernoulliInstance: epsilon must lie in (0, 1/2)");
    }
}

ClosedFormEstimates closed_form_estimates(double p1) {
    if (!(p1 >= 0.0 && p1 <= 1.0)) {
        throw std::domain_error("closed_form_estimates: p1 must lie in [0, 1]");
    }
    if (p1 > 0.5) {
        return ClosedFormEstimates{1.0, 1.0 - (1.0 - p1) / (4.0 * p1), p1};
    }
    // p1 == 0 degenerates to all mass at 0; the formula already gives (0,0,0).
    return ClosedFormEstimates{0.0, p1 / (4.0 * (1.0 - p1)), p1};
}

double population_huber_oracle(double p1, double delta) {
    if (!(p1 >= 0.0 && p1 <= 1.0)) {
        throw std::domain_error("population_huber_oracle: p1 must lie in [0, 1]");
    }
    if (!(delta >= 0.0)) {
        throw std::domain_error("population_huber_oracle: delta must be nonnegative");
    }
    if (delta == 0.0) {
        if (p1 < 0.5) return 0.0;
        if (p1 > 0.5) return 1.0;
        return 0.5;
    }

    // Grid minimization of (1-p1) H(0 - t) + p1 H(1 - t) over t in [0, 1],
    // step 1e-6, first minimizer on ties.
    constexpr std::size_t kSteps = 1000000;
    double best_t = 0.0;
    double best_loss = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k <= kSteps; ++k) {
        const double t = static_cast<double>(k) * 1e-6;
        const double loss = (1.0 - p1) * huber_loss(-t, delta) + p1 * huber_loss(1.0 - t, delta);
        if (loss < best_loss) {
            best_loss = loss;
            best_t = t;
        }
    }
    return best_t;
}

std::vector<std::pair<double, double>> r_agn_curve(const BernoulliInstance& instance,
                                                   std::span<const double> p1_grid) {
    validate(instance);
    const double theta = instance.theta();
    std::vector<std::pair<double, double>> curve;
    curve.reserve(p1_grid.size());
    for (double p1 : p1_grid) {
        const ClosedFormEstimates est = closed_form_estimates(p1);
        const double r0 = (est.theta0 - theta) * (est.theta0 - theta);
        const double rq = (est.theta_quarter - theta) * (est.theta_quarter - theta);
        const double r2 = (est.theta2 - theta) * (est.theta2 - theta);
        curve.emplace_back(p1, std::max({r0, rq, r2}));
    }
    return curve;
}

}  // namespace larp
