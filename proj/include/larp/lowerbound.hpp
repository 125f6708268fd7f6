#pragma once

#include <span>
#include <utility>
#include <vector>

namespace larp {

/// The Bernoulli hardness instance: contaminated distribution Ber(1/2),
/// true parameter either (1-eps)/2 or (1+eps)/2, downstream Huber learners
/// with delta in {0, 1/4, 2}. Any prefilter of a Bernoulli distribution is
/// again Bernoulli, so the whole prefilter class collapses to the kept
/// mass p1 at the point 1 -- the analysis is a deterministic curve in p1,
/// no sampling involved.
struct BernoulliInstance {
    double epsilon = 0.2;
    bool theta_high = false;  // false: theta = (1-eps)/2, true: (1+eps)/2

    double theta() const {
        return theta_high ? (1.0 + epsilon) / 2.0 : (1.0 - epsilon) / 2.0;
    }
};

void validate(const BernoulliInstance& instance);

/// The three population Huber estimates on Ber(p1).
struct ClosedFormEstimates {
    double theta0;        // delta = 0 (median)
    double theta_quarter; // delta = 1/4
    double theta2;        // delta = 2 (mean; all residuals stay quadratic)
};

/// Branch formulas: for p1 > 1/2, (1, 1 - (1-p1)/(4 p1), p1); for
/// p1 <= 1/2, (0, p1 / (4 (1-p1)), p1). The tie p1 == 1/2 follows the
/// lower branch literally. Throws std::domain_error outside [0, 1].
ClosedFormEstimates closed_form_estimates(double p1);

/// Independent check of the closed forms: minimizes the population Huber
/// loss (1-p1) H_delta(0 - t) + p1 H_delta(1 - t) over t in [0, 1] by grid
/// search at step 1e-6 (first minimizer on ties). delta == 0 returns the
/// population median: 0 below p1 = 1/2, 1 above, 1/2 at the tie.
double population_huber_oracle(double p1, double delta);

/// The curve p1 -> max over the three estimators of (estimate - theta)^2.
std::vector<std::pair<double, double>> r_agn_curve(const BernoulliInstance& instance,
                                                   std::span<const double> p1_grid);

}  // namespace larp
