#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "larp/estimators.hpp"

namespace larp {

/// A cost-sharing configuration that fails its own participation
/// conditions. Deliberately a distinct type: the payment guarantees are
/// sufficient conditions, and silently clamping an infeasible instance
/// would fabricate a guarantee that does not exist.
class infeasible_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shared-prefiltering game: total cost C * n^alpha split across learners,
/// each of whom loses u_reductions[l] utility (absolute units) relative to
/// their learner-specific optimum.
struct GameConfig {
    double cost_scale = 1.0;    // C > 0
    double cost_exponent = 1.0; // alpha >= 1
    std::size_t n = 1;
    std::vector<double> u_reductions;
};

struct PaymentScheme {
    std::vector<double> payments;
    double total = 0.0;  // == C * n^alpha
};

/// The dataset-size threshold [ |L| / (C(|L|-1)) * P ]^(1/alpha) above
/// which (strictly) a no-defection payment scheme exists. Requires
/// num_learners >= 2.
double participation_threshold(double cost_scale, double cost_exponent,
                               std::size_t num_learners, double price);

/// Budget-balanced payments p_l proportional to C n^alpha - u_l,
/// normalized to total C n^alpha. Throws infeasible_error when any weight
/// is nonpositive or n is not strictly above the participation threshold
/// for the mean reduction.
PaymentScheme no_defection_payments(const GameConfig& config);

/// True iff every learner weakly prefers the shared scheme, i.e.
/// p_l <= C n^alpha - u_l for all l.
bool verify_no_defection(const GameConfig& config, const PaymentScheme& scheme);

/// Lipschitz-utility variant: utilities are R(risk) with R L-Lipschitz,
/// and per-learner risks are replaced by the theoretical surrogate bound
/// (eps^2 + log(1/delta0)/n) sigma^2 + delta_i^2.
struct LipschitzGameConfig {
    double lipschitz = 1.0;  // L > 0
    LearnerSet deltas{std::vector<double>{0.01, 1.0}};
    double cost_scale = 1.0;
    double cost_exponent = 1.0;
    std::size_t n = 1;
    double epsilon = 0.2;
    double sigma = 1.0;
    double delta0 = 0.05;
};

/// The surrogate risk bound for learner i.
double surrogate_risk_bound(const LipschitzGameConfig& config, double delta);

/// The explicit mean-estimation price: sum over learners of
/// u_red(bound_N, bound_i). This is the literal appendix formula, which
/// sums without the 1/|L| averaging used by the general price definition;
/// pass normalized = true for the averaged variant.
double mean_estimation_price(const LipschitzGameConfig& config,
                             const std::function<double(double, double)>& u_red,
                             bool normalized = false);

/// Threshold ( L N / (C (N-1)) * (delta_N^2 - delta_1^2) )^(1/alpha);
/// lipschitz_payments requires n >= threshold (non-strict).
double lipschitz_participation_threshold(const LipschitzGameConfig& config);

/// Payments p_i proportional to C n^alpha - L (delta_N^2 - delta_i^2),
/// normalized to C n^alpha. Guarantees p_i <= C n^alpha - L (delta_N^2 -
/// delta_i^2) whenever feasible; throws infeasible_error below threshold.
PaymentScheme lipschitz_payments(const LipschitzGameConfig& config);

}  // namespace larp
