#include "larp/game.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace larp {

namespace {

void validate_cost_model(double cost_scale, double cost_exponent, std::size_t n) {
    if (!(cost_scale > 0.0) || !std::isfinite(cost_scale)) {
        throw std::invalid_argument("game: cost scale C must be positive");
    }
    if (!(cost_exponent >= 1.0) || !std::isfinite(cost_exponent)) {
        throw std::invalid_argument("game: cost exponent alpha must be at least 1");
    }
    if (n == 0) {
        throw std::invalid_argument("game: dataset size n must be at least 1");
    }
}

double total_cost(double cost_scale, double cost_exponent, std::size_t n) {
    return cost_scale * std::pow(static_cast<double>(n), cost_exponent);
}

PaymentScheme normalize_to_total(std::vector<double> weights, double total) {
    const double weight_sum = std::accumulate(weights.begin(), weights.end(), 0.0);
    PaymentScheme scheme;
    scheme.total = total;
    scheme.payments = std::move(weights);
    for (double& p : scheme.payments) {
        p *= total / weight_sum;
    }
    return scheme;
}

}  // namespace

double participation_threshold(double cost_scale, double cost_exponent,
                               std::size_t num_learners, double price) {
    validate_cost_model(cost_scale, cost_exponent, 1);
    if (num_learners < 2) {
        throw std::invalid_argument(
            "participation_threshold: at least two learners required (the formula divides by "
            "|L| - 1)");
    }
    if (!(price >= 0.0)) {
        throw std::invalid_argument("participation_threshold: price must be nonnegative");
    }
    const double ratio = static_cast<double>(num_learners) /
                         (cost_scale * static_cast<double>(num_learners - 1));
    return std::pow(ratio * price, 1.0 / cost_exponent);
}

PaymentScheme no_defection_payments(const GameConfig& config) {
    validate_cost_model(config.cost_scale, config.cost_exponent, config.n);
    const std::size_t count = config.u_reductions.size();
    if (count < 2) {
        throw std::invalid_argument("no_defection_payments: at least two learners required");
    }
    for (double u : config.u_reductions) {
        if (!(u >= 0.0) || !std::isfinite(u)) {
            throw std::invalid_argument("no_defection_payments: utility reductions must be finite and "
                                        "nonnegative");
        }
    }

    const double total = total_cost(config.cost_scale, config.cost_exponent, config.n);
    const double price = std::accumulate(config.u_reductions.begin(), config.u_reductions.end(),
                                         0.0) / static_cast<double>(count);
    const double threshold =
        participation_threshold(config.cost_scale, config.cost_exponent, count, price);
    if (!(static_cast<double>(config.n) > threshold)) {
        throw infeasible_error("no_defection_payments: n must strictly exceed the participation "
                               "threshold");
    }

    std::vector<double> weights(count);
    for (std::size_t i = 0; i < count; ++i) {
        weights[i] = total - config.u_reductions[i];
        if (!(weights[i] > 0.0)) {
            throw infeasible_error("no_defection_payments: some utility reduction reaches the full "
                                   "prefiltering cost");
        }
    }
    return normalize_to_total(std::move(weights), total);
}

bool verify_no_defection(const GameConfig& config, const PaymentScheme& scheme) {
    if (scheme.payments.size() != config.u_reductions.size()) {
        throw std::invalid_argument("verify_no_defection: payment/learner count mismatch");
    }
    const double total = total_cost(config.cost_scale, config.cost_exponent, config.n);
    for (std::size_t i = 0; i < scheme.payments.size(); ++i) {
        if (!(scheme.payments[i] <= total - config.u_reductions[i])) {
            return false;
        }
    }
    return true;
}

double surrogate_risk_bound(const LipschitzGameConfig& config, double delta) {
    const double base = (config.epsilon * config.epsilon +
                         std::log(1.0 / config.delta0) / static_cast<double>(config.n)) *
                        config.sigma * config.sigma;
    return base + delta * delta;
}

double mean_estimation_price(const LipschitzGameConfig& config,
                             const std::function<double(double, double)>& u_red,
                             bool normalized) {
    const auto deltas = config.deltas.deltas();
    const double worst = surrogate_risk_bound(config, deltas.back());
    double sum = 0.0;
    for (double d : deltas) {
        sum += u_red(worst, surrogate_risk_bound(config, d));
    }
    return normalized ? sum / static_cast<double>(deltas.size()) : sum;
}

double lipschitz_participation_threshold(const LipschitzGameConfig& config) {
    validate_cost_model(config.cost_scale, config.cost_exponent, config.n);
    if (!(config.lipschitz > 0.0) || !std::isfinite(config.lipschitz)) {
        throw std::invalid_argument("lipschitz game: L must be positive");
    }
    const std::size_t count = config.deltas.size();
    if (count < 2) {
        throw std::invalid_argument("lipschitz game: at least two distinct learners required");
    }
    const auto deltas = config.deltas.deltas();
    const double spread = deltas.back() * deltas.back() - deltas.front() * deltas.front();
    const double ratio = config.lipschitz * static_cast<double>(count) /
                         (config.cost_scale * static_cast<double>(count - 1));
    return std::pow(ratio * spread, 1.0 / config.cost_exponent);
}

PaymentScheme lipschitz_payments(const LipschitzGameConfig& config) {
    const double threshold = lipschitz_participation_threshold(config);
    if (!(static_cast<double>(config.n) >= threshold)) {
        throw infeasible_error("lipschitz_payments: n is below the participation threshold");
    }
    const double total = total_cost(config.cost_scale, config.cost_exponent, config.n);
    const auto deltas = config.deltas.deltas();
    const double worst_sq = deltas.back() * deltas.back();

    std::vector<double> weights(deltas.size());
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        weights[i] = total - config.lipschitz * (worst_sq - deltas[i] * deltas[i]);
    }
    return normalize_to_total(std::move(weights), total);
}

}  // namespace larp
