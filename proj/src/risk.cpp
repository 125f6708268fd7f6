#include "larp/risk.hpp"

#include <limits>
#include <stdexcept>
#include <utility>

namespace larp {

RiskReport RiskReport::from_risks(std::vector<std::pair<double, double>> per_learner) {
    if (per_learner.empty()) {
        throw std::invalid_argument("RiskReport: at least one learner required");
    }
    RiskReport report;
    report.per_learner = std::move(per_learner);
    report.agnostic = report.per_learner.front().second;
    report.best = report.per_learner.front().second;
    for (const auto& [delta, risk] : report.per_learner) {
        report.agnostic = std::max(report.agnostic, risk);
        report.best = std::min(report.best, risk);
    }
    report.gap = (report.agnostic == report.best) ? 0.0 : report.agnostic - report.best;
    return report;
}

double RiskReport::risk_for(double delta) const {
    for (const auto& [d, risk] : per_learner) {
        if (d == delta) {
            return risk;
        }
    }
    throw std::invalid_argument("RiskReport: no learner with the requested delta");
}

RiskReport evaluate(const Sample& sample, const PrefilterSpec& spec,
                    const LearnerSet& learners, double theta) {
    const Sample filtered = apply(spec, sample);
    std::vector<std::pair<double, double>> risks;
    risks.reserve(learners.size());
    for (double delta : learners.deltas()) {
        if (filtered.empty()) {
            risks.emplace_back(delta, std::numeric_limits<double>::infinity());
        } else {
            risks.emplace_back(delta, squared_risk(huber_estimate(filtered, delta).value, theta));
        }
    }
    return RiskReport::from_risks(std::move(risks));
}

}  // namespace larp
