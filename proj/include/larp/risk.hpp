#pragma once

#include <utility>
#include <vector>

#include "larp/estimators.hpp"
#include "larp/prefilters.hpp"
#include "larp/sample.hpp"

namespace larp {

/// Per-learner and learner-agnostic risks for one filtered sample.
/// agnostic = max over learners, best = min, gap = agnostic - best.
struct RiskReport {
    std::vector<std::pair<double, double>> per_learner;  // (delta, risk), delta ascending
    double agnostic = 0.0;
    double best = 0.0;
    double gap = 0.0;

    /// Builds the derived fields from a (delta, risk) list. Risks may be
    /// +inf (a filter that discarded everything); a report whose risks are
    /// all equal -- including all-infinite -- has gap 0.
    static RiskReport from_risks(std::vector<std::pair<double, double>> per_learner);

    double risk_for(double delta) const;  // throws if delta absent
};

/// Squared distance between an estimate and the true mean.
inline double squared_risk(double estimate, double theta) {
    const double d = estimate - theta;
    return d * d;
}

/// Filters once, runs every Huber learner on the filtered sample, and
/// reports all risks. An empty filtered sample yields +inf for every
/// learner.
RiskReport evaluate(const Sample& sample, const PrefilterSpec& spec,
                    const LearnerSet& learners, double theta);

}  // namespace larp
