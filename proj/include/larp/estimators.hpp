#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "larp/sample.hpp"

namespace larp {

/// The Huber parameters Delta of the downstream learners, stored
/// ascending. Duplicates are kept: the agnostic risk is invariant to them,
/// but the cost-sharing game counts learners, not distinct deltas. All
/// deltas must be >= 0.
class LearnerSet {
public:
    explicit LearnerSet(std::vector<double> deltas);

    std::span<const double> deltas() const { return deltas_; }
    std::size_t size() const { return deltas_.size(); }
    double max_delta() const { return deltas_.back(); }

    friend bool operator==(const LearnerSet&, const LearnerSet&) = default;

private:
    std::vector<double> deltas_;
};

/// A scalar mean estimate.
struct Estimate {
    double value = 0.0;
};

// ---------------------------------------------------------------------------
// Order statistics. All throw std::invalid_argument on an empty sample.
// ---------------------------------------------------------------------------

double mean(const Sample& sample);

/// Population standard deviation (divisor n). Zero for constant samples.
double std_dev(const Sample& sample);

/// Middle order statistic for odd n; average of the two middle order
/// statistics for even n.
Estimate median(const Sample& sample);

/// Median absolute deviation: median of { |x_i - median(S)| }.
double mad(const Sample& sample);

// ---------------------------------------------------------------------------
// Huber estimation.
// ---------------------------------------------------------------------------

/// Huber loss H_delta: x^2/2 inside [-delta, delta], linear outside.
double huber_loss(double x, double delta);

/// Influence function psi = H', i.e. x clamped to [-delta, delta].
double huber_psi(double x, double delta);

/// The Huber M-estimate argmin_t sum_i H_delta(x_i - t).
///
/// Computed as the root of g(t) = sum_i psi(x_i - t), which is continuous,
/// piecewise linear and nonincreasing. Both edges of the root set are
/// located by bisection on [min(S), max(S)] to absolute tolerance 1e-12 and
/// their midpoint is returned, so a flat zero interval (which happens when
/// the saturated masses on both sides balance) yields its midpoint -- the
/// same convention as the even-n median. delta == 0 returns the median.
Estimate huber_estimate(const Sample& sample, double delta);

// ---------------------------------------------------------------------------
// Span-level kernels over sorted data. The Sample-level functions above
// delegate here; the experiment harness calls these directly on windows of
// a shared sorted array. All require ascending input.
// ---------------------------------------------------------------------------

double mean_sorted(std::span<const double> xs);
double std_dev_sorted(std::span<const double> xs);
double median_sorted(std::span<const double> xs);
double mad_sorted(std::span<const double> xs);
double huber_estimate_sorted(std::span<const double> xs, double delta);

/// Sorted sample plus prefix sums; evaluates psi sums (and hence Huber
/// roots) over any index window in O(log n). One instance per drawn sample
/// serves every (prefilter, learner) combination of an experiment cell.
class SortedCache {
public:
    explicit SortedCache(std::vector<double> sorted_values);

    std::span<const double> values() const { return values_; }
    std::size_t size() const { return values_.size(); }

    /// Sum of values in the index window [lo, hi).
    double sum(std::size_t lo, std::size_t hi) const;

    /// sum_{i in [lo,hi)} psi(x_i - t, delta).
    double psi_sum(std::size_t lo, std::size_t hi, double t, double delta) const;

    /// Huber root over the window [lo, hi); same contract as
    /// huber_estimate. Throws on an empty window.
    double huber_root(std::size_t lo, std::size_t hi, double delta) const;

    double median_window(std::size_t lo, std::size_t hi) const;

private:
    std::vector<double> values_;
    std::vector<double> prefix_;  // prefix_[i] = sum of values_[0..i)
};

}  // namespace larp
