#include "larp/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace larp {

namespace {

void require_nonempty(std::span<const double> xs, const char* what) {
    if (xs.empty()) {
        throw std::invalid_argument(std::string(what) + ": empty sample");
    }
}

// Locates the root set of a continuous, nonincreasing g on [lo, hi] with
// g(lo) > 0 > g(hi), and returns the midpoint of [L, R], where L is the
// edge of {g > 0} and R the edge of {g >= 0}. For a unique root L == R up
// to tolerance; for a flat zero segment this is its midpoint.
template <typename G>
double bisect_root_midpoint(double lo0, double hi0, const G& g) {
    constexpr double kTol = 1e-13;
    constexpr int kMaxIter = 200;

    double lo = lo0, hi = hi0;
    for (int i = 0; i < kMaxIter && hi - lo > kTol; ++i) {
        const double mid = lo + 0.5 * (hi - lo);
        (g(mid) > 0.0) ? lo = mid : hi = mid;
    }
    const double left_edge = lo + 0.5 * (hi - lo);

    lo = lo0, hi = hi0;
    for (int i = 0; i < kMaxIter && hi - lo > kTol; ++i) {
        const double mid = lo + 0.5 * (hi - lo);
        (g(mid) >= 0.0) ? lo = mid : hi = mid;
    }
    const double right_edge = lo + 0.5 * (hi - lo);

    return left_edge + 0.5 * (right_edge - left_edge);
}

}  // namespace

LearnerSet::LearnerSet(std::vector<double> deltas) : deltas_(std::move(deltas)) {
    if (deltas_.empty()) {
        throw std::invalid_argument("LearnerSet: at least one delta required");
    }
    for (double d : deltas_) {
        if (!(d >= 0.0) || !std::isfinite(d)) {
            throw std::invalid_argument("LearnerSet: deltas must be finite and nonnegative");
        }
    }
    std::sort(deltas_.begin(), deltas_.end());
}

// ---------------------------------------------------------------------------
// Span kernels.
// ---------------------------------------------------------------------------

double mean_sorted(std::span<const double> xs) {
    require_nonempty(xs, "mean");
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double std_dev_sorted(std::span<const double> xs) {
    require_nonempty(xs, "std_dev");
    const double m = mean_sorted(xs);
    double acc = 0.0;
    for (double x : xs) {
        acc += (x - m) * (x - m);
    }
    return std::sqrt(acc / static_cast<double>(xs.size()));
}

double median_sorted(std::span<const double> xs) {
    require_nonempty(xs, "median");
    const std::size_t n = xs.size();
    return (n % 2 == 1) ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

double mad_sorted(std::span<const double> xs) {
    require_nonempty(xs, "mad");
    const double med = median_sorted(xs);
    const std::size_t n = xs.size();

    // |x - med| over a sorted array is V-shaped; merge the two halves
    // outward from the median to list the deviations in ascending order.
    std::vector<double> dev;
    dev.reserve(n);
    auto left = static_cast<std::ptrdiff_t>(
        std::upper_bound(xs.begin(), xs.end(), med) - xs.begin() - 1);
    std::size_t right = static_cast<std::size_t>(left) + 1;
    while (dev.size() < n) {
        const double dl = left >= 0 ? med - xs[static_cast<std::size_t>(left)]
                                    : std::numeric_limits<double>::infinity();
        const double dr = right < n ? xs[right] - med
                                    : std::numeric_limits<double>::infinity();
        if (dl <= dr) {
            dev.push_back(dl);
            --left;
        } else {
            dev.push_back(dr);
            ++right;
        }
    }
    return median_sorted(dev);
}

double huber_loss(double x, double delta) {
    const double ax = std::abs(x);
    return ax <= delta ? 0.5 * x * x : delta * (ax - 0.5 * delta);
}

double huber_psi(double x, double delta) {
    if (!(delta >= 0.0)) {
        throw std::invalid_argument("huber_psi: delta must be nonnegative");
    }
    return std::clamp(x, -delta, delta);
}

double huber_estimate_sorted(std::span<const double> xs, double delta) {
    require_nonempty(xs, "huber_estimate");
    if (!(delta >= 0.0) || !std::isfinite(delta)) {
        throw std::invalid_argument("huber_estimate: delta must be finite and nonnegative");
    }
    // The delta -> 0 limit is the median by definition.
    if (delta == 0.0) {
        return median_sorted(xs);
    }
    const double lo = xs.front(), hi = xs.back();
    if (lo == hi) {
        return lo;
    }
    // Count-based psi sum: the saturated +/-delta masses cancel as exact
    // integer counts, so g is exactly zero on balanced flat segments (the
    // even-n case) instead of carrying summation noise that would flip the
    // edge predicates of the bisection.
    const auto g = [&](double t) {
        std::ptrdiff_t saturated = 0;
        double linear = 0.0;
        for (double x : xs) {
            const double r = x - t;
            if (r < -delta) {
                --saturated;
            } else if (r > delta) {
                ++saturated;
            } else {
                linear += r;
            }
        }
        return delta * static_cast<double>(saturated) + linear;
    };
    return bisect_root_midpoint(lo, hi, g);
}

// ---------------------------------------------------------------------------
// Sample-level wrappers.
// ---------------------------------------------------------------------------

double mean(const Sample& sample) { return mean_sorted(sample.values()); }
double std_dev(const Sample& sample) { return std_dev_sorted(sample.values()); }
Estimate median(const Sample& sample) { return Estimate{median_sorted(sample.values())}; }
double mad(const Sample& sample) { return mad_sorted(sample.values()); }

Estimate huber_estimate(const Sample& sample, double delta) {
    return Estimate{huber_estimate_sorted(sample.values(), delta)};
}

// ---------------------------------------------------------------------------
// SortedCache.
// ---------------------------------------------------------------------------

SortedCache::SortedCache(std::vector<double> sorted_values)
    : values_(std::move(sorted_values)), prefix_(values_.size() + 1, 0.0) {
    for (std::size_t i = 0; i < values_.size(); ++i) {
        prefix_[i + 1] = prefix_[i] + values_[i];
    }
}

double SortedCache::sum(std::size_t lo, std::size_t hi) const {
    return prefix_[hi] - prefix_[lo];
}

double SortedCache::psi_sum(std::size_t lo, std::size_t hi, double t, double delta) const {
    const auto first = values_.begin() + static_cast<std::ptrdiff_t>(lo);
    const auto last = values_.begin() + static_cast<std::ptrdiff_t>(hi);
    // Points below t - delta saturate at -delta, above t + delta at
    // +delta, the window in between contributes linearly.
    const std::size_t a =
        static_cast<std::size_t>(std::lower_bound(first, last, t - delta) - values_.begin());
    const std::size_t b =
        static_cast<std::size_t>(std::upper_bound(first, last, t + delta) - values_.begin());
    const double below = -delta * static_cast<double>(a - lo);
    const double above = delta * static_cast<double>(hi - b);
    const double linear = sum(a, b) - t * static_cast<double>(b - a);
    return below + linear + above;
}

double SortedCache::huber_root(std::size_t lo, std::size_t hi, double delta) const {
    if (lo >= hi || hi > values_.size()) {
        throw std::invalid_argument("huber_root: empty or invalid window");
    }
    if (delta == 0.0) {
        return median_window(lo, hi);
    }
    const double a = values_[lo], b = values_[hi - 1];
    if (a == b) {
        return a;
    }
    return bisect_root_midpoint(a, b, [&](double t) { return psi_sum(lo, hi, t, delta); });
}

double SortedCache::median_window(std::size_t lo, std::size_t hi) const {
    if (lo >= hi || hi > values_.size()) {
        throw std::invalid_argument("median_window: empty or invalid window");
    }
    const std::size_t n = hi - lo;
    return (n % 2 == 1) ? values_[lo + n / 2]
                        : 0.5 * (values_[lo + n / 2 - 1] + values_[lo + n / 2]);
}

}  // namespace larp
