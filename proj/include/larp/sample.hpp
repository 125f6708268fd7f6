#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace larp {

/// A finite multiset of scalars, stored sorted ascending.
///
/// Sorted storage is the backbone of the whole pipeline: every prefilter
/// reduces to a contiguous index window on the sorted values, and the
/// order statistics (median, MAD, quantile ranks) become O(1)/O(log n).
/// Values are immutable after construction.
///
/// Prefilters may legitimately discard every point (e.g. a z-score window
/// that no observation falls into), so an empty Sample is representable;
/// the statistics in estimators.hpp reject it instead.
class Sample {
public:
    Sample() = default;

    /// Takes ownership of `values` and sorts them.
    explicit Sample(std::vector<double> values);

    /// Wraps an already-sorted vector without re-sorting. The caller
    /// guarantees ascending order.
    static Sample from_sorted(std::vector<double> values);

    std::span<const double> values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    bool empty() const { return values_.empty(); }

    /// k-th order statistic, 0-based. No bounds check beyond the vector's.
    double operator[](std::size_t k) const { return values_[k]; }

    double min() const { return values_.front(); }
    double max() const { return values_.back(); }

    bool operator==(const Sample& other) const = default;

private:
    std::vector<double> values_;
};

}  // namespace larp
