#pragma once

#include <cstddef>
#include <span>
#include <string>

#include "larp/sample.hpp"

namespace larp {

enum class PrefilterKind { Quantile, ZScore, Sdo };

std::string to_string(PrefilterKind kind);
PrefilterKind prefilter_kind_from_string(const std::string& name);

/// A prefiltering procedure: one of the three outlyingness rules plus its
/// scalar hyperparameter. Valid ranges: Quantile p in (0, 1/2); ZScore l in
/// (0, inf); Sdo p in (0, inf).
struct PrefilterSpec {
    PrefilterKind kind = PrefilterKind::Quantile;
    double param = 0.25;
};

void validate(const PrefilterSpec& spec);

/// Quantile outlyingness Q(x, S) = |min{ i : X_(i) >= x } - n/2| / n with
/// 1-based ranks: the normalized distance of x's first matching rank from
/// rank n/2.
///
/// Implemented literally. Two consequences of the literal form, flagged
/// rather than fixed: duplicated values all take the rank of the first
/// order statistic >= x, and the upper tail scores higher than the lower
/// tail at mirrored ranks (Q(X_(n)) = 1/2 but Q(X_(1)) = 1/2 - 1/n), so Q
/// is not symmetric under negating the sample.
///
/// Throws std::domain_error if x > max(S), where no rank exists.
double quantile_outlyingness(double x, const Sample& sample);

/// Quantile prefilter: trims the tails of the sample by rank.
///
/// Keeps the points whose first matching rank i satisfies
/// |i - (n+1)/2| / n < p, i.e. rank distance is measured from the central
/// rank (n+1)/2 rather than the n/2 used by quantile_outlyingness. The
/// half-rank shift makes the kept window symmetric around the median rank,
/// which is what gives the filter its defining guarantee: the median of an
/// odd-length sample of distinct values is never trimmed and is preserved
/// exactly for every p in (0, 1/2). Centering at n/2 instead would always
/// keep an even number of points of an odd-length sample and shift the
/// median by half a rank gap.
Sample apply_quantile(const Sample& sample, double p);

/// Z-score filter: keeps { x : |x - mean| / SD < l } with the population
/// SD. A constant sample (SD == 0) is kept whole; the z-score of every
/// point is taken as 0.
Sample apply_zscore(const Sample& sample, double l);

/// Stahel-Donoho filter: keeps { x : |x - median| / MAD < p }. When
/// MAD == 0 the outlyingness is 0 for points equal to the median and
/// infinite otherwise, so exactly the median-valued points survive.
Sample apply_sdo(const Sample& sample, double p);

/// Dispatch on spec.kind. Always returns a subset of the input. Note that
/// applying a spec twice is not idempotent in general: the second
/// application sees the filtered sample's own statistics.
Sample apply(const PrefilterSpec& spec, const Sample& sample);

/// Contiguous index window [lo, hi) on a sorted array; how every filter
/// reports its kept set internally (each keep-condition is an interval in
/// rank or value).
struct IndexWindow {
    std::size_t lo = 0;
    std::size_t hi = 0;
    std::size_t size() const { return hi - lo; }
    bool empty() const { return lo == hi; }
};

/// The kept window of `spec` applied to the sorted values `xs`. The four
/// sample statistics are those of xs itself (mean/SD for z-score,
/// median/MAD for SDO); passing them in lets a caller that already has
/// them (the experiment harness) skip recomputation.
IndexWindow filter_window(const PrefilterSpec& spec, std::span<const double> xs,
                          double mean, double sd, double median, double mad);

/// Convenience overload computing the statistics itself.
IndexWindow filter_window(const PrefilterSpec& spec, std::span<const double> xs);

}  // namespace larp
