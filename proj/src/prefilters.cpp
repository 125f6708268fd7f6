#include "larp/prefilters.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "larp/estimators.hpp"

namespace larp {

std::string to_string(PrefilterKind kind) {
    switch (kind) {
        case PrefilterKind::Quantile: return "quantile";
        case PrefilterKind::ZScore: return "zscore";
        case PrefilterKind::Sdo: return "sdo";
    }
    throw std::logic_error("to_string: unknown PrefilterKind");
}

PrefilterKind prefilter_kind_from_string(const std::string& name) {
    if (name == "quantile") return PrefilterKind::Quantile;
    if (name == "zscore") return PrefilterKind::ZScore;
    if (name == "sdo") return PrefilterKind::Sdo;
    throw std::invalid_argument("unknown prefilter kind '" + name +
                                "' (expected quantile, zscore or sdo)");
}

void validate(const PrefilterSpec& spec) {
    if (!std::isfinite(spec.param)) {
        throw std::invalid_argument("prefilter parameter must be finite");
    }
    switch (spec.kind) {
        case PrefilterKind::Quantile:
            if (!(spec.param > 0.0 && spec.param < 0.5)) {
                throw std::invalid_argument("quantile parameter p must lie in (0, 1/2)");
            }
            return;
        case PrefilterKind::ZScore:
            if (!(spec.param > 0.0)) {
                throw std::invalid_argument("z-score threshold l must be positive");
            }
            return;
        case PrefilterKind::Sdo:
            if (!(spec.param > 0.0)) {
                throw std::invalid_argument("SDO threshold p must be positive");
            }
            return;
    }
    throw std::logic_error("validate: unknown PrefilterKind");
}

namespace {

// 1-based rank of the first order statistic >= x.
std::size_t first_rank(std::span<const double> xs, double x) {
    return static_cast<std::size_t>(
               std::lower_bound(xs.begin(), xs.end(), x) - xs.begin()) + 1;
}

// Kept window of the quantile filter: first ranks within (c - np, c + np)
// around the central rank c = (n+1)/2. first_rank is nondecreasing along
// the sorted sample, so the kept set is a contiguous index window and
// duplicates of a value stand or fall together.
IndexWindow quantile_window(std::span<const double> xs, double p) {
    const std::size_t n = xs.size();
    const double c = 0.5 * static_cast<double>(n + 1);
    const double radius = static_cast<double>(n) * p;

    const auto rank_of = [&](std::size_t j) {
        return static_cast<double>(first_rank(xs, xs[j]));
    };
    std::size_t lo = 0, hi = n;
    {
        // first index whose rank exceeds c - radius
        std::size_t a = 0, b = n;
        while (a < b) {
            const std::size_t mid = a + (b - a) / 2;
            (rank_of(mid) > c - radius) ? b = mid : a = mid + 1;
        }
        lo = a;
    }
    {
        // first index whose rank reaches c + radius
        std::size_t a = lo, b = n;
        while (a < b) {
            const std::size_t mid = a + (b - a) / 2;
            (rank_of(mid) >= c + radius) ? b = mid : a = mid + 1;
        }
        hi = a;
    }
    return IndexWindow{lo, hi};
}

// Kept window of a value-interval condition |x - center| / scale < t,
// evaluated with the same pointwise predicate a naive scan would use.
IndexWindow value_window(std::span<const double> xs, double center, double scale, double t) {
    const std::size_t n = xs.size();
    const auto keep = [&](double x) { return std::abs(x - center) / scale < t; };

    const std::size_t split = static_cast<std::size_t>(
        std::lower_bound(xs.begin(), xs.end(), center) - xs.begin());

    // Left of center the predicate flips false -> true, right of it
    // true -> false; two partition points give the window.
    std::size_t lo = split, hi = split;
    {
        std::size_t a = 0, b = split;
        while (a < b) {
            const std::size_t mid = a + (b - a) / 2;
            keep(xs[mid]) ? b = mid : a = mid + 1;
        }
        lo = a;
    }
    {
        std::size_t a = split, b = n;
        while (a < b) {
            const std::size_t mid = a + (b - a) / 2;
            keep(xs[mid]) ? a = mid + 1 : b = mid;
        }
        hi = a;
    }
    return IndexWindow{lo, hi};
}

Sample window_to_sample(std::span<const double> xs, IndexWindow w) {
    return Sample::from_sorted(std::vector<double>(xs.begin() + static_cast<std::ptrdiff_t>(w.lo),
                                                   xs.begin() + static_cast<std::ptrdiff_t>(w.hi)));
}

}  // namespace

double quantile_outlyingness(double x, const Sample& sample) {
    if (sample.empty()) {
        throw std::invalid_argument("quantile_outlyingness: empty sample");
    }
    if (x > sample.max()) {
        throw std::domain_error("quantile_outlyingness: no order statistic >= x, rank undefined");
    }
    const auto xs = sample.values();
    const double n = static_cast<double>(xs.size());
    return std::abs(static_cast<double>(first_rank(xs, x)) - 0.5 * n) / n;
}

IndexWindow filter_window(const PrefilterSpec& spec, std::span<const double> xs,
                          double mean, double sd, double median, double mad) {
    validate(spec);
    if (xs.empty()) {
        return IndexWindow{0, 0};
    }
    switch (spec.kind) {
        case PrefilterKind::Quantile:
            return quantile_window(xs, spec.param);
        case PrefilterKind::ZScore:
            // SD == 0 means a constant sample; every z-score is 0 by
            // convention and everything is kept.
            if (sd == 0.0) {
                return IndexWindow{0, xs.size()};
            }
            return value_window(xs, mean, sd, spec.param);
        case PrefilterKind::Sdo:
            // MAD == 0: only points equal to the median have finite (zero)
            // outlyingness.
            if (mad == 0.0) {
                const auto [first, last] = std::equal_range(xs.begin(), xs.end(), median);
                return IndexWindow{static_cast<std::size_t>(first - xs.begin()),
                                   static_cast<std::size_t>(last - xs.begin())};
            }
            return value_window(xs, median, mad, spec.param);
    }
    throw std::logic_error("filter_window: unknown PrefilterKind");
}

IndexWindow filter_window(const PrefilterSpec& spec, std::span<const double> xs) {
    validate(spec);
    if (xs.empty()) {
        return IndexWindow{0, 0};
    }
    double m = 0.0, sd = 0.0, med = 0.0, md = 0.0;
    switch (spec.kind) {
        case PrefilterKind::ZScore:
            m = mean_sorted(xs);
            sd = std_dev_sorted(xs);
            break;
        case PrefilterKind::Sdo:
            med = median_sorted(xs);
            md = mad_sorted(xs);
            break;
        case PrefilterKind::Quantile:
            break;
    }
    return filter_window(spec, xs, m, sd, med, md);
}

Sample apply_quantile(const Sample& sample, double p) {
    return apply(PrefilterSpec{PrefilterKind::Quantile, p}, sample);
}

Sample apply_zscore(const Sample& sample, double l) {
    return apply(PrefilterSpec{PrefilterKind::ZScore, l}, sample);
}

Sample apply_sdo(const Sample& sample, double p) {
    return apply(PrefilterSpec{PrefilterKind::Sdo, p}, sample);
}

Sample apply(const PrefilterSpec& spec, const Sample& sample) {
    const auto xs = sample.values();
    return window_to_sample(xs, filter_window(spec, xs));
}

}  // namespace larp
