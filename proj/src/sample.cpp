#include "larp/sample.hpp"

#include <algorithm>
#include <utility>

namespace larp {

Sample::Sample(std::vector<double> values) : values_(std::move(values)) {
    std::sort(values_.begin(), values_.end());
}

Sample Sample::from_sorted(std::vector<double> values) {
    Sample s;
    s.values_ = std::move(values);
    return s;
}

}  // namespace larp
