#include "secondwild/quantile.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "secondwild/errors.hpp"

namespace secondwild {

double sorted_sample_quantile(std::span<const double> sorted, double level) {
    if (sorted.empty()) throw DomainError("quantile of an empty sequence");
    if (!(level > 0.0 && level <= 1.0)) throw DomainError("quantile level must lie in (0, 1]");
    const double B = static_cast<double>(sorted.size());
    std::size_t b = 0;
    while (b < sorted.size()) {
        // number of values <= sorted[b], counting ties
        const auto count = static_cast<std::size_t>(
            std::upper_bound(sorted.begin() + static_cast<std::ptrdiff_t>(b), sorted.end(), sorted[b]) -
            sorted.begin());
        if (static_cast<double>(count) / B >= level) return sorted[b];
        b = count;
    }
    return sorted.back();
}

double sample_quantile(std::span<const double> values, double level) {
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    return sorted_sample_quantile(sorted, level);
}

}  // namespace secondwild
