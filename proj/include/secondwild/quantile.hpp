#pragma once

#include <span>

namespace secondwild {

/// Sample quantile used throughout the bootstrap: with a_1 <= ... <= a_B sorted,
/// returns a_{b*} where b* = min{ b : #{c : a_c <= a_b} / B >= level }.
/// Ties are resolved by counting every value <= a_b. Throws DomainError on
/// empty input or a level outside (0, 1].
[[nodiscard]] double sample_quantile(std::span<const double> values, double level);

/// Same rule on input that is already sorted ascending.
[[nodiscard]] double sorted_sample_quantile(std::span<const double> sorted, double level);

}  // namespace secondwild
