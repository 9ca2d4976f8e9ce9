#pragma once

#include <json.hpp>

#include "secondwild/bootstrap.hpp"
#include "secondwild/harness.hpp"

namespace secondwild::cli {

using nlohmann::ordered_json;

[[nodiscard]] ordered_json to_json(const InferenceReport& r);
[[nodiscard]] ordered_json to_json(const HypothesisTests& t);
[[nodiscard]] ordered_json to_json(const VarianceStudyReport& r);
[[nodiscard]] ordered_json to_json(const CoverageReport& r);
[[nodiscard]] ordered_json to_json(const ApproxCheckReport& r);

}  // namespace secondwild::cli
