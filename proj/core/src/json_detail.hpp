#pragma once

// nlohmann-based helpers shared by the JSON front ends. Not installed.

#include <json.hpp>

#include "qrm/pareto_core.hpp"

namespace qrm::json::detail {

using Json = nlohmann::ordered_json;

Json to_json(const Value& v);
Value value_from_json(const Json& j);
Json to_json(const OrderKind& o);
OrderKind order_from_json(const Json& j);
Json to_json(const ConfigurationSet& set);
ConfigurationSet set_from_json(const Json& j);

/// Parses text, turning parser failures into Error(InvalidArgument).
Json parse(std::string_view text);

}  // namespace qrm::json::detail
