#pragma once

// JSON encoding of values, orders and configuration sets.
//
//   value: integer -> number, top/bot -> "top"/"bot", void -> null,
//          symbol -> string, tuple -> array
//   order: {"kind": "le"|"ge"|"eq"|"elementwise", "domain": ..., "parts": [...]}
//   set:   {"space": [{"name": ..., "order": ...}], "configs": [[...], ...]}
//
// Output is canonical: object keys in a fixed order, configurations sorted.
// Malformed input throws Error(InvalidArgument).

#include <string>
#include <string_view>

#include "qrm/pareto_core.hpp"

namespace qrm::json {

std::string encode(const Value& v);
Value decode_value(std::string_view text);

std::string encode(const OrderKind& o);
OrderKind decode_order(std::string_view text);

std::string encode(const ConfigurationSet& set, int indent = 2);
ConfigurationSet decode_set(std::string_view text);

}  // namespace qrm::json
