#include "qrm/json_io.hpp"

#include "json_detail.hpp"
#include "qrm/error.hpp"

namespace qrm::json {

namespace detail {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::InvalidArgument, what); }

}  // namespace

Json to_json(const Value& v) {
  switch (v.kind()) {
    case ValueKind::Int: return v.as_int();
    case ValueKind::Top: return "top";
    case ValueKind::Bot: return "bot";
    case ValueKind::Void: return nullptr;
    case ValueKind::Enum: return v.as_symbol();
    case ValueKind::Tuple: {
      Json arr = Json::array();
      for (const auto& item : v.items()) arr.push_back(to_json(item));
      return arr;
    }
  }
  return nullptr;
}

Value value_from_json(const Json& j) {
  if (j.is_null()) return Value::void_value();
  if (j.is_number_integer()) return Value::integer(j.get<std::int64_t>());
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "top") return Value::top();
    if (s == "bot") return Value::bot();
    return Value::symbol(s);
  }
  if (j.is_array()) {
    if (j.empty()) bad("empty array is not a value");
    Value::Tuple items;
    for (const auto& e : j) items.push_back(value_from_json(e));
    return Value::tuple(std::move(items));
  }
  bad("not a value: " + j.dump());
}

Json to_json(const OrderKind& o) {
  Json j = Json::object();
  switch (o.kind()) {
    case OrderKind::Kind::NumLe: j["kind"] = "le"; break;
    case OrderKind::Kind::NumGe: j["kind"] = "ge"; break;
    case OrderKind::Kind::EqOnly: j["kind"] = "eq"; break;
    case OrderKind::Kind::ElementWise: {
      j["kind"] = "elementwise";
      Json parts = Json::array();
      for (const auto& p : o.parts()) parts.push_back(to_json(p));
      j["parts"] = std::move(parts);
      return j;
    }
    case OrderKind::Kind::Custom:
      // Written for inspection only; reading it back is rejected.
      j["kind"] = "custom";
      j["name"] = o.custom_order()->name;
      if (o.reversed()) j["reversed"] = true;
      return j;
  }
  if (!o.domain().empty()) j["domain"] = o.domain();
  return j;
}

OrderKind order_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) bad("order needs a \"kind\": " + j.dump());
  const auto kind = j["kind"].get<std::string>();
  std::string domain;
  if (j.contains("domain")) {
    if (!j["domain"].is_string()) bad("order domain must be a string");
    domain = j["domain"].get<std::string>();
  }
  if (kind == "le") return OrderKind::le(domain);
  if (kind == "ge") return OrderKind::ge(domain);
  if (kind == "eq") return OrderKind::eq(domain);
  if (kind == "elementwise") {
    if (!j.contains("parts") || !j["parts"].is_array() || j["parts"].empty())
      bad("element-wise order needs a non-empty \"parts\" array");
    std::vector<OrderKind> parts;
    for (const auto& p : j["parts"]) parts.push_back(order_from_json(p));
    return OrderKind::elementwise(std::move(parts));
  }
  if (kind == "custom") bad("custom orders cannot be read from JSON");
  bad("unknown order kind " + kind);
}

Json to_json(const ConfigurationSet& set) {
  Json space = Json::array();
  for (const auto& d : set.space().dims()) {
    Json dim = Json::object();
    dim["name"] = d.name;
    dim["order"] = to_json(d.order);
    space.push_back(std::move(dim));
  }
  Json configs = Json::array();
  for (const auto& c : set.sorted()) {
    Json row = Json::array();
    for (const auto& v : c) row.push_back(to_json(v));
    configs.push_back(std::move(row));
  }
  Json j = Json::object();
  j["space"] = std::move(space);
  j["configs"] = std::move(configs);
  return j;
}

ConfigurationSet set_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("space") || !j["space"].is_array()) bad("configuration set needs a \"space\" array");
  if (!j.contains("configs") || !j["configs"].is_array()) bad("configuration set needs a \"configs\" array");
  std::vector<PosetDescriptor> dims;
  for (const auto& d : j["space"]) {
    if (!d.is_object() || !d.contains("name") || !d["name"].is_string() || !d.contains("order"))
      bad("space entries need \"name\" and \"order\": " + d.dump());
    dims.push_back({d["name"].get<std::string>(), order_from_json(d["order"])});
  }
  ConfigurationSet set{ConfigurationSpace(std::move(dims))};
  for (const auto& row : j["configs"]) {
    if (!row.is_array()) bad("configuration must be an array: " + row.dump());
    std::vector<Value> values;
    for (const auto& v : row) values.push_back(value_from_json(v));
    set.insert(Configuration(std::move(values)));
  }
  return set;
}

Json parse(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::exception& e) {
    bad(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace detail

std::string encode(const Value& v) { return detail::to_json(v).dump(); }
Value decode_value(std::string_view text) { return detail::value_from_json(detail::parse(text)); }

std::string encode(const OrderKind& o) { return detail::to_json(o).dump(); }
OrderKind decode_order(std::string_view text) { return detail::order_from_json(detail::parse(text)); }

std::string encode(const ConfigurationSet& set, int indent) { return detail::to_json(set).dump(indent) + "\n"; }
ConfigurationSet decode_set(std::string_view text) { return detail::set_from_json(detail::parse(text)); }

}  // namespace qrm::json
