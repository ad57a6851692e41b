#include "qrm/value_poset.hpp"

#include <algorithm>
#include <optional>

#include "qrm/error.hpp"

namespace qrm {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::OrderMismatch: return "OrderMismatch";
    case ErrorKind::ArithmeticError: return "ArithmeticError";
    case ErrorKind::SpaceMismatch: return "SpaceMismatch";
    case ErrorKind::IndexError: return "IndexError";
    case ErrorKind::NotABijection: return "NotABijection";
    case ErrorKind::DuplicateName: return "DuplicateName";
    case ErrorKind::NormalizationShapeError: return "NormalizationShapeError";
    case ErrorKind::ConstraintTypeError: return "ConstraintTypeError";
    case ErrorKind::OrderError: return "OrderError";
    case ErrorKind::InfeasibleScenario: return "InfeasibleScenario";
    case ErrorKind::EmptyFrontier: return "EmptyFrontier";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnresolvedType: return "UnresolvedType";
    case ErrorKind::IllFormedOrder: return "IllFormedOrder";
    case ErrorKind::UnboundedDomain: return "UnboundedDomain";
    case ErrorKind::UnknownComponent: return "UnknownComponent";
    case ErrorKind::CyclicContainment: return "CyclicContainment";
  }
  return "Error";
}

// ---------------------------------------------------------------------------
// Value

Value Value::symbol(std::string name) {
  Value v;
  v.data_ = std::move(name);
  return v;
}

Value Value::tuple(Tuple items) {
  if (items.empty()) throw Error(ErrorKind::DomainError, "tuple values need at least one item");
  Value v;
  v.data_ = std::move(items);
  return v;
}

std::int64_t Value::as_int() const {
  if (!is_int()) throw Error(ErrorKind::DomainError, "not an integer: " + to_string());
  return std::get<std::int64_t>(data_);
}

const std::string& Value::as_symbol() const {
  if (!is_symbol()) throw Error(ErrorKind::DomainError, "not a symbol: " + to_string());
  return std::get<std::string>(data_);
}

const Value::Tuple& Value::items() const {
  if (!is_tuple()) throw Error(ErrorKind::DomainError, "not a tuple: " + to_string());
  return std::get<Tuple>(data_);
}

std::string Value::to_string() const {
  switch (kind()) {
    case ValueKind::Int: return std::to_string(std::get<std::int64_t>(data_));
    case ValueKind::Top: return "top";
    case ValueKind::Bot: return "bot";
    case ValueKind::Void: return "void";
    case ValueKind::Enum: return std::get<std::string>(data_);
    case ValueKind::Tuple: {
      std::string out = "(";
      const auto& xs = std::get<Tuple>(data_);
      for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ", ";
        out += xs[i].to_string();
      }
      return out + ")";
    }
  }
  return "?";
}

std::strong_ordering operator<=>(const Value& a, const Value& b) {
  if (auto c = a.data_.index() <=> b.data_.index(); c != 0) return c;
  switch (a.kind()) {
    case ValueKind::Int: return std::get<std::int64_t>(a.data_) <=> std::get<std::int64_t>(b.data_);
    case ValueKind::Enum: return std::get<std::string>(a.data_) <=> std::get<std::string>(b.data_);
    case ValueKind::Tuple: {
      const auto& x = std::get<Value::Tuple>(a.data_);
      const auto& y = std::get<Value::Tuple>(b.data_);
      return std::lexicographical_compare_three_way(x.begin(), x.end(), y.begin(), y.end());
    }
    default: return std::strong_ordering::equal;
  }
}

std::size_t hash_value(const Value& v) noexcept {
  std::size_t h = static_cast<std::size_t>(v.kind()) * 0x9e3779b97f4a7c15ULL;
  auto mix = [&h](std::size_t x) { h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
  switch (v.kind()) {
    case ValueKind::Int: mix(std::hash<std::int64_t>{}(v.as_int())); break;
    case ValueKind::Enum: mix(std::hash<std::string>{}(v.as_symbol())); break;
    case ValueKind::Tuple:
      for (const auto& item : v.items()) mix(hash_value(item));
      break;
    default: break;
  }
  return h;
}

// ---------------------------------------------------------------------------
// OrderKind

OrderKind OrderKind::le(std::string domain) {
  OrderKind o;
  o.kind_ = Kind::NumLe;
  o.domain_ = std::move(domain);
  return o;
}

OrderKind OrderKind::ge(std::string domain) {
  OrderKind o;
  o.kind_ = Kind::NumGe;
  o.domain_ = std::move(domain);
  return o;
}

OrderKind OrderKind::eq(std::string domain) {
  OrderKind o;
  o.kind_ = Kind::EqOnly;
  o.domain_ = std::move(domain);
  return o;
}

OrderKind OrderKind::elementwise(std::vector<OrderKind> parts) {
  if (parts.empty()) throw Error(ErrorKind::ShapeMismatch, "element-wise order needs at least one part");
  OrderKind o;
  o.kind_ = Kind::ElementWise;
  o.parts_ = std::move(parts);
  return o;
}

OrderKind OrderKind::custom(std::shared_ptr<const CustomOrder> order, bool reversed) {
  if (!order || !order->leq) throw Error(ErrorKind::InvalidArgument, "custom order without predicate");
  OrderKind o;
  o.kind_ = Kind::Custom;
  o.custom_ = std::move(order);
  o.reversed_ = reversed;
  return o;
}

bool operator==(const OrderKind& a, const OrderKind& b) {
  return a.kind_ == b.kind_ && a.domain_ == b.domain_ && a.parts_ == b.parts_ &&
         a.custom_ == b.custom_ && a.reversed_ == b.reversed_;
}

std::string OrderKind::to_string() const {
  auto tagged = [this](std::string base) {
    return domain_.empty() ? base : base + "[" + domain_ + "]";
  };
  switch (kind_) {
    case Kind::NumLe: return tagged("le");
    case Kind::NumGe: return tagged("ge");
    case Kind::EqOnly: return tagged("eq");
    case Kind::ElementWise: {
      std::string out = "(";
      for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (i) out += ", ";
        out += parts_[i].to_string();
      }
      return out + ")";
    }
    case Kind::Custom: return "custom:" + custom_->name + (reversed_ ? "^-1" : "");
  }
  return "?";
}

std::string_view to_string(Comparison c) {
  switch (c) {
    case Comparison::Less: return "LT";
    case Comparison::Equal: return "EQ";
    case Comparison::Greater: return "GT";
    case Comparison::Incomparable: return "INCOMPARABLE";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Comparison

namespace {

Comparison flip(Comparison c) {
  if (c == Comparison::Less) return Comparison::Greater;
  if (c == Comparison::Greater) return Comparison::Less;
  return c;
}

Comparison from_ordering(std::strong_ordering o) {
  if (o < 0) return Comparison::Less;
  if (o > 0) return Comparison::Greater;
  return Comparison::Equal;
}

// Top/Bot standing in for a whole tuple are read element-wise.
Value::Tuple expand(const Value& v, std::size_t arity) {
  if (v.is_top() || v.is_bot()) return Value::Tuple(arity, v);
  return v.items();
}

void require_numeric(const OrderKind& order, const Value& v) {
  if (!v.is_numeric())
    throw Error(ErrorKind::DomainError, v.to_string() + " is not in the domain of " + order.to_string());
}

void require_tuple_shape(const OrderKind& order, const Value& v) {
  if (v.is_top() || v.is_bot()) return;
  if (!v.is_tuple())
    throw Error(ErrorKind::DomainError, v.to_string() + " is not a tuple for " + order.to_string());
  if (v.items().size() != order.parts().size())
    throw Error(ErrorKind::ShapeMismatch, "arity of " + v.to_string() + " does not match " + order.to_string());
}

// Extremes under an order whose "natural" direction may be reversed.
std::optional<Comparison> compare_extremes(const Value& a, const Value& b, bool reversed) {
  std::optional<Comparison> r;
  if (a.is_bot() || b.is_top()) r = Comparison::Less;
  else if (a.is_top() || b.is_bot()) r = Comparison::Greater;
  if (r && reversed) r = flip(*r);
  return r;
}

}  // namespace

Comparison compare(const OrderKind& order, const Value& a, const Value& b) {
  switch (order.kind()) {
    case OrderKind::Kind::NumLe:
      require_numeric(order, a);
      require_numeric(order, b);
      return from_ordering(numeric_order(a, b));
    case OrderKind::Kind::NumGe:
      require_numeric(order, a);
      require_numeric(order, b);
      return flip(from_ordering(numeric_order(a, b)));
    case OrderKind::Kind::EqOnly:
      if (a == b) return Comparison::Equal;
      return compare_extremes(a, b, false).value_or(Comparison::Incomparable);
    case OrderKind::Kind::ElementWise: {
      require_tuple_shape(order, a);
      require_tuple_shape(order, b);
      if (a == b) return Comparison::Equal;
      const auto n = order.parts().size();
      const auto xs = expand(a, n);
      const auto ys = expand(b, n);
      bool all_le = true;
      bool all_ge = true;
      for (std::size_t i = 0; i < n; ++i) {
        const auto c = compare(order.parts()[i], xs[i], ys[i]);
        if (c == Comparison::Incomparable) return c;
        if (c == Comparison::Greater) all_le = false;
        if (c == Comparison::Less) all_ge = false;
      }
      if (all_le && all_ge) return Comparison::Equal;
      if (all_le) return Comparison::Less;
      if (all_ge) return Comparison::Greater;
      return Comparison::Incomparable;
    }
    case OrderKind::Kind::Custom: {
      const auto& co = *order.custom_order();
      for (const Value* v : {&a, &b}) {
        if (!v->is_top() && !v->is_bot() && co.contains && !co.contains(*v))
          throw Error(ErrorKind::DomainError, v->to_string() + " is not in the domain of " + co.name);
      }
      if (a == b) return Comparison::Equal;
      if (auto ext = compare_extremes(a, b, order.reversed())) return *ext;
      const bool ab = co.leq(a, b);
      const bool ba = co.leq(b, a);
      Comparison c = Comparison::Incomparable;
      if (ab && ba) c = Comparison::Equal;
      else if (ab) c = Comparison::Less;
      else if (ba) c = Comparison::Greater;
      return order.reversed() ? flip(c) : c;
    }
  }
  return Comparison::Incomparable;
}

bool leq(const OrderKind& order, const Value& a, const Value& b) {
  const auto c = compare(order, a, b);
  return c == Comparison::Less || c == Comparison::Equal;
}

bool inhabits(const OrderKind& order, const Value& v) {
  switch (order.kind()) {
    case OrderKind::Kind::NumLe:
    case OrderKind::Kind::NumGe: return v.is_numeric();
    case OrderKind::Kind::EqOnly: return is_void_order(order) ? v.is_void() : true;
    case OrderKind::Kind::ElementWise: {
      if (v.is_top() || v.is_bot()) return true;
      if (!v.is_tuple() || v.items().size() != order.parts().size()) return false;
      for (std::size_t i = 0; i < order.parts().size(); ++i)
        if (!inhabits(order.parts()[i], v.items()[i])) return false;
      return true;
    }
    case OrderKind::Kind::Custom: {
      const auto& co = *order.custom_order();
      return v.is_top() || v.is_bot() || !co.contains || co.contains(v);
    }
  }
  return false;
}

OrderKind dual(const OrderKind& order) {
  switch (order.kind()) {
    case OrderKind::Kind::NumLe: return OrderKind::ge(order.domain());
    case OrderKind::Kind::NumGe: return OrderKind::le(order.domain());
    case OrderKind::Kind::EqOnly: return order;
    case OrderKind::Kind::ElementWise: {
      std::vector<OrderKind> parts;
      parts.reserve(order.parts().size());
      for (const auto& p : order.parts()) parts.push_back(dual(p));
      return OrderKind::elementwise(std::move(parts));
    }
    case OrderKind::Kind::Custom: return OrderKind::custom(order.custom_order(), !order.reversed());
  }
  return order;
}

// ---------------------------------------------------------------------------
// Arithmetic

std::strong_ordering numeric_order(const Value& a, const Value& b) {
  auto rank = [](const Value& v) { return v.is_bot() ? 0 : v.is_top() ? 2 : 1; };
  if (!a.is_numeric() || !b.is_numeric())
    throw Error(ErrorKind::DomainError, "numeric comparison of " + a.to_string() + " and " + b.to_string());
  if (auto c = rank(a) <=> rank(b); c != 0) return c;
  if (a.is_int()) return a.as_int() <=> b.as_int();
  return std::strong_ordering::equal;
}

Value numeric_add(const Value& a, const Value& b) {
  if (!a.is_numeric() || !b.is_numeric())
    throw Error(ErrorKind::DomainError, "cannot add " + a.to_string() + " and " + b.to_string());
  if (a.is_top() || b.is_top()) return Value::top();
  if (a.is_bot() || b.is_bot()) return Value::bot();
  std::int64_t r = 0;
  if (__builtin_add_overflow(a.as_int(), b.as_int(), &r))
    throw Error(ErrorKind::ArithmeticError, "overflow in " + a.to_string() + " + " + b.to_string());
  return Value::integer(r);
}

Value numeric_sub(const Value& a, const Value& b) {
  if (!a.is_numeric() || !b.is_numeric())
    throw Error(ErrorKind::DomainError, "cannot subtract " + b.to_string() + " from " + a.to_string());
  if (a.is_top()) return Value::top();
  if (b.is_top()) return Value::bot();
  if (a.is_bot()) return Value::bot();
  if (b.is_bot()) return Value::top();
  std::int64_t r = 0;
  if (__builtin_sub_overflow(a.as_int(), b.as_int(), &r))
    throw Error(ErrorKind::ArithmeticError, "overflow in " + a.to_string() + " - " + b.to_string());
  return Value::integer(r);
}

Value numeric_mul(const Value& a, const Value& b) {
  if (!a.is_numeric() || !b.is_numeric())
    throw Error(ErrorKind::DomainError, "cannot multiply " + a.to_string() + " and " + b.to_string());
  auto is_zero = [](const Value& v) { return v.is_int() && v.as_int() == 0; };
  if (a.is_top() || b.is_top()) return (is_zero(a) || is_zero(b)) ? Value::integer(0) : Value::top();
  if (a.is_bot() || b.is_bot()) return (is_zero(a) || is_zero(b)) ? Value::integer(0) : Value::bot();
  std::int64_t r = 0;
  if (__builtin_mul_overflow(a.as_int(), b.as_int(), &r))
    throw Error(ErrorKind::ArithmeticError, "overflow in " + a.to_string() + " * " + b.to_string());
  return Value::integer(r);
}

namespace {

Value add_same(const OrderKind& order, const Value& a, const Value& b) {
  switch (order.kind()) {
    case OrderKind::Kind::NumLe:
    case OrderKind::Kind::NumGe:
      require_numeric(order, a);
      require_numeric(order, b);
      return numeric_add(a, b);
    case OrderKind::Kind::ElementWise: {
      require_tuple_shape(order, a);
      require_tuple_shape(order, b);
      const auto n = order.parts().size();
      const auto xs = expand(a, n);
      const auto ys = expand(b, n);
      Value::Tuple out;
      out.reserve(n);
      for (std::size_t i = 0; i < n; ++i) {
        const auto& part = order.parts()[i];
        if (xs[i].is_void()) out.push_back(ys[i]);
        else if (ys[i].is_void()) out.push_back(xs[i]);
        else out.push_back(add_same(part, xs[i], ys[i]));
      }
      return Value::tuple(std::move(out));
    }
    case OrderKind::Kind::EqOnly:
    case OrderKind::Kind::Custom:
      if (a == b) return a;
      throw Error(ErrorKind::DomainError,
                  "no sum of distinct values " + a.to_string() + " and " + b.to_string() + " in " + order.to_string());
  }
  return a;
}

Value sub_same(const OrderKind& order, const Value& p, const Value& c) {
  switch (order.kind()) {
    case OrderKind::Kind::NumLe:
    case OrderKind::Kind::NumGe:
      require_numeric(order, p);
      require_numeric(order, c);
      return numeric_sub(p, c);
    case OrderKind::Kind::ElementWise: {
      require_tuple_shape(order, p);
      require_tuple_shape(order, c);
      const auto n = order.parts().size();
      const auto xs = expand(p, n);
      const auto ys = expand(c, n);
      Value::Tuple out;
      out.reserve(n);
      for (std::size_t i = 0; i < n; ++i) out.push_back(sub_same(order.parts()[i], xs[i], ys[i]));
      return Value::tuple(std::move(out));
    }
    case OrderKind::Kind::EqOnly:
    case OrderKind::Kind::Custom:
      throw Error(ErrorKind::DomainError, "subtraction is not defined on " + order.to_string());
  }
  return p;
}

}  // namespace

std::pair<Value, OrderKind> value_add(const OrderKind& order_a, const Value& a, const OrderKind& order_b,
                                      const Value& b) {
  if (a.is_void()) return {b, order_b};
  if (b.is_void()) return {a, order_a};
  if (order_a == order_b) return {add_same(order_a, a, b), order_a};
  return {Value::tuple({a, b}), OrderKind::elementwise({order_a, order_b})};
}

std::pair<Value, OrderKind> value_sub(const OrderKind& order_p, const Value& p, const OrderKind& order_c,
                                      const Value& c) {
  if (!(order_c == dual(order_p)))
    throw Error(ErrorKind::OrderMismatch,
                "consumer order " + order_c.to_string() + " is not the dual of " + order_p.to_string());
  return {sub_same(order_p, p, c), order_p};
}

std::string check_partial_order(const OrderKind& order, const std::vector<Value>& sample) {
  for (const auto& a : sample)
    if (compare(order, a, a) != Comparison::Equal) return "not reflexive at " + a.to_string();
  for (const auto& a : sample) {
    for (const auto& b : sample) {
      if (a != b && leq(order, a, b) && leq(order, b, a))
        return "not antisymmetric: " + a.to_string() + ", " + b.to_string();
      if (!leq(order, a, b)) continue;
      for (const auto& c : sample) {
        if (leq(order, b, c) && !leq(order, a, c))
          return "not transitive: " + a.to_string() + ", " + b.to_string() + ", " + c.to_string();
      }
    }
  }
  return {};
}

}  // namespace qrm
