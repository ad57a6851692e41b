#pragma once

// Partially-ordered values and the order descriptors that give them meaning.
//
// A Value is a small recursive term: an integer, one of the distinguished
// elements top/bot, the single inhabitant of the void poset, an enumeration
// symbol, or a tuple of values. An OrderKind says how two values of one
// dimension compare. Both are immutable once built.

#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace qrm {

enum class ValueKind { Int, Top, Bot, Void, Enum, Tuple };

class Value {
 public:
  using Tuple = std::vector<Value>;

  Value() : data_(VoidTag{}) {}

  static Value integer(std::int64_t v) { return Value(v); }
  static Value top() { return Value(TopTag{}); }
  static Value bot() { return Value(BotTag{}); }
  static Value void_value() { return Value(VoidTag{}); }
  static Value symbol(std::string name);
  /// Throws DomainError for an empty item list (tuples have arity >= 1).
  static Value tuple(Tuple items);

  ValueKind kind() const noexcept { return static_cast<ValueKind>(data_.index()); }
  bool is_int() const noexcept { return kind() == ValueKind::Int; }
  bool is_top() const noexcept { return kind() == ValueKind::Top; }
  bool is_bot() const noexcept { return kind() == ValueKind::Bot; }
  bool is_void() const noexcept { return kind() == ValueKind::Void; }
  bool is_symbol() const noexcept { return kind() == ValueKind::Enum; }
  bool is_tuple() const noexcept { return kind() == ValueKind::Tuple; }
  /// Int, Top or Bot: a member of an integer-backed domain.
  bool is_numeric() const noexcept { return is_int() || is_top() || is_bot(); }

  std::int64_t as_int() const;
  const std::string& as_symbol() const;
  const Tuple& items() const;

  std::string to_string() const;

  friend bool operator==(const Value& a, const Value& b) { return a.data_ == b.data_; }
  /// Canonical total order used for sorting output; unrelated to any poset.
  friend std::strong_ordering operator<=>(const Value& a, const Value& b);

 private:
  struct TopTag {
    bool operator==(const TopTag&) const = default;
  };
  struct BotTag {
    bool operator==(const BotTag&) const = default;
  };
  struct VoidTag {
    bool operator==(const VoidTag&) const = default;
  };

  explicit Value(std::int64_t v) : data_(v) {}
  explicit Value(TopTag t) : data_(t) {}
  explicit Value(BotTag t) : data_(t) {}
  explicit Value(VoidTag t) : data_(t) {}

  // Alternative order must match ValueKind.
  std::variant<std::int64_t, TopTag, BotTag, VoidTag, std::string, Tuple> data_;
};

std::size_t hash_value(const Value& v) noexcept;

/// A user-supplied partial order. `leq(a, b)` must be reflexive, transitive
/// and antisymmetric on the declared domain; see `check_partial_order`.
struct CustomOrder {
  std::string name;
  std::function<bool(const Value&, const Value&)> leq;
  /// Optional domain membership test; accepts everything when empty.
  std::function<bool(const Value&)> contains;
};

class OrderKind {
 public:
  enum class Kind { NumLe, NumGe, EqOnly, ElementWise, Custom };

  /// Integers under <=. `domain` names the carrier (e.g. "bw"); two orders
  /// are only the same poset if their domains match.
  static OrderKind le(std::string domain = {});
  static OrderKind ge(std::string domain = {});
  static OrderKind eq(std::string domain = {});
  static OrderKind elementwise(std::vector<OrderKind> parts);
  static OrderKind custom(std::shared_ptr<const CustomOrder> order, bool reversed = false);

  Kind kind() const noexcept { return kind_; }
  const std::string& domain() const noexcept { return domain_; }
  const std::vector<OrderKind>& parts() const noexcept { return parts_; }
  const std::shared_ptr<const CustomOrder>& custom_order() const noexcept { return custom_; }
  bool reversed() const noexcept { return reversed_; }

  std::string to_string() const;

  friend bool operator==(const OrderKind& a, const OrderKind& b);

 private:
  OrderKind() = default;

  Kind kind_ = Kind::EqOnly;
  std::string domain_;
  std::vector<OrderKind> parts_;
  std::shared_ptr<const CustomOrder> custom_;
  bool reversed_ = false;
};

/// The void poset used for absent interface parts. Its only inhabitant is the
/// void value.
inline OrderKind void_order() { return OrderKind::eq("void"); }
inline bool is_void_order(const OrderKind& o) { return o == void_order(); }

enum class Comparison { Less, Equal, Greater, Incomparable };

std::string_view to_string(Comparison c);

/// Compares `a` and `b` under `order`. Bot is below and Top above every other
/// value, except under NumGe (and reversed custom orders) where the numeric
/// reading applies and their roles swap.
Comparison compare(const OrderKind& order, const Value& a, const Value& b);

/// a <= b under `order`.
bool leq(const OrderKind& order, const Value& a, const Value& b);

/// True iff `v` is a member of the domain of `order`.
bool inhabits(const OrderKind& order, const Value& v);

OrderKind dual(const OrderKind& order);

/// Generalized poset addition. Identical posets add (saturating at top/bot);
/// a void operand is the identity; otherwise the operands are paired.
std::pair<Value, OrderKind> value_add(const OrderKind& order_a, const Value& a,
                                      const OrderKind& order_b, const Value& b);

/// Generalized poset subtraction of consumer `c` from producer `p`. Requires
/// `order_c == dual(order_p)`.
std::pair<Value, OrderKind> value_sub(const OrderKind& order_p, const Value& p,
                                      const OrderKind& order_c, const Value& c);

// Saturating integer arithmetic over Int/Top/Bot. Overflow between finite
// values throws ArithmeticError.
Value numeric_add(const Value& a, const Value& b);
Value numeric_sub(const Value& a, const Value& b);
Value numeric_mul(const Value& a, const Value& b);
/// Bot < every integer < Top.
std::strong_ordering numeric_order(const Value& a, const Value& b);

/// Sampling check that `order` behaves as a partial order on `sample`.
/// Returns a description of the first violation, or an empty string.
std::string check_partial_order(const OrderKind& order, const std::vector<Value>& sample);

}  // namespace qrm

template <>
struct std::hash<qrm::Value> {
  std::size_t operator()(const qrm::Value& v) const noexcept { return qrm::hash_value(v); }
};
