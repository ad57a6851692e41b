#pragma once

// Syntax tree of a QRML model. Source locations are carried for diagnostics
// but ignored by the equality operators, so a printed and re-parsed model
// compares equal to the original.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace qrm::qrml {

struct SourceLocation {
  std::size_t line = 1;
  std::size_t column = 1;
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { Int, Bot, Top, Path, Tuple, Unary, Binary, In };

  Kind kind = Kind::Int;
  std::int64_t number = 0;
  /// Path segments ("hw", "scalers", "comp").
  std::vector<std::string> path;
  /// Tuple elements, or the right-hand set of `in`.
  std::vector<ExprPtr> items;
  /// "not", "-" (unary), "or", "and", "=", "!=", "<=", ">=", "<", ">", "+", "-".
  std::string op;
  ExprPtr lhs;
  ExprPtr rhs;
  SourceLocation loc;

  static ExprPtr integer(std::int64_t v, SourceLocation at = {});
  static ExprPtr bot(SourceLocation at = {});
  static ExprPtr top(SourceLocation at = {});
  static ExprPtr make_path(std::vector<std::string> segments, SourceLocation at = {});
  static ExprPtr tuple(std::vector<ExprPtr> items, SourceLocation at = {});
  static ExprPtr unary(std::string op, ExprPtr operand, SourceLocation at = {});
  static ExprPtr binary(std::string op, ExprPtr lhs, ExprPtr rhs, SourceLocation at = {});
  static ExprPtr in(ExprPtr lhs, std::vector<ExprPtr> set, SourceLocation at = {});
};

bool operator==(const Expr& a, const Expr& b);
bool same_expr(const ExprPtr& a, const ExprPtr& b);

/// Type reference: "int" or a declared type name.
struct TypeRef {
  std::string name;
  SourceLocation loc;

  bool is_int() const { return name == "int"; }
  friend bool operator==(const TypeRef& a, const TypeRef& b) { return a.name == b.name; }
};

struct Field {
  std::string name;
  TypeRef type;

  friend bool operator==(const Field&, const Field&) = default;
};

/// `(a, b, c)` or a single name, binding the parts of one operand.
struct Pattern {
  std::vector<std::string> names;
  friend bool operator==(const Pattern&, const Pattern&) = default;
};

struct OrderClause {
  enum class Kind { Default, ElementWise, OrderedBy };
  Kind kind = Kind::Default;
  Pattern left;
  Pattern right;
  ExprPtr predicate;

  friend bool operator==(const OrderClause& a, const OrderClause& b) {
    return a.kind == b.kind && a.left == b.left && a.right == b.right && same_expr(a.predicate, b.predicate);
  }
};

struct TypeDef {
  /// "typedef", "channel" or "budget"; all three define a poset.
  std::string keyword;
  std::string name;
  /// Set for `: int` and `: Name` bodies.
  std::optional<TypeRef> alias;
  /// Set for combinations.
  std::vector<Field> fields;
  OrderClause order;
  SourceLocation loc;

  friend bool operator==(const TypeDef& a, const TypeDef& b) {
    return a.keyword == b.keyword && a.name == b.name && a.alias == b.alias && a.fields == b.fields &&
           a.order == b.order;
  }
};

enum class Direction { Provides, Requires, Input, Output, Quality, Parameter };

std::string_view keyword(Direction d);

struct PortDecl {
  Direction direction = Direction::Provides;
  std::string name;
  TypeRef type;
  /// Brace-enclosed constraints; each one a conjunct.
  std::vector<ExprPtr> constraints;
  ExprPtr from;
  SourceLocation loc;

  friend bool operator==(const PortDecl& a, const PortDecl& b);
};

struct Instance {
  std::string name;
  std::string component;
  SourceLocation loc;

  friend bool operator==(const Instance& a, const Instance& b) {
    return a.name == b.name && a.component == b.component;
  }
};

/// `contains x : A` or `contains x : A or y : B ...`.
struct ContainsDecl {
  std::vector<Instance> alternatives;
  friend bool operator==(const ContainsDecl&, const ContainsDecl&) = default;
};

struct ComponentDef {
  std::string name;
  std::vector<PortDecl> ports;
  std::vector<ContainsDecl> contains;
  std::vector<ExprPtr> constraints;
  SourceLocation loc;

  friend bool operator==(const ComponentDef& a, const ComponentDef& b);
};

struct Ast {
  std::vector<TypeDef> types;
  std::vector<ComponentDef> components;

  friend bool operator==(const Ast&, const Ast&) = default;
};

}  // namespace qrm::qrml
