#include "qrm/qrml/model.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>

#include "qrm/error.hpp"
#include "qrm/qrml/parser.hpp"

namespace qrm::qrml {

namespace {

std::string at(const std::string& file, SourceLocation loc) {
  return file + ":" + std::to_string(loc.line) + ":" + std::to_string(loc.column) + ": ";
}

std::string dotted(const std::vector<std::string>& path) {
  std::string out;
  for (std::size_t i = 0; i < path.size(); ++i) out += (i ? "." : "") + path[i];
  return out;
}

// ---------------------------------------------------------------------------
// Shapes

struct Shape;
using ShapePtr = std::shared_ptr<const Shape>;

struct Shape {
  std::string name;
  /// Set for leaves. A leaf with fields has a custom order over the tuple of
  /// its field values.
  std::optional<OrderKind> order;
  std::vector<std::pair<std::string, ShapePtr>> fields;

  bool leaf() const { return order.has_value(); }
  std::optional<std::size_t> field_index(const std::string& f) const {
    for (std::size_t i = 0; i < fields.size(); ++i)
      if (fields[i].first == f) return i;
    return std::nullopt;
  }
};

std::size_t leaf_count(const Shape& s) {
  if (s.leaf()) return 1;
  std::size_t n = 0;
  for (const auto& [name, f] : s.fields) n += leaf_count(*f);
  return n;
}

std::size_t scalar_count(const Shape& s) {
  if (s.leaf() && s.fields.empty()) return 1;
  std::size_t n = 0;
  for (const auto& [name, f] : s.fields) n += scalar_count(*f);
  return n;
}

void collect_orders(const Shape& s, std::vector<OrderKind>& out) {
  if (s.leaf()) {
    out.push_back(*s.order);
    return;
  }
  for (const auto& [name, f] : s.fields) collect_orders(*f, out);
}

OrderKind pack_order(const std::vector<OrderKind>& leaves) {
  if (leaves.empty()) return void_order();
  if (leaves.size() == 1) return leaves.front();
  return OrderKind::elementwise(leaves);
}

OrderKind packed_order(const Shape& s) {
  std::vector<OrderKind> leaves;
  collect_orders(s, leaves);
  return pack_order(leaves);
}

Value pack(const std::vector<Value>& leaves) {
  if (leaves.empty()) return Value::void_value();
  if (leaves.size() == 1) return leaves.front();
  return Value::tuple(leaves);
}

std::vector<Value> unpack(const Value& v, std::size_t n) {
  if (n == 0) return {};
  if (n == 1) return {v};
  if (v.is_tuple() && v.items().size() == n) return v.items();
  if (v.is_top() || v.is_bot()) return std::vector<Value>(n, v);
  throw Error(ErrorKind::ShapeMismatch, "value " + v.to_string() + " does not have " + std::to_string(n) + " parts");
}

void scalars(const Value& v, std::vector<Value>& out) {
  if (v.is_tuple()) {
    for (const auto& item : v.items()) scalars(item, out);
  } else if (!v.is_void()) {
    out.push_back(v);
  }
}

std::vector<Value> scalars(const Value& v) {
  std::vector<Value> out;
  scalars(v, out);
  return out;
}

void broadcast(const Shape& s, const Value& extreme, std::vector<Value>& out) {
  if (s.leaf()) {
    out.push_back(extreme);
    return;
  }
  for (const auto& [name, f] : s.fields) broadcast(*f, extreme, out);
}

void consume(const Shape& s, const std::vector<Value>& sc, std::size_t& pos, std::vector<Value>& out) {
  if (s.leaf() && s.fields.empty()) {
    out.push_back(sc[pos++]);
  } else if (s.leaf()) {
    Value::Tuple items;
    for (const auto& [name, f] : s.fields) {
      std::vector<Value> part;
      consume(*f, sc, pos, part);
      items.push_back(pack(part));
    }
    out.push_back(Value::tuple(std::move(items)));
  } else {
    for (const auto& [name, f] : s.fields) consume(*f, sc, pos, out);
  }
}

/// Leaves of a value of shape `s`, accepting nested or flat tuples.
std::vector<Value> to_leaves(const Shape& s, const Value& v) {
  std::vector<Value> out;
  if ((v.is_top() || v.is_bot()) && scalar_count(s) != 1) {
    broadcast(s, v, out);
    return out;
  }
  const auto sc = scalars(v);
  if (sc.size() != scalar_count(s))
    throw Error(ErrorKind::ConstraintTypeError, "value " + v.to_string() + " does not fit type " + s.name);
  std::size_t pos = 0;
  consume(s, sc, pos, out);
  return out;
}

struct Selection {
  ShapePtr shape;
  std::vector<Value> leaves;
};

Selection select(ShapePtr shape, std::vector<Value> leaves, const std::vector<std::string>& path, std::size_t from) {
  for (std::size_t k = from; k < path.size(); ++k) {
    const auto idx = shape->field_index(path[k]);
    if (!idx) throw Error(ErrorKind::InvalidArgument, "type " + shape->name + " has no part " + path[k]);
    const auto& field = shape->fields[*idx].second;
    if (shape->leaf()) {
      const auto& v = leaves.front();
      leaves = (v.is_top() || v.is_bot()) ? to_leaves(*field, v) : to_leaves(*field, v.items().at(*idx));
    } else {
      std::size_t offset = 0;
      for (std::size_t i = 0; i < *idx; ++i) offset += leaf_count(*shape->fields[i].second);
      leaves = std::vector<Value>(leaves.begin() + static_cast<std::ptrdiff_t>(offset),
                                  leaves.begin() + static_cast<std::ptrdiff_t>(offset + leaf_count(*field)));
    }
    shape = field;
  }
  return {std::move(shape), std::move(leaves)};
}

/// Leaf range of a path below a record, as far as it can be followed without
/// looking inside a custom-ordered leaf.
struct StaticRange {
  std::size_t offset = 0;
  std::size_t count = 0;
  bool exact = true;
};

StaticRange static_range(ShapePtr shape, const std::vector<std::string>& path, std::size_t from) {
  StaticRange r{0, leaf_count(*shape), true};
  for (std::size_t k = from; k < path.size(); ++k) {
    if (shape->leaf()) {
      r.exact = false;
      return r;
    }
    const auto idx = shape->field_index(path[k]);
    if (!idx) throw Error(ErrorKind::InvalidArgument, "type " + shape->name + " has no part " + path[k]);
    for (std::size_t i = 0; i < *idx; ++i) r.offset += leaf_count(*shape->fields[i].second);
    shape = shape->fields[*idx].second;
    r.count = leaf_count(*shape);
  }
  return r;
}

void check_selectable(ShapePtr shape, const std::vector<std::string>& path, std::size_t from) {
  for (std::size_t k = from; k < path.size(); ++k) {
    const auto idx = shape->field_index(path[k]);
    if (!idx) throw Error(ErrorKind::InvalidArgument, "type " + shape->name + " has no part " + path[k]);
    shape = shape->fields[*idx].second;
  }
}

// ---------------------------------------------------------------------------
// Expressions

struct Typed {
  Value value;
  std::optional<OrderKind> order;
};

using Resolver = std::function<Typed(const Expr&)>;

Value elementwise(const Value& a, const Value& b, Value (*op)(const Value&, const Value&)) {
  const auto sa = scalars(a);
  const auto sb = scalars(b);
  if (sa.size() != sb.size() || sa.empty())
    throw Error(ErrorKind::ConstraintTypeError, "operands " + a.to_string() + " and " + b.to_string() + " differ in shape");
  Value::Tuple out;
  for (std::size_t i = 0; i < sa.size(); ++i) {
    if (!sa[i].is_numeric() || !sb[i].is_numeric())
      throw Error(ErrorKind::ConstraintTypeError, "arithmetic on a non-numeric value");
    out.push_back(op(sa[i], sb[i]));
  }
  return out.size() == 1 ? out.front() : Value::tuple(std::move(out));
}

/// Reshapes a literal to the tuple structure of an element-wise order.
Value fit(const Value& v, const OrderKind& order) {
  if (order.kind() != OrderKind::Kind::ElementWise || !v.is_tuple() || v.items().size() == order.parts().size())
    return v;
  auto sc = scalars(v);
  return sc.size() == order.parts().size() ? Value::tuple(std::move(sc)) : v;
}

class Evaluator {
 public:
  explicit Evaluator(const Resolver& resolve) : resolve_(resolve) {}

  Typed value(const Expr& e) const {
    switch (e.kind) {
      case Expr::Kind::Int: return {Value::integer(e.number), std::nullopt};
      case Expr::Kind::Bot: return {Value::bot(), std::nullopt};
      case Expr::Kind::Top: return {Value::top(), std::nullopt};
      case Expr::Kind::Path: return resolve_(e);
      case Expr::Kind::Tuple: {
        Value::Tuple items;
        for (const auto& item : e.items) items.push_back(value(*item).value);
        return {Value::tuple(std::move(items)), std::nullopt};
      }
      case Expr::Kind::Unary:
        if (e.op == "-") return {elementwise(zero_like(value(*e.lhs).value), value(*e.lhs).value, numeric_sub), {}};
        break;
      case Expr::Kind::Binary:
        if (e.op == "+") return {elementwise(value(*e.lhs).value, value(*e.rhs).value, numeric_add), {}};
        if (e.op == "-") return {elementwise(value(*e.lhs).value, value(*e.rhs).value, numeric_sub), {}};
        break;
      case Expr::Kind::In: break;
    }
    throw Error(ErrorKind::ConstraintTypeError, "a condition is used where a value is expected");
  }

  bool truth(const Expr& e) const {
    if (e.kind == Expr::Kind::Unary && e.op == "not") return !truth(*e.lhs);
    if (e.kind == Expr::Kind::In) {
      const auto v = scalars(value(*e.lhs).value);
      for (const auto& item : e.items)
        if (scalars(value(*item).value) == v) return true;
      return false;
    }
    if (e.kind != Expr::Kind::Binary) throw Error(ErrorKind::ConstraintTypeError, "a value is used as a condition");
    if (e.op == "and") return truth(*e.lhs) && truth(*e.rhs);
    if (e.op == "or") return truth(*e.lhs) || truth(*e.rhs);
    const auto a = value(*e.lhs);
    const auto b = value(*e.rhs);
    if (e.op == "=") return scalars(a.value) == scalars(b.value);
    if (e.op == "!=") return scalars(a.value) != scalars(b.value);
    const auto c = relation(a, b);
    if (e.op == "<=") return c == Comparison::Less || c == Comparison::Equal;
    if (e.op == "<") return c == Comparison::Less;
    if (e.op == ">=") return c == Comparison::Greater || c == Comparison::Equal;
    if (e.op == ">") return c == Comparison::Greater;
    throw Error(ErrorKind::ConstraintTypeError, "operator " + e.op + " is not a condition");
  }

 private:
  static Value zero_like(const Value& v) {
    const auto n = scalars(v).size();
    if (n == 1) return Value::integer(0);
    return Value::tuple(Value::Tuple(n, Value::integer(0)));
  }

  // Uses the order of whichever side has a declared type, else numeric
  // comparison of the scalars.
  static Comparison relation(const Typed& a, const Typed& b) {
    if (const auto& order = a.order ? a.order : b.order)
      return compare(*order, fit(a.value, *order), fit(b.value, *order));
    const auto sa = scalars(a.value);
    const auto sb = scalars(b.value);
    if (sa.size() != sb.size())
      throw Error(ErrorKind::ConstraintTypeError,
                  "cannot compare " + a.value.to_string() + " with " + b.value.to_string());
    bool le = true;
    bool ge = true;
    for (std::size_t i = 0; i < sa.size(); ++i) {
      if (!sa[i].is_numeric() || !sb[i].is_numeric())
        throw Error(ErrorKind::ConstraintTypeError, "ordering a non-numeric value");
      const auto c = numeric_order(sa[i], sb[i]);
      le = le && c <= 0;
      ge = ge && c >= 0;
    }
    if (le && ge) return Comparison::Equal;
    if (le) return Comparison::Less;
    if (ge) return Comparison::Greater;
    return Comparison::Incomparable;
  }

  const Resolver& resolve_;
};

void collect_paths(const ExprPtr& e, std::vector<const Expr*>& out) {
  if (!e) return;
  if (e->kind == Expr::Kind::Path) out.push_back(e.get());
  collect_paths(e->lhs, out);
  collect_paths(e->rhs, out);
  for (const auto& item : e->items) collect_paths(item, out);
}

void conjuncts(const ExprPtr& e, std::vector<ExprPtr>& out) {
  if (e->kind == Expr::Kind::Binary && e->op == "and") {
    conjuncts(e->lhs, out);
    conjuncts(e->rhs, out);
  } else {
    out.push_back(e);
  }
}

// ---------------------------------------------------------------------------
// Types

OrderKind transform_leaf(const OrderKind& o, const std::string& op) {
  if (op == ">=") return dual(o);
  if (op == "=") return OrderKind::eq(o.domain());
  return o;
}

ShapePtr transform(const ShapePtr& s, const std::string& op) {
  if (op == "<=") return s;
  auto out = std::make_shared<Shape>(*s);
  if (out->leaf()) {
    out->order = transform_leaf(*out->order, op);
  } else {
    for (auto& [name, f] : out->fields) f = transform(f, op);
  }
  return out;
}

class TypeTable {
 public:
  TypeTable(const Ast& ast, std::string file) : file_(std::move(file)) {
    for (const auto& t : ast.types) {
      if (t.name == "int" || defs_.count(t.name))
        throw Error(ErrorKind::DuplicateName, at(file_, t.loc) + "type " + t.name + " is declared twice");
      defs_.emplace(t.name, &t);
    }
    for (const auto& t : ast.types) elaborate(t.name, t.loc);
  }

  ShapePtr resolve(const TypeRef& ref) { return elaborate(ref.name, ref.loc); }

  ShapePtr find(const std::string& name) const {
    auto it = done_.find(name);
    if (it == done_.end()) throw Error(ErrorKind::UnresolvedType, "no type named " + name);
    return it->second;
  }

 private:
  ShapePtr elaborate(const std::string& name, SourceLocation use) {
    if (name == "int") {
      static const auto plain = std::make_shared<const Shape>(Shape{"int", OrderKind::le(), {}});
      return plain;
    }
    if (auto it = done_.find(name); it != done_.end()) return it->second;
    auto def = defs_.find(name);
    if (def == defs_.end()) throw Error(ErrorKind::UnresolvedType, at(file_, use) + "unknown type " + name);
    if (!active_.insert(name).second)
      throw Error(ErrorKind::UnresolvedType, at(file_, use) + "type " + name + " is defined in terms of itself");
    auto shape = build(*def->second);
    active_.erase(name);
    done_.emplace(name, shape);
    return shape;
  }

  ShapePtr build(const TypeDef& t) {
    ShapePtr base;
    if (t.alias) {
      auto s = std::make_shared<Shape>(*elaborate(t.alias->name, t.alias->loc));
      s->name = t.name;
      if (t.alias->is_int()) s->order = OrderKind::le(t.name);
      base = s;
    } else {
      auto s = std::make_shared<Shape>();
      s->name = t.name;
      std::set<std::string> seen;
      for (const auto& f : t.fields) {
        if (!seen.insert(f.name).second)
          throw Error(ErrorKind::DuplicateName, at(file_, t.loc) + "part " + f.name + " appears twice in " + t.name);
        s->fields.emplace_back(f.name, elaborate(f.type.name, f.type.loc));
      }
      base = s;
    }
    if (t.order.kind != OrderClause::Kind::OrderedBy) return base;
    return ordered_by(t, base);
  }

  ShapePtr ordered_by(const TypeDef& t, const ShapePtr& base) {
    const auto& left = t.order.left.names;
    const auto& right = t.order.right.names;
    std::vector<std::pair<std::string, ShapePtr>> parts = base->leaf() && base->fields.empty()
                                                              ? std::vector<std::pair<std::string, ShapePtr>>{{t.name, base}}
                                                              : base->fields;
    const bool scalar = parts.size() == 1 && parts.front().second == base;
    if (left.size() != parts.size() || right.size() != parts.size())
      throw Error(ErrorKind::IllFormedOrder,
                  at(file_, t.loc) + "patterns of " + t.name + " must bind " + std::to_string(parts.size()) + " parts");

    std::map<std::string, std::pair<bool, std::size_t>> bound;  // name -> (is left, position)
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (!bound.emplace(left[i], std::pair{true, i}).second || !bound.emplace(right[i], std::pair{false, i}).second)
        throw Error(ErrorKind::IllFormedOrder, at(file_, t.loc) + "pattern names of " + t.name + " must be distinct");
    }
    std::vector<const Expr*> paths;
    collect_paths(t.order.predicate, paths);
    bool uses_left = false;
    bool uses_right = false;
    for (const auto* p : paths) {
      auto it = bound.find(p->path.front());
      if (it == bound.end())
        throw Error(ErrorKind::IllFormedOrder, at(file_, p->loc) + "unbound name " + p->path.front());
      (it->second.first ? uses_left : uses_right) = true;
    }
    if (!uses_left || !uses_right)
      throw Error(ErrorKind::IllFormedOrder, at(file_, t.loc) + "the order of " + t.name + " must relate both operands");

    if (auto split = separable(t.order.predicate, bound, parts.size())) {
      if (scalar) {
        auto s = std::make_shared<Shape>(*transform(base, (*split)[0]));
        s->name = t.name;
        return s;
      }
      auto s = std::make_shared<Shape>();
      s->name = t.name;
      for (std::size_t i = 0; i < parts.size(); ++i) s->fields.emplace_back(parts[i].first, transform(parts[i].second, (*split)[i]));
      return s;
    }

    auto custom = std::make_shared<CustomOrder>();
    custom->name = t.name;
    const auto predicate = t.order.predicate;
    std::vector<OrderKind> part_orders;
    for (const auto& [name, shape] : parts) part_orders.push_back(packed_order(*shape));
    custom->leq = [=](const Value& a, const Value& b) {
      std::map<std::string, Typed> env;
      for (std::size_t i = 0; i < left.size(); ++i) {
        env[left[i]] = {scalar ? a : a.items().at(i), part_orders[i]};
        env[right[i]] = {scalar ? b : b.items().at(i), part_orders[i]};
      }
      const Resolver resolve = [&](const Expr& p) {
        if (p.path.size() != 1) throw Error(ErrorKind::IllFormedOrder, "part access in an order predicate");
        return env.at(p.path.front());
      };
      return Evaluator(resolve).truth(*predicate);
    };
    custom->contains = [=](const Value& v) {
      if (scalar) return inhabits(part_orders[0], v);
      if (!v.is_tuple() || v.items().size() != part_orders.size()) return false;
      for (std::size_t i = 0; i < part_orders.size(); ++i)
        if (!inhabits(part_orders[i], v.items()[i])) return false;
      return true;
    };
    auto s = std::make_shared<Shape>();
    s->name = t.name;
    s->order = OrderKind::custom(custom);
    if (!scalar) s->fields = parts;
    return s;
  }

  // One relation per part, each between the two operands' parts at the same
  // position: the predicate is then the product of those relations.
  static std::optional<std::vector<std::string>> separable(const ExprPtr& predicate,
                                                           const std::map<std::string, std::pair<bool, std::size_t>>& bound,
                                                           std::size_t n) {
    std::vector<ExprPtr> atoms;
    conjuncts(predicate, atoms);
    std::vector<std::string> ops(n);
    for (const auto& a : atoms) {
      if (a->kind != Expr::Kind::Binary || (a->op != "=" && a->op != "<=" && a->op != ">=")) return std::nullopt;
      if (a->lhs->kind != Expr::Kind::Path || a->rhs->kind != Expr::Kind::Path) return std::nullopt;
      if (a->lhs->path.size() != 1 || a->rhs->path.size() != 1) return std::nullopt;
      const auto& l = bound.at(a->lhs->path.front());
      const auto& r = bound.at(a->rhs->path.front());
      if (l.first == r.first || l.second != r.second || !ops[l.second].empty()) return std::nullopt;
      std::string op = a->op;
      if (!l.first && op != "=") op = op == "<=" ? ">=" : "<=";
      ops[l.second] = op;
    }
    for (const auto& op : ops)
      if (op.empty()) return std::nullopt;
    return ops;
  }

  std::string file_;
  std::map<std::string, const TypeDef*> defs_;
  std::map<std::string, ShapePtr> done_;
  std::set<std::string> active_;
};

// ---------------------------------------------------------------------------
// Components

Part part_of(Direction d) {
  switch (d) {
    case Direction::Input: return Part::Input;
    case Direction::Output: return Part::Output;
    case Direction::Requires: return Part::Required;
    case Direction::Provides: return Part::Provided;
    case Direction::Quality: return Part::Quality;
    case Direction::Parameter: return Part::Parameters;
  }
  return Part::Input;
}

struct PortInfo {
  const PortDecl* decl;
  ShapePtr shape;
  Part part;
  std::size_t offset;
  std::size_t count;
};

struct Layout {
  const ComponentDef* def = nullptr;
  std::vector<PortInfo> ports;
  std::map<std::string, std::size_t> port_index;
  std::map<std::string, const Instance*> instances;
  PartOrders orders = void_parts();
  std::array<std::vector<std::size_t>, 6> part_ports;
  std::size_t leaves = 0;
  /// All conjuncts of port constraints, from-clauses and constraint
  /// declarations, in source order.
  std::vector<ExprPtr> clauses;

  const PortInfo* port(const std::string& name) const {
    auto it = port_index.find(name);
    return it == port_index.end() ? nullptr : &ports[it->second];
  }

  /// Per-port leaves of one configuration, indexed like the own leaves.
  std::vector<Value> split(const Configuration& c) const {
    std::vector<Value> out(leaves);
    for (std::size_t p = 0; p < 6; ++p) {
      std::size_t n = 0;
      for (auto i : part_ports[p]) n += ports[i].count;
      const auto values = unpack(c[p], n);
      std::size_t k = 0;
      for (auto i : part_ports[p])
        for (std::size_t j = 0; j < ports[i].count; ++j) out[ports[i].offset + j] = values[k++];
    }
    return out;
  }

  PartValues join(const std::vector<Value>& own) const {
    PartValues out;
    for (std::size_t p = 0; p < 6; ++p) {
      std::vector<Value> values;
      for (auto i : part_ports[p])
        for (std::size_t j = 0; j < ports[i].count; ++j) values.push_back(own[ports[i].offset + j]);
      out[p] = pack(values);
    }
    return out;
  }
};

struct Generator {
  const Expr* target;
  std::size_t offset;
  std::size_t count;
  ShapePtr shape;
  std::vector<ExprPtr> values;
};

}  // namespace

// ---------------------------------------------------------------------------

struct Model::Impl {
  Ast ast;
  std::string file;
  std::unique_ptr<TypeTable> types;
  std::map<std::string, Layout> layouts;

  mutable std::mutex mutex;
  mutable std::map<std::string, QRMInterface> cache;

  void build() {
    types = std::make_unique<TypeTable>(ast, file);
    for (const auto& c : ast.components) {
      if (layouts.count(c.name))
        throw Error(ErrorKind::DuplicateName, at(file, c.loc) + "component " + c.name + " is declared twice");
      layouts.emplace(c.name, layout(c));
    }
    for (const auto& [name, l] : layouts) validate(l);
    std::set<std::string> finished;
    for (const auto& [name, l] : layouts) {
      std::vector<std::string> stack;
      acyclic(name, stack, finished);
    }
  }

  Layout layout(const ComponentDef& c) const {
    Layout l;
    l.def = &c;
    std::array<std::vector<OrderKind>, 6> leaf_orders;
    for (const auto& p : c.ports) {
      if (l.port_index.count(p.name))
        throw Error(ErrorKind::DuplicateName, at(file, p.loc) + "port " + p.name + " is declared twice in " + c.name);
      auto shape = types->resolve(p.type);
      const auto part = part_of(p.direction);
      std::vector<OrderKind> orders;
      collect_orders(*shape, orders);
      const bool flip = p.direction == Direction::Requires || p.direction == Direction::Input;
      for (auto& o : orders) leaf_orders[static_cast<std::size_t>(part)].push_back(flip ? dual(o) : o);
      l.port_index.emplace(p.name, l.ports.size());
      l.part_ports[static_cast<std::size_t>(part)].push_back(l.ports.size());
      l.ports.push_back({&p, shape, part, l.leaves, orders.size()});
      l.leaves += orders.size();

      for (const auto& e : p.constraints) conjuncts(e, l.clauses);
      if (p.from) l.clauses.push_back(Expr::binary("=", Expr::make_path({p.name}, p.loc), p.from, p.from->loc));
    }
    for (std::size_t i = 0; i < 6; ++i) l.orders[i] = pack_order(leaf_orders[i]);
    for (const auto& decl : c.contains)
      for (const auto& inst : decl.alternatives) {
        if (l.port_index.count(inst.name) || l.instances.count(inst.name))
          throw Error(ErrorKind::DuplicateName, at(file, inst.loc) + "name " + inst.name + " is used twice in " + c.name);
        l.instances.emplace(inst.name, &inst);
      }
    for (const auto& e : c.constraints) conjuncts(e, l.clauses);
    return l;
  }

  void validate(const Layout& l) const {
    for (const auto& [name, inst] : l.instances)
      if (!layouts.count(inst->component))
        throw Error(ErrorKind::UnknownComponent, at(file, inst->loc) + "unknown component " + inst->component);
    for (const auto& clause : l.clauses) {
      std::vector<const Expr*> paths;
      collect_paths(clause, paths);
      for (const auto* p : paths) {
        try {
          if (const auto* port = l.port(p->path.front())) {
            check_selectable(port->shape, p->path, 1);
          } else if (auto it = l.instances.find(p->path.front()); it != l.instances.end()) {
            const auto& sub = layouts.at(it->second->component);
            const auto* sub_port = p->path.size() > 1 ? sub.port(p->path[1]) : nullptr;
            if (!sub_port)
              throw Error(ErrorKind::InvalidArgument, it->second->component + " has no port " +
                                                          (p->path.size() > 1 ? p->path[1] : std::string("(none given)")));
            check_selectable(sub_port->shape, p->path, 2);
          } else {
            throw Error(ErrorKind::InvalidArgument, "unknown name " + p->path.front());
          }
        } catch (const Error& e) {
          throw Error(e.kind(), at(file, p->loc) + dotted(p->path) + ": " + e.what());
        }
      }
    }
  }

  void acyclic(const std::string& name, std::vector<std::string>& stack, std::set<std::string>& finished) const {
    if (finished.count(name)) return;
    if (std::find(stack.begin(), stack.end(), name) != stack.end()) {
      std::string cycle;
      for (const auto& s : stack) cycle += s + " -> ";
      throw Error(ErrorKind::CyclicContainment, cycle + name);
    }
    stack.push_back(name);
    for (const auto& [inst, decl] : layouts.at(name).instances) acyclic(decl->component, stack, finished);
    stack.pop_back();
    finished.insert(name);
  }

  QRMInterface evaluate(const std::string& name) const {
    {
      std::lock_guard lock(mutex);
      if (auto it = cache.find(name); it != cache.end()) return it->second;
    }
    auto it = layouts.find(name);
    if (it == layouts.end()) throw Error(ErrorKind::UnknownComponent, "no component named " + name);
    auto result = compute(it->second);
    std::lock_guard lock(mutex);
    return cache.emplace(name, std::move(result)).first->second;
  }

  QRMInterface compute(const Layout& l) const {
    // One choice per combination of alternatives.
    std::vector<std::vector<const Instance*>> choices{{}};
    for (const auto& decl : l.def->contains) {
      std::vector<std::vector<const Instance*>> next;
      for (const auto& partial : choices)
        for (const auto& inst : decl.alternatives) {
          auto c = partial;
          c.push_back(&inst);
          next.push_back(std::move(c));
        }
      choices = std::move(next);
    }
    std::vector<PartValues> configs;
    for (const auto& chosen : choices) evaluate_choice(l, chosen, configs);
    return QRMInterface(minimize(QRMInterface(l.orders, configs).set()));
  }

  void evaluate_choice(const Layout& l, const std::vector<const Instance*>& chosen,
                       std::vector<PartValues>& out) const {
    std::set<std::string> active;
    for (const auto* inst : chosen) active.insert(inst->name);
    std::vector<ExprPtr> clauses;
    for (const auto& clause : l.clauses) {
      std::vector<const Expr*> paths;
      collect_paths(clause, paths);
      bool keep = true;
      for (const auto* p : paths)
        if (!l.port(p->path.front()) && !active.count(p->path.front())) keep = false;
      if (keep) clauses.push_back(clause);
    }
    const auto generators = plan(l, clauses);

    std::vector<std::vector<std::vector<Value>>> sub_configs;
    std::vector<const Layout*> sub_layouts;
    for (const auto* inst : chosen) {
      const auto& sub = layouts.at(inst->component);
      sub_layouts.push_back(&sub);
      std::vector<std::vector<Value>> rows;
      for (const auto& c : evaluate(inst->component)) rows.push_back(sub.split(c));
      sub_configs.push_back(std::move(rows));
    }

    std::vector<const std::vector<Value>*> current(chosen.size(), nullptr);
    std::vector<std::optional<Value>> own(l.leaves);

    const Resolver resolve = [&](const Expr& p) -> Typed {
      if (const auto* port = l.port(p.path.front())) {
        std::vector<Value> leaves;
        for (std::size_t j = 0; j < port->count; ++j) {
          if (!own[port->offset + j])
            throw Error(ErrorKind::UnboundedDomain, at(file, p.loc) + dotted(p.path) + " is not pinned before use");
          leaves.push_back(*own[port->offset + j]);
        }
        auto sel = select(port->shape, std::move(leaves), p.path, 1);
        return {pack(sel.leaves), packed_order(*sel.shape)};
      }
      for (std::size_t k = 0; k < chosen.size(); ++k)
        if (chosen[k]->name == p.path.front()) {
          const auto* port = sub_layouts[k]->port(p.path[1]);
          const auto& row = *current[k];
          std::vector<Value> leaves(row.begin() + static_cast<std::ptrdiff_t>(port->offset),
                                    row.begin() + static_cast<std::ptrdiff_t>(port->offset + port->count));
          auto sel = select(port->shape, std::move(leaves), p.path, 2);
          return {pack(sel.leaves), packed_order(*sel.shape)};
        }
      throw Error(ErrorKind::InvalidArgument, at(file, p.loc) + "unknown name " + dotted(p.path));
    };
    const Evaluator eval(resolve);

    std::function<void(std::size_t)> assign = [&](std::size_t g) {
      if (g == generators.size()) {
        for (const auto& clause : clauses)
          if (!eval.truth(*clause)) return;
        std::vector<Value> leaves;
        for (const auto& v : own) leaves.push_back(*v);
        out.push_back(l.join(leaves));
        return;
      }
      const auto& gen = generators[g];
      const auto saved = own;
      for (const auto& e : gen.values) {
        std::vector<Value> leaves;
        try {
          leaves = to_leaves(*gen.shape, eval.value(*e).value);
        } catch (const Error& err) {
          throw Error(err.kind(), at(file, e->loc) + err.what());
        }
        bool clash = false;
        for (std::size_t j = 0; j < gen.count && !clash; ++j) {
          auto& slot = own[gen.offset + j];
          if (slot && *slot != leaves[j]) clash = true;
          slot = leaves[j];
        }
        if (!clash) assign(g + 1);
        own = saved;
      }
    };

    std::function<void(std::size_t)> product = [&](std::size_t k) {
      if (k == chosen.size()) {
        assign(0);
        return;
      }
      for (const auto& row : sub_configs[k]) {
        current[k] = &row;
        product(k + 1);
      }
    };
    product(0);
  }

  // Orders the pinning clauses so that each one only reads leaves pinned
  // before it; throws UnboundedDomain for a port left unpinned.
  std::vector<Generator> plan(const Layout& l, const std::vector<ExprPtr>& clauses) const {
    std::vector<Generator> candidates;
    auto target_of = [&](const ExprPtr& e) -> std::optional<Generator> {
      if (e->kind != Expr::Kind::Path) return std::nullopt;
      const auto* port = l.port(e->path.front());
      if (!port) return std::nullopt;
      const auto r = static_range(port->shape, e->path, 1);
      if (!r.exact) return std::nullopt;
      auto sel_shape = port->shape;
      for (std::size_t k = 1; k < e->path.size(); ++k)
        sel_shape = sel_shape->fields[*sel_shape->field_index(e->path[k])].second;
      return Generator{e.get(), port->offset + r.offset, r.count, sel_shape, {}};
    };
    for (const auto& c : clauses) {
      if (c->kind == Expr::Kind::Binary && c->op == "=") {
        if (auto g = target_of(c->lhs)) {
          g->values = {c->rhs};
          candidates.push_back(std::move(*g));
        } else if (auto g2 = target_of(c->rhs)) {
          g2->values = {c->lhs};
          candidates.push_back(std::move(*g2));
        }
      } else if (c->kind == Expr::Kind::In) {
        if (auto g = target_of(c->lhs)) {
          g->values = c->items;
          candidates.push_back(std::move(*g));
        }
      }
    }

    auto reads = [&](const Generator& g) {
      std::vector<std::size_t> out;
      for (const auto& v : g.values) {
        std::vector<const Expr*> paths;
        collect_paths(v, paths);
        for (const auto* p : paths)
          if (const auto* port = l.port(p->path.front())) {
            const auto r = static_range(port->shape, p->path, 1);
            for (std::size_t j = 0; j < r.count; ++j) out.push_back(port->offset + r.offset + j);
          }
      }
      return out;
    };

    std::vector<bool> pinned(l.leaves, false);
    std::vector<bool> used(candidates.size(), false);
    std::vector<Generator> order;
    for (bool progress = true; progress;) {
      progress = false;
      for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (used[i]) continue;
        const auto& g = candidates[i];
        bool adds = false;
        for (std::size_t j = 0; j < g.count; ++j) adds = adds || !pinned[g.offset + j];
        bool ready = true;
        for (auto j : reads(g)) ready = ready && pinned[j];
        if (!adds || !ready) continue;
        for (std::size_t j = 0; j < g.count; ++j) pinned[g.offset + j] = true;
        used[i] = true;
        order.push_back(g);
        progress = true;
      }
    }
    for (const auto& port : l.ports)
      for (std::size_t j = 0; j < port.count; ++j)
        if (!pinned[port.offset + j])
          throw Error(ErrorKind::UnboundedDomain, at(file, port.decl->loc) + "port " + port.decl->name + " of " +
                                                      l.def->name + " is not pinned to finitely many values");
    return order;
  }
};

Model::Model(Ast ast, std::string filename) : impl_(std::make_shared<Impl>()) {
  impl_->ast = std::move(ast);
  impl_->file = std::move(filename);
  impl_->build();
}

Model Model::from_source(std::string_view text, std::string filename) {
  auto ast = parse(text, filename);
  return Model(std::move(ast), std::move(filename));
}

const Ast& Model::ast() const { return impl_->ast; }

bool Model::has_component(const std::string& name) const { return impl_->layouts.count(name) != 0; }

std::vector<std::string> Model::component_names() const {
  std::vector<std::string> out;
  for (const auto& c : impl_->ast.components) out.push_back(c.name);
  return out;
}

PosetDescriptor Model::type(const std::string& name) const {
  return {name, packed_order(*impl_->types->find(name))};
}

QRMInterface Model::evaluate(const std::string& component) const { return impl_->evaluate(component); }

Predicate compile_predicate(const ExprPtr& e, const ConfigurationSpace& space) {
  std::vector<const Expr*> paths;
  collect_paths(e, paths);
  for (const auto* p : paths)
    if (!space.has(dotted(p->path)))
      throw Error(ErrorKind::InvalidArgument, "no dimension named " + dotted(p->path) + " in " + space.to_string());
  return [e, space](const Configuration& c) {
    const Resolver resolve = [&](const Expr& p) -> Typed {
      const auto i = space.index_of(dotted(p.path));
      return {c[i], space.order(i)};
    };
    return Evaluator(resolve).truth(*e);
  };
}

}  // namespace qrm::qrml
