#include "qrm/qrml/printer.hpp"

namespace qrm::qrml {

namespace {

std::string operand(const ExprPtr& e) {
  const bool compound = e->kind == Expr::Kind::Binary || e->kind == Expr::Kind::Unary || e->kind == Expr::Kind::In;
  return compound ? "(" + print(*e) + ")" : print(*e);
}

std::string join(const std::vector<ExprPtr>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ", " : "") + print(*items[i]);
  return out;
}

std::string pattern(const Pattern& p) {
  if (p.names.size() == 1) return p.names.front();
  std::string out = "(";
  for (std::size_t i = 0; i < p.names.size(); ++i) out += (i ? ", " : "") + p.names[i];
  return out + ")";
}

}  // namespace

std::string print(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Int: return std::to_string(e.number);
    case Expr::Kind::Bot: return "bot";
    case Expr::Kind::Top: return "top";
    case Expr::Kind::Path: {
      std::string out;
      for (std::size_t i = 0; i < e.path.size(); ++i) out += (i ? "." : "") + e.path[i];
      return out;
    }
    case Expr::Kind::Tuple: return "(" + join(e.items) + ")";
    case Expr::Kind::Unary: return e.op == "not" ? "not " + operand(e.lhs) : "-" + operand(e.lhs);
    case Expr::Kind::Binary: return operand(e.lhs) + " " + e.op + " " + operand(e.rhs);
    case Expr::Kind::In: return operand(e.lhs) + " in {" + join(e.items) + "}";
  }
  return {};
}

std::string print(const TypeDef& t) {
  std::string out = t.keyword + " " + t.name + " : ";
  if (t.alias) {
    out += t.alias->name;
  } else {
    out += "(";
    for (std::size_t i = 0; i < t.fields.size(); ++i)
      out += (i ? ", " : "") + t.fields[i].name + " : " + t.fields[i].type.name;
    out += ")";
  }
  switch (t.order.kind) {
    case OrderClause::Kind::Default: break;
    case OrderClause::Kind::ElementWise: out += " element-wise"; break;
    case OrderClause::Kind::OrderedBy:
      out += "\n  ordered by " + pattern(t.order.left) + ", " + pattern(t.order.right) + " => " +
             print(*t.order.predicate);
      break;
  }
  return out + "\n";
}

std::string print(const ComponentDef& c) {
  std::string out = "component " + c.name + " {\n";
  for (const auto& p : c.ports) {
    out += "  " + std::string(keyword(p.direction)) + " " + p.name + " : " + p.type.name;
    if (!p.constraints.empty()) out += " { " + join(p.constraints) + " }";
    if (p.from) out += " from " + print(*p.from);
    out += "\n";
  }
  for (const auto& decl : c.contains) {
    out += "  contains ";
    for (std::size_t i = 0; i < decl.alternatives.size(); ++i) {
      const auto& inst = decl.alternatives[i];
      out += (i ? " or " : "") + inst.name + " : " + inst.component;
    }
    out += "\n";
  }
  for (const auto& e : c.constraints) out += "  constraint " + print(*e) + "\n";
  return out + "}\n";
}

std::string print(const Ast& ast) {
  std::string out;
  for (const auto& t : ast.types) out += print(t);
  for (const auto& c : ast.components) out += (out.empty() ? "" : "\n") + print(c);
  return out;
}

}  // namespace qrm::qrml
