#include <charconv>
#include <array>

#include "qrm/qrml/parser.hpp"

namespace qrm::qrml {

// ---------------------------------------------------------------------------
// AST helpers

namespace {

ExprPtr make(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

}  // namespace

ExprPtr Expr::integer(std::int64_t v, SourceLocation at) {
  Expr e;
  e.kind = Kind::Int;
  e.number = v;
  e.loc = at;
  return make(std::move(e));
}

ExprPtr Expr::bot(SourceLocation at) {
  Expr e;
  e.kind = Kind::Bot;
  e.loc = at;
  return make(std::move(e));
}

ExprPtr Expr::top(SourceLocation at) {
  Expr e;
  e.kind = Kind::Top;
  e.loc = at;
  return make(std::move(e));
}

ExprPtr Expr::make_path(std::vector<std::string> segments, SourceLocation at) {
  Expr e;
  e.kind = Kind::Path;
  e.path = std::move(segments);
  e.loc = at;
  return make(std::move(e));
}

ExprPtr Expr::tuple(std::vector<ExprPtr> items, SourceLocation at) {
  Expr e;
  e.kind = Kind::Tuple;
  e.items = std::move(items);
  e.loc = at;
  return make(std::move(e));
}

ExprPtr Expr::unary(std::string op, ExprPtr operand, SourceLocation at) {
  Expr e;
  e.kind = Kind::Unary;
  e.op = std::move(op);
  e.lhs = std::move(operand);
  e.loc = at;
  return make(std::move(e));
}

ExprPtr Expr::binary(std::string op, ExprPtr lhs, ExprPtr rhs, SourceLocation at) {
  Expr e;
  e.kind = Kind::Binary;
  e.op = std::move(op);
  e.lhs = std::move(lhs);
  e.rhs = std::move(rhs);
  e.loc = at;
  return make(std::move(e));
}

ExprPtr Expr::in(ExprPtr lhs, std::vector<ExprPtr> set, SourceLocation at) {
  Expr e;
  e.kind = Kind::In;
  e.lhs = std::move(lhs);
  e.items = std::move(set);
  e.loc = at;
  return make(std::move(e));
}

bool same_expr(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  return *a == *b;
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.number != b.number || a.path != b.path || a.op != b.op) return false;
  if (a.items.size() != b.items.size()) return false;
  for (std::size_t i = 0; i < a.items.size(); ++i)
    if (!same_expr(a.items[i], b.items[i])) return false;
  return same_expr(a.lhs, b.lhs) && same_expr(a.rhs, b.rhs);
}

namespace {

bool same_list(const std::vector<ExprPtr>& a, const std::vector<ExprPtr>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!same_expr(a[i], b[i])) return false;
  return true;
}

}  // namespace

bool operator==(const PortDecl& a, const PortDecl& b) {
  return a.direction == b.direction && a.name == b.name && a.type == b.type && same_list(a.constraints, b.constraints) &&
         same_expr(a.from, b.from);
}

bool operator==(const ComponentDef& a, const ComponentDef& b) {
  return a.name == b.name && a.ports == b.ports && a.contains == b.contains && same_list(a.constraints, b.constraints);
}

std::string_view keyword(Direction d) {
  switch (d) {
    case Direction::Provides: return "provides";
    case Direction::Requires: return "requires";
    case Direction::Input: return "input";
    case Direction::Output: return "output";
    case Direction::Quality: return "quality";
    case Direction::Parameter: return "parameter";
  }
  return "";
}

// ---------------------------------------------------------------------------
// Parser

namespace {

bool is_operator_word(std::string_view w) { return w == "and" || w == "or" || w == "not" || w == "in"; }

class Parser {
 public:
  Parser(std::string_view text, std::string_view filename)
      : filename_(filename), tokens_(tokenize(text, filename)) {}

  Ast model() {
    Ast ast;
    while (!at_end()) {
      if (peek_word("typedef") || peek_word("channel") || peek_word("budget")) {
        ast.types.push_back(type_def());
      } else if (peek_word("component")) {
        ast.components.push_back(component());
      } else {
        fail({"typedef", "channel", "budget", "component"});
      }
    }
    return ast;
  }

  ExprPtr single_expression() {
    auto e = expr();
    if (!at_end()) fail({"end of expression"});
    return e;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const { return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)]; }
  bool at_end() const { return peek().kind == Token::Kind::End; }
  bool peek_word(std::string_view w, std::size_t ahead = 0) const {
    return peek(ahead).kind == Token::Kind::Identifier && peek(ahead).text == w;
  }
  bool peek_symbol(std::string_view s, std::size_t ahead = 0) const {
    return peek(ahead).kind == Token::Kind::Symbol && peek(ahead).text == s;
  }
  const Token& next() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    const auto& t = peek();
    const std::string found = t.kind == Token::Kind::End ? "end of input" : "'" + t.text + "'";
    throw SyntaxError(filename_, t.loc, std::move(expected), found);
  }

  bool accept_symbol(std::string_view s) {
    if (!peek_symbol(s)) return false;
    next();
    return true;
  }
  bool accept_word(std::string_view w) {
    if (!peek_word(w)) return false;
    next();
    return true;
  }
  void expect_symbol(std::string_view s) {
    if (!accept_symbol(s)) fail({"'" + std::string(s) + "'"});
  }
  void expect_word(std::string_view w) {
    if (!accept_word(w)) fail({"'" + std::string(w) + "'"});
  }

  std::string name() {
    if (peek().kind != Token::Kind::Identifier || is_reserved(peek().text)) fail({"name"});
    return next().text;
  }

  TypeRef type_ref() {
    const auto loc = peek().loc;
    if (accept_word("int")) return {"int", loc};
    return {name(), loc};
  }

  Pattern pattern() {
    Pattern p;
    if (accept_symbol("(")) {
      do p.names.push_back(name());
      while (accept_symbol(","));
      expect_symbol(")");
    } else {
      p.names.push_back(name());
    }
    return p;
  }

  TypeDef type_def() {
    TypeDef t;
    t.loc = peek().loc;
    t.keyword = next().text;
    t.name = name();
    expect_symbol(":");
    if (accept_symbol("(")) {
      do {
        Field f;
        f.name = name();
        expect_symbol(":");
        f.type = type_ref();
        t.fields.push_back(std::move(f));
      } while (accept_symbol(","));
      expect_symbol(")");
    } else {
      t.alias = type_ref();
    }
    if (accept_word("element-wise")) {
      t.order.kind = OrderClause::Kind::ElementWise;
    } else if (accept_word("ordered")) {
      expect_word("by");
      t.order.kind = OrderClause::Kind::OrderedBy;
      t.order.left = pattern();
      expect_symbol(",");
      t.order.right = pattern();
      expect_symbol("=>");
      t.order.predicate = expr();
    }
    return t;
  }

  std::optional<Direction> direction() const {
    static constexpr std::array<Direction, 6> all = {Direction::Provides, Direction::Requires, Direction::Input,
                                                     Direction::Output,   Direction::Quality,  Direction::Parameter};
    for (auto d : all)
      if (peek_word(keyword(d))) return d;
    return std::nullopt;
  }

  Instance instance() {
    Instance inst;
    inst.loc = peek().loc;
    auto first = name();
    if (accept_symbol(":")) {
      inst.name = std::move(first);
      inst.component = name();
    } else {
      inst.name = first;
      inst.component = std::move(first);
    }
    return inst;
  }

  ComponentDef component() {
    ComponentDef c;
    c.loc = peek().loc;
    expect_word("component");
    c.name = name();
    expect_symbol("{");
    while (!accept_symbol("}")) {
      if (auto d = direction()) {
        PortDecl p;
        p.loc = peek().loc;
        next();
        p.direction = *d;
        p.name = name();
        expect_symbol(":");
        p.type = type_ref();
        if (accept_symbol("{")) {
          if (!peek_symbol("}")) {
            do p.constraints.push_back(expr());
            while (accept_symbol(","));
          }
          expect_symbol("}");
        }
        if (accept_word("from")) p.from = expr();
        c.ports.push_back(std::move(p));
      } else if (accept_word("contains")) {
        ContainsDecl decl;
        do decl.alternatives.push_back(instance());
        while (accept_word("or"));
        c.contains.push_back(std::move(decl));
      } else if (accept_word("constraint")) {
        c.constraints.push_back(expr());
      } else {
        fail({"provides", "requires", "input", "output", "quality", "parameter", "contains", "constraint", "'}'"});
      }
    }
    return c;
  }

  // Expressions, loosest binding first.

  ExprPtr expr() { return disjunction(); }

  ExprPtr disjunction() {
    auto lhs = conjunction();
    while (peek_word("or")) {
      const auto loc = next().loc;
      lhs = Expr::binary("or", lhs, conjunction(), loc);
    }
    return lhs;
  }

  ExprPtr conjunction() {
    auto lhs = negation();
    while (peek_word("and")) {
      const auto loc = next().loc;
      lhs = Expr::binary("and", lhs, negation(), loc);
    }
    return lhs;
  }

  ExprPtr negation() {
    if (peek_word("not")) {
      const auto loc = next().loc;
      return Expr::unary("not", negation(), loc);
    }
    return comparison();
  }

  ExprPtr comparison() {
    auto lhs = additive();
    for (const char* op : {"=", "!=", "<=", ">=", "<", ">"})
      if (peek_symbol(op)) {
        const auto loc = next().loc;
        return Expr::binary(op, lhs, additive(), loc);
      }
    if (peek_word("in")) {
      const auto loc = next().loc;
      expect_symbol("{");
      std::vector<ExprPtr> set;
      do set.push_back(additive());
      while (accept_symbol(","));
      expect_symbol("}");
      return Expr::in(lhs, std::move(set), loc);
    }
    return lhs;
  }

  ExprPtr additive() {
    auto lhs = unary();
    while (peek_symbol("+") || peek_symbol("-")) {
      const auto& t = next();
      lhs = Expr::binary(t.text, lhs, unary(), t.loc);
    }
    return lhs;
  }

  ExprPtr unary() {
    if (peek_symbol("-")) {
      const auto loc = next().loc;
      return Expr::unary("-", unary(), loc);
    }
    return primary();
  }

  ExprPtr primary() {
    const auto& t = peek();
    const auto loc = t.loc;
    if (t.kind == Token::Kind::Number) {
      std::int64_t v = 0;
      std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
      next();
      return Expr::integer(v, loc);
    }
    if (accept_word("bot")) return Expr::bot(loc);
    if (accept_word("top")) return Expr::top(loc);
    if (accept_symbol("(")) {
      std::vector<ExprPtr> items{expr()};
      while (accept_symbol(",")) items.push_back(expr());
      expect_symbol(")");
      return items.size() == 1 ? items.front() : Expr::tuple(std::move(items), loc);
    }
    // Part keywords (input, quality, ...) can start a path here: nothing else
    // is expected in operand position.
    if (t.kind == Token::Kind::Identifier && !is_operator_word(t.text)) {
      std::vector<std::string> segments{next().text};
      while (accept_symbol(".")) {
        // Any word may follow a dot, so part names such as "quality" work.
        if (peek().kind != Token::Kind::Identifier) fail({"name"});
        segments.push_back(next().text);
      }
      return Expr::make_path(std::move(segments), loc);
    }
    fail({"integer", "bot", "top", "name", "'('"});
  }

  std::string filename_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

Ast parse(std::string_view text, std::string_view filename) { return Parser(text, filename).model(); }

ExprPtr parse_expression(std::string_view text, std::string_view filename) {
  return Parser(text, filename).single_expression();
}

}  // namespace qrm::qrml
