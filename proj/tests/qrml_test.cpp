#include <doctest.h>

#include <fstream>
#include <sstream>

#include "qrm/error.hpp"
#include "qrm/qrml/model.hpp"
#include "qrm/qrml/parser.hpp"
#include "qrm/qrml/printer.hpp"
#include "qrm/video_domain.hpp"

using namespace qrm;
using namespace qrm::qrml;

namespace {

Value I(std::int64_t v) { return Value::integer(v); }
Value T(std::vector<Value> xs) { return Value::tuple(std::move(xs)); }
const Value V = Value::void_value();

std::string video_model_text() {
  std::ifstream in(QRM_MODELS_DIR "/video.qrml");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const Model& video_model() {
  static const Model m = Model::from_source(video_model_text(), "video.qrml");
  return m;
}

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected qrm::Error");
  return ErrorKind::InvalidArgument;
}

// Leaves of a value, with tuples flattened.
void flatten(const Value& v, std::vector<Value>& out) {
  if (v.is_tuple())
    for (const auto& x : v.items()) flatten(x, out);
  else
    out.push_back(v);
}

}  // namespace

TEST_CASE("type definitions parse") {
  const auto ast = parse(video_model_text(), "video.qrml");
  REQUIRE(ast.types.size() == 6);
  CHECK(ast.types[0].keyword == "budget");
  CHECK(ast.types[0].name == "Bw");
  CHECK(ast.types[3].keyword == "channel");
  CHECK(ast.types[3].order.kind == OrderClause::Kind::OrderedBy);
  CHECK(ast.types[5].order.kind == OrderClause::Kind::Default);
  CHECK(ast.components.size() == 5);
}

TEST_CASE("empty source parses to an empty model") {
  const auto ast = parse("", "empty");
  CHECK(ast.types.empty());
  CHECK(ast.components.empty());
  CHECK(parse("// only a comment\n", "c").components.empty());
}

TEST_CASE("contains with alternatives") {
  const auto ast = parse("component A { contains HWscaler or SWscaler }", "a");
  REQUIRE(ast.components.size() == 1);
  REQUIRE(ast.components[0].contains.size() == 1);
  CHECK(ast.components[0].contains[0].alternatives.size() == 2);
  CHECK(ast.components[0].contains[0].alternatives[1].component == "SWscaler");
}

TEST_CASE("syntax errors carry location and expectation") {
  try {
    parse("component A {\n  provides x : \n}", "bad.qrml");
    FAIL("expected a syntax error");
  } catch (const SyntaxError& e) {
    CHECK(e.filename() == "bad.qrml");
    CHECK(e.location().line == 3);
    CHECK(e.location().column == 1);
    CHECK_FALSE(e.expected().empty());
    CHECK(std::string(e.what()).find("bad.qrml:3:1") != std::string::npos);
  }
  CHECK_THROWS_AS(parse("typedef X : int ordered", "t"), SyntaxError);
  CHECK_THROWS_AS(parse("component A { constraint 1 = }", "t"), SyntaxError);
  CHECK_THROWS_AS(parse("component A # {}", "t"), SyntaxError);
}

TEST_CASE("declared orders elaborate") {
  const auto& m = video_model();
  const auto eq = OrderKind::eq("FrameRate");
  CHECK(m.type("Video").order == OrderKind::elementwise({OrderKind::eq(""), OrderKind::eq(""), eq}));
  CHECK(m.type("Bw").order == OrderKind::le("Bw"));
  CHECK(m.type("Scaling").order.kind() == OrderKind::Kind::ElementWise);
  CHECK(m.type("Scalers").order.kind() == OrderKind::Kind::ElementWise);
  CHECK_THROWS_AS(m.type("Nope"), Error);
}

TEST_CASE("non-separable orders become custom predicates") {
  const auto m = Model::from_source(
      "typedef P : (a : int, b : int) ordered by (a1, b1), (a2, b2) => a1 + b1 <= a2 + b2 and a1 <= a2\n", "p");
  const auto o = m.type("P").order;
  CHECK(o.kind() == OrderKind::Kind::Custom);
  CHECK(leq(o, T({I(1), I(1)}), T({I(2), I(3)})));
  CHECK_FALSE(leq(o, T({I(3), I(1)}), T({I(2), I(3)})));
}

TEST_CASE("elaboration errors") {
  CHECK(kind_of([] { Model::from_source("component A { provides x : Missing { x = 1 } }", "e"); }) ==
        ErrorKind::UnresolvedType);
  CHECK(kind_of([] { Model::from_source("budget A : int\nbudget A : int\n", "e"); }) == ErrorKind::DuplicateName);
  CHECK(kind_of([] {
          Model::from_source("typedef P : (a : int, b : int) ordered by (a1, b1), (a2, b2) => a1 <= b1", "e");
        }) == ErrorKind::IllFormedOrder);
  CHECK(kind_of([] { Model::from_source("component A { contains b : B }", "e"); }) == ErrorKind::UnknownComponent);
  CHECK(kind_of([] {
          Model::from_source("component A { contains b : B }\ncomponent B { contains a : A }", "e");
        }) == ErrorKind::CyclicContainment);
  CHECK_THROWS_AS(Model::from_source("budget Bw : int\ncomponent A { provides x : Bw { y = 1 } }", "e"), Error);
}

TEST_CASE("atomic components") {
  const auto& m = video_model();
  const auto f = m.evaluate("Fiber");
  REQUIRE(f.size() == 1);
  CHECK(*f.begin() == Configuration{V, V, V, I(10000), V, V});

  const auto h = m.evaluate("HWscaler");
  REQUIRE(h.size() == 1);
  CHECK(*h.begin() == Configuration{V, V, V, T({I(4), I(300), I(32)}), V, V});
}

TEST_CASE("aggregated execution platform") {
  const auto e = video_model().evaluate("ExecutionPlatform");
  REQUIRE(e.size() == 1);
  CHECK(*e.begin() == Configuration{V, V, V, T({I(10000), I(4), I(300), I(32)}), V, V});

  // same leaves as the programmatic aggregation at the same bandwidth
  const auto direct = video::execution_platform(video::CompUnit::Megapixels, 10000);
  std::vector<Value> a, b;
  flatten((*e.begin())[3], a);
  flatten((*direct.begin())[3], b);
  CHECK(a == b);
}

TEST_CASE("choice between scalers") {
  const auto s = video_model().evaluate("HWorSWscaler");
  CHECK(s.size() == 2);
  CHECK(s.set().contains(Configuration{V, V, V, T({Value::top(), I(100), Value::top()}), V, V}));
  CHECK(s.set().contains(Configuration{V, V, V, T({I(4), I(300), I(32)}), V, V}));
}

TEST_CASE("evaluation is memoized, deterministic and minimal") {
  const auto& m = video_model();
  for (const auto& name : m.component_names()) {
    const auto a = m.evaluate(name);
    const auto b = m.evaluate(name);
    CHECK(a == b);
    CHECK(is_pareto_minimal(a.set()));
  }
  CHECK(Model::from_source(video_model_text()).evaluate("HWorSWscaler") == m.evaluate("HWorSWscaler"));
}

TEST_CASE("finite port sets and unbounded ports") {
  const auto m = Model::from_source(
      "budget Bw : int\n"
      "component Choice { provides bw : Bw { bw in {3, 5, 7} } }\n"
      "component Loose { provides bw : Bw }\n"
      "component Req { requires bw : Bw { bw in {3, 5} } }\n",
      "m");
  const auto choice = m.evaluate("Choice");
  CHECK(choice.size() == 1);  // minimized: 7 dominates under <=
  CHECK(*choice.begin() == Configuration{V, V, V, I(7), V, V});
  const auto req = m.evaluate("Req");
  REQUIRE(req.size() == 1);
  CHECK(*req.begin() == Configuration{V, V, I(3), V, V, V});
  CHECK(kind_of([&] { m.evaluate("Loose"); }) == ErrorKind::UnboundedDomain);
  CHECK(kind_of([&] { m.evaluate("Missing"); }) == ErrorKind::UnknownComponent);
}

TEST_CASE("printing round-trips") {
  const auto ast = parse(video_model_text(), "video.qrml");
  const auto printed = print(ast);
  CHECK(parse(printed, "printed") == ast);
  CHECK(print(parse(printed, "printed")) == printed);

  const auto e = parse_expression("not (a.b <= (1, -2) + top) or c in {bot, 3}", "e");
  CHECK(same_expr(parse_expression(print(*e), "p"), e));
}

TEST_CASE("predicates over dimension names") {
  const ConfigurationSpace space{{"bw", OrderKind::le()}, {"req", OrderKind::ge()}};
  const auto p = compile_predicate(parse_expression("bw >= 5 and req <= 3", "p"), space);
  CHECK(p(Configuration{I(6), I(4)}));
  CHECK_FALSE(p(Configuration{I(6), I(2)}));
  CHECK_FALSE(p(Configuration{I(4), I(4)}));
  CHECK_THROWS_AS(compile_predicate(parse_expression("nope = 1", "p"), space), Error);
}
