#include <doctest.h>

#include "qrm/error.hpp"
#include "qrm/pareto_core.hpp"
#include "support/oracles.hpp"

using namespace qrm;
using qrm::testing::config;

namespace {

ConfigurationSet nat(std::vector<std::vector<std::int64_t>> rows, std::size_t dims = 1) {
  std::vector<PosetDescriptor> d;
  for (std::size_t i = 0; i < dims; ++i) d.push_back({"n" + std::to_string(i), OrderKind::le()});
  ConfigurationSet s{ConfigurationSpace(d)};
  for (const auto& r : rows) s.insert(config(r));
  return s;
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

const ConfigurationSet& scalers() {
  static const auto s = qrm::testing::scaler_example_set();
  return s;
}
const Configuration& s(std::size_t i) { return scalers().configs().at(i - 1); }

}  // namespace

TEST_CASE("spaces reject empty and duplicate dimension lists") {
  CHECK(kind_of([] { ConfigurationSpace(std::vector<PosetDescriptor>{}); }) == ErrorKind::ShapeMismatch);
  CHECK(kind_of([] { ConfigurationSpace({{"a", OrderKind::le()}, {"a", OrderKind::ge()}}); }) ==
        ErrorKind::DuplicateName);
}

TEST_CASE("sets deduplicate and validate members") {
  auto set = nat({{1}, {1}, {2}});
  CHECK(set.size() == 2);
  CHECK_FALSE(set.insert(config({2})));
  CHECK(kind_of([&] { set.insert(config({1, 2})); }) == ErrorKind::ShapeMismatch);
  CHECK(kind_of([&] { set.insert(Configuration{Value::symbol("x")}); }) == ErrorKind::DomainError);
}

TEST_CASE("a budget-hungrier working point is dominated") {
  const auto& space = scalers().space();
  CHECK(dominates(space, s(4), s(1)));
  CHECK(dominates(space, s(5), s(2)));
  CHECK_FALSE(dominates(space, s(1), s(4)));
  CHECK(dominates(space, s(1), s(1)));
  CHECK_FALSE(dominates(space, s(1), s(3)));
  CHECK_FALSE(dominates(space, s(3), s(1)));
}

TEST_CASE("minimize keeps the three undominated scaler points") {
  const auto m = minimize(scalers());
  CHECK(m == ConfigurationSet(scalers().space(), {s(1), s(2), s(3)}));
  CHECK(is_pareto_minimal(m));
  CHECK(equivalent(m, scalers()));
  CHECK_FALSE(is_pareto_minimal(scalers()));
}

TEST_CASE("minimize on trivial sets") {
  CHECK(minimize(nat({})).empty());
  CHECK(minimize(nat({{1}, {2}})) == nat({{2}}));
  CHECK(is_pareto_minimal(nat({})));
  CHECK_FALSE(is_pareto_minimal(nat({{1}, {2}})));
}

TEST_CASE("minimize is stable and idempotent") {
  const auto set = nat({{3, 1}, {1, 3}, {2, 2}, {1, 1}}, 2);
  const auto m = minimize(set);
  REQUIRE(m.size() == 3);
  CHECK(m.configs()[0] == config({3, 1}));
  CHECK(m.configs()[1] == config({1, 3}));
  CHECK(m.configs()[2] == config({2, 2}));
  CHECK(minimize(m) == m);
}

TEST_CASE("set dominance and equivalence") {
  const ConfigurationSet low(scalers().space(), {s(4), s(5)});
  const ConfigurationSet high(scalers().space(), {s(1), s(2)});
  CHECK(set_dominates(low, high));
  CHECK_FALSE(set_dominates(high, low));
  CHECK(set_dominates(low, low));
  CHECK_FALSE(set_dominates(nat({{1, 2}}, 2), nat({{2, 1}}, 2)));
  CHECK(equivalent(scalers(), minimize(scalers())));
  CHECK_FALSE(equivalent(nat({{1}}), nat({{2}})));
  CHECK(kind_of([&] { set_dominates(nat({{1}}), scalers()); }) == ErrorKind::SpaceMismatch);
}

TEST_CASE("free product concatenates spaces and pairs members") {
  const auto p = free_product(nat({{1}, {2}}), nat({{5}, {6}, {7}}));
  CHECK(p.size() == 6);
  CHECK(p.space().size() == 2);
  CHECK(p.contains(config({2, 7})));
  CHECK(free_product(nat({}), nat({{1}})).empty());

  const ConfigurationSet unit(ConfigurationSpace{{"v", void_order()}}, {Configuration{Value::void_value()}});
  const auto extended = free_product(nat({{1}, {2}}), unit);
  CHECK(extended.size() == 2);
  CHECK(extended.contains(Configuration{Value::integer(1), Value::void_value()}));
}

TEST_CASE("constraints filter members") {
  const auto set = nat({{1}, {2}, {3}});
  CHECK(apply_constraint(set, [](const Configuration&) { return true; }) == set);
  CHECK(apply_constraint(set, [](const Configuration&) { return false; }).empty());
  CHECK(apply_constraint(set, [](const Configuration& c) { return c[0].as_int() >= 2; }) == nat({{2}, {3}}));
}

TEST_CASE("constraint safety on samples") {
  const auto sample = nat({{1}, {2}, {3}, {4}});
  // upward closed
  CHECK(check_constraint_safety([](const Configuration& c) { return c[0].as_int() >= 2; }, sample));
  // strictly below a threshold: 1 is admitted, its dominator 3 is not
  const auto below = [](const Configuration& c) { return c[0].as_int() < 3; };
  CHECK_FALSE(check_constraint_safety(below, sample));
  const auto v = find_safety_violation(below, sample);
  REQUIRE(v);
  CHECK(below(v->first));
  CHECK_FALSE(below(v->second));
  CHECK(dominates(sample.space(), v->first, v->second));

  // membership in a set of values of an equality-ordered dimension
  ConfigurationSet eq{ConfigurationSpace{{"r", OrderKind::eq()}, {"q", OrderKind::le()}}};
  for (int r = 0; r < 3; ++r)
    for (int q = 0; q < 3; ++q) eq.insert(config({r, q}));
  CHECK(check_constraint_safety([](const Configuration& c) { return c[0].as_int() != 1; }, eq));
}

TEST_CASE("derive appends a dimension") {
  const auto set = nat({{1}, {2}});
  const auto d = derive(set, [](const Configuration&) { return Value::integer(2); }, {"two", OrderKind::le()});
  CHECK(d.space().size() == 2);
  CHECK(d.size() == 2);
  CHECK(d.contains(config({1, 2})));
  CHECK(d.contains(config({2, 2})));
  CHECK(set_dominates(derive(nat({{1}}), [](const Configuration&) { return Value::integer(2); },
                             {"two", OrderKind::le()}),
                      d));

  const auto voided = derive(set, [](const Configuration&) { return Value::void_value(); }, {"v", void_order()});
  CHECK(voided.contains(Configuration{Value::integer(1), Value::void_value()}));
  CHECK(kind_of([&] {
          derive(set, [](const Configuration&) { return Value::symbol("x"); }, {"x", OrderKind::le()});
        }) == ErrorKind::DomainError);
}

TEST_CASE("derivation checker finds non-monotone functions") {
  const auto set = nat({{1}, {2}, {3}});
  const DerivationFn neg = [](const Configuration& c) { return Value::integer(-c[0].as_int()); };
  CHECK(find_derivation_violation(set, neg, OrderKind::le()));
  CHECK_FALSE(find_derivation_violation(set, neg, OrderKind::le(), true));
  CHECK_FALSE(find_derivation_violation(set, neg, OrderKind::ge()));
}

TEST_CASE("abstraction drops a dimension") {
  const auto a = abstract(nat({{1, 2}, {2, 1}}, 2), std::size_t{0});
  CHECK(a.space()[0].name == "n1");
  CHECK(a.configs() == std::vector<Configuration>{config({2}), config({1})});
  CHECK(abstract(nat({{1, 5}, {1, 6}}, 2), std::size_t{1}).size() == 1);
  CHECK(abstract(nat({{1, 5}}, 2), std::string("n1")) == nat({{1}}));
  CHECK(abstract(nat({{1, 5}}, 2), std::string("n0")).configs() == std::vector<Configuration>{config({5})});
  CHECK(kind_of([] { abstract(nat({{1}}), std::size_t{0}); }) == ErrorKind::IndexError);
  CHECK(kind_of([] { abstract(nat({{1, 2}}, 2), std::size_t{2}); }) == ErrorKind::IndexError);
}

TEST_CASE("permutation reorders dimensions") {
  const auto set = nat({{1, 2}}, 2);
  CHECK(permute(set, {0, 1}) == set);
  const auto swapped = permute(set, {1, 0});
  CHECK(swapped.contains(config({2, 1})));
  CHECK(swapped.space()[0].name == "n1");
  CHECK(kind_of([&] { permute(set, {0, 0}); }) == ErrorKind::NotABijection);
  CHECK(kind_of([&] { permute(set, {0}); }) == ErrorKind::NotABijection);
}

TEST_CASE("alternatives unite without minimizing") {
  CHECK(alternatives({nat({{1}}), nat({{2}})}) == nat({{1}, {2}}));
  CHECK(alternatives({nat({{1}}), nat({})}) == nat({{1}}));
  CHECK(kind_of([] { alternatives({nat({{1}}), nat({{1, 1}}, 2)}); }) == ErrorKind::SpaceMismatch);
}
