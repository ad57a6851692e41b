#include <doctest.h>

#include "qrm/error.hpp"
#include "qrm/json_io.hpp"
#include "support/oracles.hpp"

using namespace qrm;

TEST_CASE("value encoding") {
  CHECK(json::encode(Value::integer(-3)) == "-3");
  CHECK(json::encode(Value::top()) == "\"top\"");
  CHECK(json::encode(Value::void_value()) == "null");
  CHECK(json::decode_value("[1, \"bot\", null, \"HD\"]") ==
        Value::tuple({Value::integer(1), Value::bot(), Value::void_value(), Value::symbol("HD")}));
  CHECK_THROWS_AS(json::decode_value("[]"), Error);
  CHECK_THROWS_AS(json::decode_value("1.5"), Error);
}

TEST_CASE("order encoding") {
  const auto o = OrderKind::elementwise({OrderKind::le("bw"), OrderKind::ge(), OrderKind::eq("video")});
  CHECK(json::decode_order(json::encode(o)) == o);
  CHECK(json::decode_order(R"({"kind":"ge"})") == OrderKind::ge());
  CHECK_THROWS_AS(json::decode_order(R"({"kind":"sideways"})"), Error);
}

TEST_CASE("set round trip is canonical") {
  const auto set = qrm::testing::scaler_example_set();
  const auto text = json::encode(set);
  const auto back = json::decode_set(text);
  CHECK(back == set);
  CHECK(json::encode(back) == text);

  ConfigurationSet reversed(set.space());
  for (auto it = set.configs().rbegin(); it != set.configs().rend(); ++it) reversed.insert(*it);
  CHECK(json::encode(reversed) == text);
}

TEST_CASE("malformed sets are rejected") {
  CHECK_THROWS_AS(json::decode_set("{"), Error);
  CHECK_THROWS_AS(json::decode_set(R"({"space":[],"configs":[]})"), Error);
  CHECK_THROWS_AS(json::decode_set(R"({"space":[{"name":"a","order":{"kind":"le"}}],"configs":[[1,2]]})"), Error);
  CHECK_THROWS_AS(json::decode_set(R"({"space":[{"name":"a","order":{"kind":"le"}}],"configs":[["x"]]})"), Error);
  try {
    json::decode_set("{");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidArgument);
  }
}
