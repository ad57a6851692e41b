#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "qrm/json_io.hpp"
#include "support/oracles.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const fs::path& scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("qrm_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

Run run(const std::string& args, const std::string& env = "") {
  const auto out = scratch() / "stdout.txt";
  const auto err = scratch() / "stderr.txt";
  const std::string cmd =
      env + " \"" QRM_BINARY "\" " + args + " >\"" + out.string() + "\" 2>\"" + err.string() + "\"";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

std::string data(const std::string& name) { return "\"" QRM_DATA_DIR "/" + name + "\""; }
std::string model() { return "\"" QRM_MODELS_DIR "/video.qrml\""; }

}  // namespace

TEST_CASE("minimize writes the undominated configurations") {
  const auto r = run("minimize --in " + data("ex2_scaler.json"));
  REQUIRE(r.code == 0);
  const auto set = qrm::json::decode_set(r.out);
  CHECK(set == qrm::minimize(qrm::testing::scaler_example_set()));
  CHECK(set.size() == 3);

  const auto file = scratch() / "min.json";
  CHECK(run("minimize --in " + data("ex2_scaler.json") + " --out \"" + file.string() + "\"").code == 0);
  CHECK(slurp(file) == r.out);
}

TEST_CASE("minimize edge cases") {
  const auto empty = run("minimize --in " + data("empty_set.json"));
  CHECK(empty.code == 0);
  CHECK(qrm::json::decode_set(empty.out).empty());
  const auto bad = run("minimize --in " + data("malformed.json"));
  CHECK(bad.code == 2);
  CHECK_FALSE(bad.err.empty());
  CHECK(run("minimize --in /nonexistent/file.json").code == 2);
  CHECK(run("").code == 2);
  CHECK(run("minimize").code == 2);
}

TEST_CASE("evaluate components of the video model") {
  const auto ep = run("evaluate --model " + model() + " --component ExecutionPlatform");
  REQUIRE(ep.code == 0);
  CHECK(qrm::json::decode_set(ep.out).size() == 1);
  const auto hs = run("evaluate --model " + model() + " --component HWorSWscaler");
  REQUIRE(hs.code == 0);
  CHECK(qrm::json::decode_set(hs.out).size() == 2);
  CHECK(run("evaluate --model " + model() + " --component Nope").code == 2);
}

TEST_CASE("evaluate reports syntax errors with a location and unbounded ports") {
  const auto bad = scratch() / "bad.qrml";
  std::ofstream(bad) << "component A {\n  provides x :\n}\n";
  const auto r = run("evaluate --model \"" + bad.string() + "\" --component A");
  CHECK(r.code == 2);
  CHECK(r.err.find(":3:1") != std::string::npos);

  const auto loose = scratch() / "loose.qrml";
  std::ofstream(loose) << "budget Bw : int\ncomponent A { provides x : Bw }\n";
  CHECK(run("evaluate --model \"" + loose.string() + "\" --component A").code == 3);

  const auto none = scratch() / "none.qrml";
  std::ofstream(none) << "budget Bw : int\ncomponent A { provides x : Bw { x in {1, 2} } constraint x = 3 }\n";
  const auto empty = run("evaluate --model \"" + none.string() + "\" --component A");
  CHECK(empty.code == 0);
  CHECK(empty.err.find("no configurations") != std::string::npos);
}

TEST_CASE("solve-video") {
  const auto six = run("solve-video --scenario " + data("six_streams.json"));
  REQUIRE(six.code == 0);
  CHECK(six.out.find("\"stats\"") == std::string::npos);
  const auto seven = run("solve-video --scenario " + data("seven_streams.json") + " --stats");
  REQUIRE(seven.code == 0);
  CHECK(seven.out.find("\"mappings_after_symmetry\"") != std::string::npos);
  CHECK(run("solve-video --scenario " + data("zero_platforms.json")).code == 2);
  CHECK(run("solve-video --scenario " + data("infeasible.json")).code == 4);
  CHECK(run("solve-video --scenario " + data("six_streams.json") + " --jobs 0").code == 2);
}

TEST_CASE("solve-video output does not depend on jobs") {
  const auto one = run("solve-video --scenario " + data("seven_streams.json") + " --jobs 1");
  const auto many = run("solve-video --scenario " + data("seven_streams.json") + " --jobs 8");
  REQUIRE(one.code == 0);
  CHECK(one.out == many.out);
}

TEST_CASE("weighted scenarios log that stream symmetry is off") {
  const auto r = run("solve-video --scenario " + data("six_streams_weighted.json") + " --stats", "QRM_LOG=info");
  REQUIRE(r.code == 0);
  CHECK(r.err.find("stream symmetry disabled") != std::string::npos);
  CHECK(r.out.find("\"mappings_after_symmetry\": 115") != std::string::npos);
}

TEST_CASE("check-safety") {
  const auto pc = run("check-safety --in " + data("transport_scaler_product.json") +
                      " --constraint \"c1.output = c2.input\"");
  CHECK(pc.code == 0);
  const auto below = run("check-safety --in " + data("ex2_scaler.json") + " --constraint \"required <= (200, 20)\"");
  CHECK(below.code == 5);
  CHECK(below.out.find("admitted:") != std::string::npos);
  CHECK(below.out.find("rejected:") != std::string::npos);
  CHECK(run("check-safety --in " + data("ex2_scaler.json") + " --constraint \"1 = 1\"").code == 0);
  CHECK(run("check-safety --in " + data("ex2_scaler.json") + " --constraint \"1 = \"").code == 2);
}

TEST_CASE("diagnostics stay on stderr") {
  const auto r = run("minimize --in " + data("ex2_scaler.json"), "QRM_LOG=debug");
  REQUIRE(r.code == 0);
  CHECK(r.err.find("minimize:") != std::string::npos);
  CHECK(qrm::json::decode_set(r.out).size() == 3);
}
