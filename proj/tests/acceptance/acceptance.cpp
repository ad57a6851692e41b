// Prints one PASS/FAIL line per acceptance criterion and exits non-zero if
// any criterion fails.

#include <chrono>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "qrm/qrm_solver.hpp"
#include "qrm/qrml/model.hpp"
#include "support/oracles.hpp"
#include "support/properties.hpp"

using namespace qrm;
using qrm::testing::rate_rows;

namespace {

using Rows = std::vector<std::vector<std::int64_t>>;

Value I(std::int64_t v) { return Value::integer(v); }
Value T(std::vector<Value> xs) { return Value::tuple(std::move(xs)); }
const Value V = Value::void_value();

// Collects failed sub-checks of one criterion.
struct Checks {
  std::vector<std::string> failed;
  void expect(bool ok, std::string what) {
    if (!ok) failed.push_back(std::move(what));
  }
};

bool single(const QRMInterface& q, const Configuration& c) { return q.size() == 1 && *q.begin() == c; }

void c1(Checks& c) {
  const auto s = qrm::testing::scaler_example_set();
  const ConfigurationSet expected(s.space(), {s.configs()[0], s.configs()[1], s.configs()[2]});
  c.expect(minimize(s) == expected, "minimize({s1..s5}) != {s1,s2,s3}");
}

void c2(Checks& c) {
  const auto e = free_aggregate(video::fiber(), video::hw_scaler());
  c.expect(single(e, {V, V, V, T({I(10), T({I(4), I(300), I(32)})}), V, V}), "fiber || hw scaler");
}

void c3(Checks& c) {
  using video::format;
  const auto t = video::transport_interface({format("HD", 60), format("FHD", 60)});
  const auto s = video::scaler_interface({{format("FHD", 60), format("HD+", 60)},
                                          {format("FHD", 60), format("HD", 30)},
                                          {format("HD+", 60), format("HD", 60)}});
  TemplateOptions opts;
  opts.parameters = ParameterMode::Void;
  opts.pre = {ConstraintSpec::subset(part_ref(1, Part::Parameters), {video::to_value(format("FHD", 60))}),
              ConstraintSpec::subset(part_ref(2, Part::Parameters), {video::to_value(video::resolution("HD"))})};
  const auto a = horizontal_aggregate(t, s, opts);
  c.expect(single(a, {video::to_value(format("FHD", 60)), video::to_value(format("HD", 30)),
                      T({I(4), T({I(145), I(15)})}), V, I(30), V}),
           "transport => scaler");
}

void c4(Checks& c) {
  c.expect(single(vertical_aggregate(video::fiber(), video::connection(4)), {V, V, V, T({I(4), I(6)}), V, V}),
           "fiber ^ connection");
}

void c5(Checks& c) {
  const auto hs = video::hw_or_sw_scaler();
  const ConfigurationSet expected(hs.space(), {{V, V, V, T({Value::top(), I(100), Value::top()}), V, V},
                                               {V, V, V, T({I(4), I(300), I(32)}), V, V}});
  c.expect(hs.set() == expected, "hw or sw scaler");
}

void c6(Checks& c) {
  using video::format;
  const auto s = video::scaler_interface();
  c.expect(s.size() == 270, "scaler count " + std::to_string(s.size()));
  const std::vector<std::tuple<const char*, int, const char*, int, int, int>> published = {
      {"FHD", 60, "HD", 60, 171, 15},  {"FHD", 60, "HD+", 60, 201, 15}, {"FHD", 60, "HD", 30, 145, 15},
      {"FHD", 60, "HD", 20, 136, 15}, {"HD+", 60, "HD", 60, 135, 13}};
  for (const auto& [ir, irate, orr, orate, comp, segs] : published) {
    bool found = false;
    const auto in = video::to_value(format(ir, irate));
    const auto out = video::to_value(format(orr, orate));
    for (const auto& cfg : s)
      found = found || (cfg[0] == in && cfg[1] == out && cfg[2] == T({I(comp), I(segs)}));
    c.expect(found, std::string("budget for ") + ir + "@" + std::to_string(irate) + " -> " + orr + "@" +
                        std::to_string(orate));
  }
}

void counts(Checks& c, std::size_t n, std::size_t raw, std::size_t platform, std::size_t both) {
  using namespace solver;
  const auto scenario = n == 6 ? qrm::testing::six_stream_scenario() : qrm::testing::seven_stream_scenario();
  const auto cls = stream_classes(scenario.streams);
  const auto got_raw = enumerate_mappings(n, 3, kPlatformCap, false, false).size();
  const auto got_platform = enumerate_mappings(n, 3, kPlatformCap, true, false).size();
  const auto got_both = enumerate_mappings(n, 3, kPlatformCap, true, true, cls).size();
  if (raw) c.expect(got_raw == raw, "raw mappings " + std::to_string(got_raw) + " != " + std::to_string(raw));
  c.expect(got_platform == platform,
           "platform-symmetric mappings " + std::to_string(got_platform) + " != " + std::to_string(platform));
  c.expect(got_both == both, "fully reduced mappings " + std::to_string(got_both) + " != " + std::to_string(both));
}

void c7(Checks& c) {
  const auto r = solver::solve(qrm::testing::six_stream_scenario());
  c.expect(rate_rows(r.frontier) == Rows{{90, 90, 90, 60, 60, 60}}, "six-stream frontier");
  counts(c, 6, 690, 115, 18);
}

void c8(Checks& c) {
  const auto start = std::chrono::steady_clock::now();
  const auto r = solver::solve(qrm::testing::seven_stream_scenario());
  const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  c.expect(rate_rows(r.frontier) ==
               Rows{{30, 90, 90, 60, 60, 60, 60}, {90, 90, 90, 15, 60, 60, 30}, {90, 90, 90, 20, 60, 60, 20}},
           "seven-stream frontier");
  c.expect(solver::rates_of(r.chosen) == std::vector<std::int64_t>{30, 90, 90, 60, 60, 60, 60}, "chosen");
  counts(c, 7, 0, 315, 40);
  auto all = qrm::testing::seven_stream_scenario();
  all.stream_symmetry = false;
  const auto full = solver::solve(all);
  c.expect(full.frontier.size() == 9, "frontier without stream symmetry has " +
                                          std::to_string(full.frontier.size()) + " configurations");
  c.expect(ms < 5000, "wall time " + std::to_string(ms) + " ms");
}

void c9(Checks& c) {
  std::ifstream in(QRM_MODELS_DIR "/video.qrml");
  std::ostringstream ss;
  ss << in.rdbuf();
  const auto m = qrml::Model::from_source(ss.str(), "video.qrml");
  c.expect(single(m.evaluate("Fiber"), {V, V, V, I(10000), V, V}), "C_f");
  c.expect(single(m.evaluate("HWscaler"), {V, V, V, T({I(4), I(300), I(32)}), V, V}), "C_h");
  c.expect(single(m.evaluate("ExecutionPlatform"), {V, V, V, T({I(10000), I(4), I(300), I(32)}), V, V}), "C_e");
  const auto hs = m.evaluate("HWorSWscaler");
  c.expect(hs.size() == 2 && hs.set().contains({V, V, V, T({Value::top(), I(100), Value::top()}), V, V}) &&
               hs.set().contains({V, V, V, T({I(4), I(300), I(32)}), V, V}),
           "S_hs");
}

void c10(Checks& c) {
  using namespace qrm::testing;
  const std::vector<std::pair<const char*, SuiteResult (*)(std::size_t)>> suites = {
      {"(a) minimize vs brute force", minimize_matches_oracle},
      {"(b) dominance preservation", dominance_preservation},
      {"(c) minimality preservation", minimality_preservation},
      {"(d) refinement of pipelines", refinement},
      {"(d) refinement of templates", template_refinement},
      {"(e) derivation as constraint", derivation_as_constraint}};
  for (const auto& [name, suite] : suites) {
    const auto r = suite(kPropertyCases);
    c.expect(r.ok() && r.cases >= kPropertyCases, std::string(name) + ": " + std::to_string(r.failures) + " of " +
                                                      std::to_string(r.cases) + " failed; " + r.first_failure);
  }
}

void c11(Checks& c) {
  for (const auto& s : {qrm::testing::six_stream_scenario(), qrm::testing::seven_stream_scenario()}) {
    solver::SolveOptions one, eight;
    one.jobs = 1;
    eight.jobs = 8;
    const auto a = solver::solve(s, one);
    const auto b = solver::solve(s, eight);
    const auto tag = std::to_string(s.streams.size()) + " streams";
    c.expect(a.frontier.sorted() == b.frontier.sorted(), tag + ": frontier differs");
    c.expect(a.chosen == b.chosen, tag + ": chosen differs");
  }
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Checks&)>>> criteria = {
      {"minimization of the scaler working points", c1},
      {"free aggregation of fiber and hardware scaler", c2},
      {"horizontal aggregation of transport and scaler", c3},
      {"vertical aggregation of fiber and connection", c4},
      {"alternatives of hardware and software scaler", c5},
      {"scaler enumeration and published budgets", c6},
      {"six-stream scenario", c7},
      {"seven-stream scenario", c8},
      {"QRML platform models", c9},
      {"randomized property suites", c10},
      {"solver determinism across job counts", c11}};

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Checks checks;
    try {
      criteria[i].second(checks);
    } catch (const std::exception& e) {
      checks.failed.push_back(std::string("exception: ") + e.what());
    }
    const bool ok = checks.failed.empty();
    failures += !ok;
    std::printf("%s %2zu %s\n", ok ? "PASS" : "FAIL", i + 1, criteria[i].first);
    for (const auto& f : checks.failed) std::printf("       - %s\n", f.c_str());
  }
  std::fflush(stdout);
  return failures == 0 ? 0 : 1;
}
