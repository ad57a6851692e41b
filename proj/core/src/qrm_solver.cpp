#include "qrm/qrm_solver.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <thread>
#include <unordered_map>

#include "json_detail.hpp"
#include "qrm/error.hpp"

namespace qrm::solver {

using video::CompUnit;

std::int64_t cost_max_min(const std::vector<std::int64_t>& rates) {
  if (rates.empty()) throw Error(ErrorKind::InvalidArgument, "cost of an empty rate vector");
  return *std::min_element(rates.begin(), rates.end());
}

std::int64_t CostSpec::operator()(const std::vector<std::int64_t>& rates) const {
  switch (kind) {
    case Kind::MaxMinRate: return cost_max_min(rates);
    case Kind::WeightedMin: {
      if (weights.size() != rates.size())
        throw Error(ErrorKind::InvalidArgument, "weighted cost needs one weight per stream");
      std::vector<std::int64_t> scaled;
      for (std::size_t i = 0; i < rates.size(); ++i) scaled.push_back(weights[i] * rates[i]);
      return cost_max_min(scaled);
    }
    case Kind::Custom:
      if (!custom) throw Error(ErrorKind::InvalidArgument, "custom cost without a function");
      return custom(rates);
  }
  return 0;
}

std::vector<std::int64_t> rates_of(const Configuration& c) {
  std::vector<std::int64_t> out;
  out.reserve(c.size());
  for (const auto& v : c) out.push_back(v.as_int());
  return out;
}

// ---------------------------------------------------------------------------
// Mappings

namespace {

template <typename Visit>
void for_each_capped(std::size_t n, std::size_t k, std::size_t cap, Visit&& visit) {
  Mapping m(n, 0);
  std::vector<std::size_t> load(k, 0);
  // Depth-first in lexicographic order; stream 0 is the most significant.
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == n) {
      visit(m);
      return;
    }
    for (std::size_t p = 0; p < k; ++p) {
      if (load[p] == cap) continue;
      m[i] = p;
      ++load[p];
      rec(i + 1);
      --load[p];
    }
  };
  rec(0);
}

// Platforms renamed in order of first use.
Mapping relabel(const Mapping& m) {
  Mapping out(m.size());
  std::map<std::size_t, std::size_t> seen;
  for (std::size_t i = 0; i < m.size(); ++i) {
    auto it = seen.emplace(m[i], seen.size()).first;
    out[i] = it->second;
  }
  return out;
}

// All permutations that only exchange streams of one class.
std::vector<std::vector<std::size_t>> class_permutations(const std::vector<std::size_t>& cls) {
  std::map<std::size_t, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < cls.size(); ++i) members[cls[i]].push_back(i);
  std::vector<std::vector<std::size_t>> perms;
  std::vector<std::size_t> sigma(cls.size());
  for (std::size_t i = 0; i < sigma.size(); ++i) sigma[i] = i;
  perms.push_back(sigma);
  for (const auto& [id, pos] : members) {
    if (pos.size() < 2) continue;
    std::vector<std::vector<std::size_t>> next;
    for (const auto& base : perms) {
      auto images = pos;
      do {
        auto s = base;
        for (std::size_t t = 0; t < pos.size(); ++t) s[pos[t]] = images[t];
        next.push_back(std::move(s));
      } while (std::next_permutation(images.begin(), images.end()));
    }
    perms = std::move(next);
  }
  return perms;
}

}  // namespace

std::size_t count_mappings(std::size_t n, std::size_t k, std::size_t cap) {
  std::size_t count = 0;
  for_each_capped(n, k, cap, [&](const Mapping&) { ++count; });
  return count;
}

std::vector<Mapping> enumerate_mappings(std::size_t n, std::size_t k, std::size_t cap, bool platform_symmetry,
                                        bool stream_symmetry, const std::vector<std::size_t>& stream_class) {
  if (stream_symmetry && stream_class.size() != n)
    throw Error(ErrorKind::InvalidArgument, "stream symmetry needs a class per stream");
  std::vector<std::vector<std::size_t>> perms;
  if (stream_symmetry) perms = class_permutations(stream_class);
  else perms.push_back({});

  std::vector<Mapping> out;
  for_each_capped(n, k, cap, [&](const Mapping& m) {
    if (platform_symmetry && relabel(m) != m) return;
    if (stream_symmetry) {
      Mapping img(n);
      for (const auto& sigma : perms) {
        for (std::size_t i = 0; i < n; ++i) img[i] = m[sigma[i]];
        if (platform_symmetry) img = relabel(img);
        if (img < m) return;
      }
    }
    out.push_back(m);
  });
  return out;
}

std::vector<std::size_t> stream_classes(const std::vector<StreamRequest>& streams) {
  // Dense ids in order of first appearance.
  std::vector<std::size_t> out;
  std::size_t next = 0;
  for (std::size_t i = 0; i < streams.size(); ++i) {
    std::size_t id = next;
    for (std::size_t j = 0; j < i; ++j)
      if (streams[j] == streams[i]) {
        id = out[j];
        break;
      }
    if (id == next) ++next;
    out.push_back(id);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Composition

QRMInterface application(const StreamRequest& request, CompUnit unit) {
  TemplateOptions opts;
  opts.parameters = ParameterMode::Void;
  opts.pre = {ConstraintSpec::subset(part_ref(1, Part::Parameters), {video::to_value(request.input)}),
              ConstraintSpec::subset(part_ref(2, Part::Parameters), {video::to_value(request.output)})};
  return horizontal_aggregate(video::transport_interface(), video::scaler_interface(unit), opts);
}

QRMInterface virtualized_application(const StreamRequest& request, CompUnit unit) {
  const auto app = application(request, unit);
  ConfigurationSet acc(app.space());
  for (const auto& config : app) {
    const QRMInterface single(ConfigurationSet(app.space(), {config}));
    const auto va = vertical_aggregate(video::vep_for(config), single);
    if (!acc.space().same_orders(va.space())) acc = ConfigurationSet(va.space());
    for (const auto& c : va) acc.insert(c);
  }
  return QRMInterface(minimize(acc));
}

QRMInterface bind(const QRMInterface& platform, const QRMInterface& va) {
  const auto p = [](Part part) { return part_ref(1, part); };
  const auto a = [](Part part) { return part_ref(2, part); };
  std::array<Pipeline, 6> parts;
  parts[0] = {DerivationSpec::void_()};
  parts[1] = {DerivationSpec::void_()};
  parts[2] = {DerivationSpec::copy(p(Part::Required))};
  parts[3] = {DerivationSpec::poset_sub(p(Part::Provided), a(Part::Required))};
  parts[4] = {DerivationSpec::concat(p(Part::Quality), a(Part::Quality))};
  parts[5] = {DerivationSpec::void_()};
  return apply_aggregation(
      {{platform, va}, {ConstraintSpec::producer_consumer(p(Part::Provided), a(Part::Required))}, parts, {}});
}

Configuration select_optimum(const ConfigurationSet& frontier, const CostSpec& cost) {
  if (frontier.empty()) throw Error(ErrorKind::EmptyFrontier, "no configuration to select from");
  const Configuration* best = nullptr;
  std::int64_t best_cost = 0;
  std::vector<std::int64_t> best_rates;
  for (const auto& c : frontier) {
    auto rates = rates_of(c);
    const auto value = cost(rates);
    if (!best || value > best_cost || (value == best_cost && rates > best_rates)) {
      best = &c;
      best_cost = value;
      best_rates = std::move(rates);
    }
  }
  return *best;
}

namespace {

ConfigurationSpace rate_space(std::size_t n) {
  std::vector<PosetDescriptor> dims;
  for (std::size_t i = 0; i < n; ++i) dims.push_back({"s" + std::to_string(i + 1), video::rate_order()});
  return ConfigurationSpace(std::move(dims));
}

// Rates achievable by one platform hosting the given stream classes, one
// dimension per hosted stream in the given order. Empty when infeasible.
ConfigurationSet platform_rates(const QRMInterface& platform, const std::vector<const QRMInterface*>& hosted) {
  QRMInterface bound = platform;
  for (const auto* va : hosted) {
    bound = bind(bound, *va);
    if (bound.empty()) return ConfigurationSet(rate_space(hosted.size()));
  }
  ConfigurationSet out(rate_space(hosted.size()));
  const auto q = static_cast<std::size_t>(Part::Quality);
  for (const auto& c : bound) {
    const auto& v = c[q];
    out.insert(v.is_tuple() ? Configuration(v.items()) : Configuration{v});
  }
  return minimize(out);
}

class PlatformCache {
 public:
  using Key = std::vector<std::size_t>;

  std::shared_ptr<const ConfigurationSet> find(const Key& key) {
    std::lock_guard lock(mutex_);
    auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : it->second;
  }

  std::shared_ptr<const ConfigurationSet> store(const Key& key, ConfigurationSet value) {
    std::lock_guard lock(mutex_);
    auto it = entries_.emplace(key, std::make_shared<const ConfigurationSet>(std::move(value))).first;
    return it->second;
  }

 private:
  std::mutex mutex_;
  std::map<Key, std::shared_ptr<const ConfigurationSet>> entries_;
};

struct Problem {
  std::size_t k;
  std::size_t n;
  std::vector<std::size_t> cls;
  std::map<std::size_t, QRMInterface> va;
  QRMInterface platform;
};

// Stream-ordered rates for one mapping; empty when some platform is
// overloaded.
std::optional<ConfigurationSet> evaluate_mapping(const Problem& pb, const Mapping& m, PlatformCache& cache) {
  std::vector<ConfigurationSet> pieces;
  std::vector<std::size_t> order;
  for (std::size_t p = 0; p < pb.k; ++p) {
    std::vector<std::size_t> streams;
    for (std::size_t i = 0; i < pb.n; ++i)
      if (m[i] == p) streams.push_back(i);
    if (streams.empty()) continue;
    PlatformCache::Key key;
    for (auto i : streams) key.push_back(pb.cls[i]);
    auto rates = cache.find(key);
    if (!rates) {
      std::vector<const QRMInterface*> hosted;
      for (auto c : key) hosted.push_back(&pb.va.at(c));
      rates = cache.store(key, platform_rates(pb.platform, hosted));
    }
    if (rates->empty()) return std::nullopt;
    pieces.push_back(*rates);
    order.insert(order.end(), streams.begin(), streams.end());
  }
  auto product = minimize(free_product(pieces));
  std::vector<std::size_t> pi(pb.n);
  for (std::size_t pos = 0; pos < order.size(); ++pos) pi[order[pos]] = pos;
  auto permuted = permute(product, pi);
  return ConfigurationSet(rate_space(pb.n), permuted.configs());
}

void validate(const Scenario& s) {
  if (s.platforms < 1) throw Error(ErrorKind::InvalidArgument, "at least one platform is needed");
  if (s.streams.empty()) throw Error(ErrorKind::InvalidArgument, "at least one stream is needed");
  for (const auto& r : s.streams)
    if (r.output.h * r.output.v >= r.input.res.h * r.input.res.v)
      throw Error(ErrorKind::InvalidArgument,
                  "output " + r.output.name + " is not smaller than input " + r.input.to_string());
  if (s.cost.kind == CostSpec::Kind::WeightedMin && s.cost.weights.size() != s.streams.size())
    throw Error(ErrorKind::InvalidArgument, "weighted cost needs one weight per stream");
}

}  // namespace

SolverResult solve(const Scenario& scenario, const SolveOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  validate(scenario);

  Problem pb{scenario.platforms, scenario.streams.size(), stream_classes(scenario.streams), {},
             video::execution_platform(options.unit, options.fiber_bw)};
  for (std::size_t i = 0; i < pb.n; ++i)
    if (!pb.va.count(pb.cls[i]))
      pb.va.emplace(pb.cls[i], virtualized_application(scenario.streams[i], options.unit));

  const bool stream_sym = scenario.stream_symmetry && scenario.cost.symmetric();
  const auto mappings =
      enumerate_mappings(pb.n, pb.k, kPlatformCap, scenario.platform_symmetry, stream_sym, pb.cls);

  std::vector<std::optional<ConfigurationSet>> partial(mappings.size());
  PlatformCache cache;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t idx = next++; idx < mappings.size(); idx = next++)
      partial[idx] = evaluate_mapping(pb, mappings[idx], cache);
  };
  const unsigned jobs = std::max(1u, options.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
  }

  // Merged in mapping order so the result does not depend on scheduling.
  ConfigurationSet frontier(rate_space(pb.n));
  std::unordered_map<Configuration, std::size_t, ConfigurationHash> origin;
  for (std::size_t idx = 0; idx < mappings.size(); ++idx) {
    if (!partial[idx]) continue;
    auto merged = alternatives({frontier, *partial[idx]});
    frontier = options.minimize_merges ? minimize(merged) : merged;
    for (const auto& c : frontier) origin.emplace(c, idx);
  }
  if (frontier.empty())
    throw Error(ErrorKind::InfeasibleScenario, "no mapping of the streams fits the platforms");

  SolverResult result{frontier, select_optimum(frontier, scenario.cost), {}, {}};
  result.chosen_mapping = mappings[origin.at(result.chosen)];
  result.stats.mappings_enumerated = count_mappings(pb.n, pb.k, kPlatformCap);
  result.stats.mappings_after_symmetry = mappings.size();
  result.stats.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return result;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

using json::detail::Json;

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::InvalidArgument, what); }

const Json& field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) bad(std::string("missing field \"") + name + "\"");
  return j.at(name);
}

std::int64_t integer(const Json& j, const char* what) {
  if (!j.is_number_integer()) bad(std::string(what) + " must be an integer");
  return j.get<std::int64_t>();
}

std::string text(const Json& j, const char* what) {
  if (!j.is_string()) bad(std::string(what) + " must be a string");
  return j.get<std::string>();
}

Json rates_json(const Configuration& c) {
  Json row = Json::array();
  for (const auto& v : c) row.push_back(v.as_int());
  return row;
}

}  // namespace

Scenario scenario_from_json(std::string_view source) {
  const auto j = json::detail::parse(source);
  Scenario s;
  const auto k = integer(field(j, "platforms"), "platforms");
  if (k < 1) bad("platforms must be at least 1");
  s.platforms = static_cast<std::size_t>(k);

  const auto& streams = field(j, "streams");
  if (!streams.is_array() || streams.empty()) bad("streams must be a non-empty array");
  for (const auto& st : streams) {
    const auto& in = field(st, "input");
    StreamRequest r{video::format(text(field(in, "res"), "input.res"), integer(field(in, "rate"), "input.rate")),
                    video::resolution(text(field(st, "output_res"), "output_res"))};
    s.streams.push_back(std::move(r));
  }

  if (j.contains("cost")) {
    const auto kind = text(field(j["cost"], "kind"), "cost.kind");
    if (kind == "max-min-rate") {
      s.cost.kind = CostSpec::Kind::MaxMinRate;
    } else if (kind == "weighted-min") {
      s.cost.kind = CostSpec::Kind::WeightedMin;
      const auto& w = field(j["cost"], "weights");
      if (!w.is_array()) bad("cost.weights must be an array");
      for (const auto& x : w) s.cost.weights.push_back(integer(x, "cost weight"));
    } else {
      bad("unknown cost kind " + kind);
    }
  }
  if (j.contains("symmetry")) {
    const auto& sym = j["symmetry"];
    if (!sym.is_object()) bad("symmetry must be an object");
    if (sym.contains("platform")) {
      if (!sym["platform"].is_boolean()) bad("symmetry.platform must be a boolean");
      s.platform_symmetry = sym["platform"].get<bool>();
    }
    if (sym.contains("stream")) {
      if (!sym["stream"].is_boolean()) bad("symmetry.stream must be a boolean");
      s.stream_symmetry = sym["stream"].get<bool>();
    }
  }
  validate(s);
  return s;
}

std::string result_to_json(const SolverResult& result, bool with_stats, int indent) {
  Json frontier = Json::array();
  for (const auto& c : result.frontier.sorted()) frontier.push_back(rates_json(c));
  Json mapping = Json::array();
  for (auto p : result.chosen_mapping) mapping.push_back(p + 1);
  Json j = Json::object();
  j["frontier"] = std::move(frontier);
  j["chosen"] = rates_json(result.chosen);
  j["mapping"] = std::move(mapping);
  if (with_stats) {
    Json stats = Json::object();
    stats["mappings_enumerated"] = result.stats.mappings_enumerated;
    stats["mappings_after_symmetry"] = result.stats.mappings_after_symmetry;
    stats["wall_time_ms"] = result.stats.wall_time_ms;
    j["stats"] = std::move(stats);
  }
  return j.dump(indent) + "\n";
}

}  // namespace qrm::solver
