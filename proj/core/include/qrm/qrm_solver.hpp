#pragma once

// Quality and resource management for the video case study: compose one
// application per stream, bind the applications to execution platforms for
// every mapping, and collect the Pareto frontier of per-stream output rates.

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "qrm/video_domain.hpp"

namespace qrm::solver {

struct StreamRequest {
  video::VideoFormat input;
  video::Resolution output;

  friend bool operator==(const StreamRequest&, const StreamRequest&) = default;
};

struct CostSpec {
  enum class Kind { MaxMinRate, WeightedMin, Custom };
  Kind kind = Kind::MaxMinRate;
  std::vector<std::int64_t> weights;
  /// Must be monotone in every rate.
  std::function<std::int64_t(const std::vector<std::int64_t>&)> custom;

  std::int64_t operator()(const std::vector<std::int64_t>& rates) const;
  /// Streams with equal requests are interchangeable under this cost.
  bool symmetric() const { return kind == Kind::MaxMinRate; }
};

struct Scenario {
  std::size_t platforms = 1;
  std::vector<StreamRequest> streams;
  CostSpec cost;
  bool platform_symmetry = true;
  bool stream_symmetry = true;
};

/// Platform index (0-based) per stream.
using Mapping = std::vector<std::size_t>;

struct SolverStats {
  std::size_t mappings_enumerated = 0;
  std::size_t mappings_after_symmetry = 0;
  double wall_time_ms = 0;
};

struct SolverResult {
  /// Over one <=-ordered rate dimension per stream, in stream order.
  ConfigurationSet frontier;
  Configuration chosen;
  Mapping chosen_mapping;
  SolverStats stats;
};

struct SolveOptions {
  unsigned jobs = 1;
  /// Minimize the frontier after every merge. Off only for cross-checks.
  bool minimize_merges = true;
  std::int64_t fiber_bw = 10;
  video::CompUnit unit = video::CompUnit::Pixels;
};

/// Streams-per-platform cap: the hardware scaler's stream slots.
inline constexpr std::size_t kPlatformCap = 4;

/// Number of functions {0..n-1} -> {0..k-1} with at most `cap` streams per
/// platform.
std::size_t count_mappings(std::size_t n, std::size_t k, std::size_t cap);

/// Mappings with at most `cap` streams per platform, one per orbit of the
/// enabled symmetries. `stream_class` gives a class id per stream; streams
/// of one class are interchangeable when `stream_symmetry` is set. Each
/// representative is the lexicographically least member of its orbit.
std::vector<Mapping> enumerate_mappings(std::size_t n, std::size_t k, std::size_t cap, bool platform_symmetry,
                                        bool stream_symmetry, const std::vector<std::size_t>& stream_class = {});

/// Class id per stream: equal requests share an id (first occurrence order).
std::vector<std::size_t> stream_classes(const std::vector<StreamRequest>& streams);

/// Transport feeding a scaler, restricted to one input format and output
/// resolution.
QRMInterface application(const StreamRequest& request, video::CompUnit unit = video::CompUnit::Pixels);

/// The application bound under its pass-through virtual execution platforms.
QRMInterface virtualized_application(const StreamRequest& request, video::CompUnit unit = video::CompUnit::Pixels);

/// Binds an application-with-VEP to the remaining budget of a platform
/// aggregate. Quality becomes the flattened tuple of bound stream rates.
QRMInterface bind(const QRMInterface& platform, const QRMInterface& va);

std::int64_t cost_max_min(const std::vector<std::int64_t>& rates);

/// Highest cost first, then the lexicographically greatest rate tuple.
/// Throws EmptyFrontier.
Configuration select_optimum(const ConfigurationSet& frontier, const CostSpec& cost);

/// Throws InfeasibleScenario when no mapping admits any configuration and
/// InvalidArgument for a malformed scenario.
SolverResult solve(const Scenario& scenario, const SolveOptions& options = {});

std::vector<std::int64_t> rates_of(const Configuration& c);

/// Scenario JSON reader and result writer (mapping printed 1-based).
Scenario scenario_from_json(std::string_view text);
std::string result_to_json(const SolverResult& result, bool with_stats, int indent = 2);

}  // namespace qrm::solver
