#pragma once

// The video-processing case study: posets, component interfaces and the
// scaler configuration rules.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qrm/qrm_interface.hpp"

namespace qrm::video {

struct Resolution {
  std::string name;
  std::int64_t h;
  std::int64_t v;

  friend bool operator==(const Resolution&, const Resolution&) = default;
};

struct VideoFormat {
  Resolution res;
  std::int64_t rate;

  friend bool operator==(const VideoFormat&, const VideoFormat&) = default;
  std::string to_string() const { return res.name + "@" + std::to_string(rate); }
};

/// FHD, HD+, HD, qHD, nHD, largest first.
const std::vector<Resolution>& resolutions();
/// 90, 60, 30, 20, 15, 10, 6, 5.
const std::vector<std::int64_t>& frame_rates();

/// Throws InvalidArgument for an unknown name (names are case-sensitive).
const Resolution& resolution(std::string_view name);
VideoFormat format(std::string_view res, std::int64_t rate);

/// Unit of the scaler computation budget. Megapixels follows the published
/// budget values (binary mega, rounded down); Pixels keeps the exact pixel
/// rate so that budget sums are not distorted by per-stream rounding.
enum class CompUnit { Megapixels, Pixels };

// Posets of the case study. Each carries a domain tag so that, say, fiber
// bandwidth and connection bandwidth are different posets.
OrderKind video_order();       // (h, v, rate) under equality
OrderKind resolution_order();  // (h, v) under equality
OrderKind bandwidth_required_order();
OrderKind connection_required_order();
OrderKind scaling_required_order();   // (comp, segs), larger is worse
OrderKind scaling_provided_order();   // (comp, segs), larger is better
OrderKind scalers_required_order();   // (streams, comp, segs)
OrderKind scalers_provided_order();
OrderKind rate_order();

Value to_value(const VideoFormat& f);
Value to_value(const Resolution& r);

/// Binary-mega pixel rate of input plus output. Throws InvalidArgument unless
/// the output resolution is strictly smaller and its rate divides the input
/// rate.
std::int64_t scaler_comp(const VideoFormat& in, const VideoFormat& out, CompUnit unit = CompUnit::Megapixels);
/// 128-pixel line segments of the input, rounded up.
std::int64_t scaler_segs(const VideoFormat& in);
/// Gb/s for 4-byte pixels, rounded up.
std::int64_t transport_bandwidth(const VideoFormat& f);

/// Per-unit budget of one hardware scaler: (streams, comp, segs).
std::int64_t hw_streams();
std::int64_t hw_comp(CompUnit unit = CompUnit::Megapixels);
std::int64_t hw_segs();
std::int64_t fiber_bandwidth();

/// All 270 scaler working points.
QRMInterface scaler_interface(CompUnit unit = CompUnit::Megapixels);
/// Selected scaler working points, in the order given.
QRMInterface scaler_interface(const std::vector<std::pair<VideoFormat, VideoFormat>>& pairs,
                              CompUnit unit = CompUnit::Megapixels);
/// One configuration per supported format (or per format given).
QRMInterface transport_interface();
QRMInterface transport_interface(const std::vector<VideoFormat>& formats);

QRMInterface fiber(std::int64_t bw = 10);
QRMInterface hw_scaler(CompUnit unit = CompUnit::Megapixels);
/// Provides computation only.
QRMInterface sw_scaler(std::int64_t comp = 100);
/// Requires bandwidth `b` and provides connection bandwidth `b`.
QRMInterface connection(std::int64_t b);
/// Requires one hardware stream slot plus the scaling budget, and provides
/// that scaling budget.
QRMInterface virtual_scaler(std::int64_t comp, std::int64_t segs);

/// Choice between hardware and software scaler, normalized to
/// (streams, comp, segs) with top for unlimited parts.
QRMInterface hw_or_sw_scaler();

/// Free aggregation of one fiber and one hardware scaler.
QRMInterface execution_platform(CompUnit unit = CompUnit::Megapixels, std::int64_t bw = 10);

/// Connection and virtual scaler passing through the budgets required by one
/// application configuration (required part shaped (bw, (comp, segs))).
QRMInterface vep_for(const Configuration& app_config);

}  // namespace qrm::video
