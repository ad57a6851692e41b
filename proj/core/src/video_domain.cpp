#include "qrm/video_domain.hpp"

#include <algorithm>

#include "qrm/error.hpp"

namespace qrm::video {

const std::vector<Resolution>& resolutions() {
  static const std::vector<Resolution> all = {
      {"FHD", 1920, 1080}, {"HD+", 1600, 900}, {"HD", 1280, 720}, {"qHD", 960, 540}, {"nHD", 640, 360}};
  return all;
}

const std::vector<std::int64_t>& frame_rates() {
  static const std::vector<std::int64_t> all = {90, 60, 30, 20, 15, 10, 6, 5};
  return all;
}

const Resolution& resolution(std::string_view name) {
  for (const auto& r : resolutions())
    if (r.name == name) return r;
  throw Error(ErrorKind::InvalidArgument, "unknown resolution " + std::string(name));
}

VideoFormat format(std::string_view res, std::int64_t rate) {
  const auto& rates = frame_rates();
  if (std::find(rates.begin(), rates.end(), rate) == rates.end())
    throw Error(ErrorKind::InvalidArgument, "unsupported frame rate " + std::to_string(rate));
  return {resolution(res), rate};
}

OrderKind video_order() { return OrderKind::eq("video"); }
OrderKind resolution_order() { return OrderKind::eq("resolution"); }
OrderKind bandwidth_required_order() { return OrderKind::ge("bw"); }
OrderKind connection_required_order() { return OrderKind::ge("cbw"); }
OrderKind scaling_required_order() { return OrderKind::elementwise({OrderKind::ge("comp"), OrderKind::ge("segs")}); }
OrderKind scaling_provided_order() { return dual(scaling_required_order()); }
OrderKind scalers_required_order() {
  return OrderKind::elementwise({OrderKind::ge("streams"), OrderKind::ge("comp"), OrderKind::ge("segs")});
}
OrderKind scalers_provided_order() { return dual(scalers_required_order()); }
OrderKind rate_order() { return OrderKind::le("rate"); }

Value to_value(const VideoFormat& f) {
  return Value::tuple({Value::integer(f.res.h), Value::integer(f.res.v), Value::integer(f.rate)});
}

Value to_value(const Resolution& r) { return Value::tuple({Value::integer(r.h), Value::integer(r.v)}); }

namespace {

std::int64_t pixels(const Resolution& r) { return r.h * r.v; }

bool valid_scaling(const VideoFormat& in, const VideoFormat& out) {
  return pixels(out.res) < pixels(in.res) && out.rate > 0 && in.rate % out.rate == 0;
}

Value V() { return Value::void_value(); }

}  // namespace

std::int64_t scaler_comp(const VideoFormat& in, const VideoFormat& out, CompUnit unit) {
  if (!valid_scaling(in, out))
    throw Error(ErrorKind::InvalidArgument, "no scaler mode from " + in.to_string() + " to " + out.to_string());
  const std::int64_t rate = pixels(in.res) * in.rate + pixels(out.res) * out.rate;
  return unit == CompUnit::Pixels ? rate : rate >> 20;
}

std::int64_t scaler_segs(const VideoFormat& in) { return (in.res.h + 127) / 128; }

std::int64_t transport_bandwidth(const VideoFormat& f) {
  const std::int64_t bits = pixels(f.res) * 32 * f.rate;
  return (bits + 999'999'999) / 1'000'000'000;
}

std::int64_t hw_streams() { return 4; }
std::int64_t hw_comp(CompUnit unit) { return unit == CompUnit::Pixels ? std::int64_t{300} << 20 : 300; }
std::int64_t hw_segs() { return 32; }
std::int64_t fiber_bandwidth() { return 10; }

namespace {

PartOrders scaler_orders() {
  return {video_order(), video_order(), scaling_required_order(), void_order(), rate_order(), resolution_order()};
}

PartValues scaler_point(const VideoFormat& in, const VideoFormat& out, CompUnit unit) {
  return {to_value(in),
          to_value(out),
          Value::tuple({Value::integer(scaler_comp(in, out, unit)), Value::integer(scaler_segs(in))}),
          V(),
          Value::integer(out.rate),
          to_value(out.res)};
}

}  // namespace

QRMInterface scaler_interface(CompUnit unit) {
  std::vector<PartValues> points;
  for (const auto& ri : resolutions())
    for (auto fi : frame_rates())
      for (const auto& ro : resolutions())
        for (auto fo : frame_rates()) {
          VideoFormat in{ri, fi};
          VideoFormat out{ro, fo};
          if (valid_scaling(in, out)) points.push_back(scaler_point(in, out, unit));
        }
  return QRMInterface(scaler_orders(), points);
}

QRMInterface scaler_interface(const std::vector<std::pair<VideoFormat, VideoFormat>>& pairs, CompUnit unit) {
  std::vector<PartValues> points;
  for (const auto& [in, out] : pairs) points.push_back(scaler_point(in, out, unit));
  return QRMInterface(scaler_orders(), points);
}

QRMInterface transport_interface(const std::vector<VideoFormat>& formats) {
  const PartOrders orders = {video_order(),  video_order(), connection_required_order(),
                             void_order(),   void_order(),  video_order()};
  std::vector<PartValues> points;
  for (const auto& f : formats)
    points.push_back({to_value(f), to_value(f), Value::integer(transport_bandwidth(f)), V(), V(), to_value(f)});
  return QRMInterface(orders, points);
}

QRMInterface transport_interface() {
  std::vector<VideoFormat> all;
  for (const auto& r : resolutions())
    for (auto f : frame_rates()) all.push_back({r, f});
  return transport_interface(all);
}

QRMInterface fiber(std::int64_t bw) {
  auto orders = void_parts();
  orders[3] = dual(bandwidth_required_order());
  return QRMInterface(orders, {{V(), V(), V(), Value::integer(bw), V(), V()}});
}

QRMInterface hw_scaler(CompUnit unit) {
  auto orders = void_parts();
  orders[3] = scalers_provided_order();
  const auto budget =
      Value::tuple({Value::integer(hw_streams()), Value::integer(hw_comp(unit)), Value::integer(hw_segs())});
  return QRMInterface(orders, {{V(), V(), V(), budget, V(), V()}});
}

QRMInterface sw_scaler(std::int64_t comp) {
  auto orders = void_parts();
  orders[3] = OrderKind::le("comp");
  return QRMInterface(orders, {{V(), V(), V(), Value::integer(comp), V(), V()}});
}

QRMInterface connection(std::int64_t b) {
  auto orders = void_parts();
  orders[2] = bandwidth_required_order();
  orders[3] = dual(connection_required_order());
  return QRMInterface(orders, {{V(), V(), Value::integer(b), Value::integer(b), V(), V()}});
}

QRMInterface virtual_scaler(std::int64_t comp, std::int64_t segs) {
  auto orders = void_parts();
  orders[2] = scalers_required_order();
  orders[3] = scaling_provided_order();
  const auto required = Value::tuple({Value::integer(1), Value::integer(comp), Value::integer(segs)});
  const auto provided = Value::tuple({Value::integer(comp), Value::integer(segs)});
  return QRMInterface(orders, {{V(), V(), required, provided, V(), V()}});
}

QRMInterface hw_or_sw_scaler() {
  auto target = void_parts();
  target[3] = scalers_provided_order();

  auto hw_parts = copy_parts();
  auto sw_parts = copy_parts();
  sw_parts[3] = {DerivationSpec::custom(
      [](const Configuration& c, const ConfigurationSpace&) {
        return Value::tuple({Value::top(), c[3], Value::top()});
      },
      scalers_provided_order(), "unlimited")};

  return apply_alternatives({{{hw_scaler(), hw_parts}, {sw_scaler(), sw_parts}}, target});
}

QRMInterface execution_platform(CompUnit unit, std::int64_t bw) { return free_aggregate(fiber(bw), hw_scaler(unit)); }

QRMInterface vep_for(const Configuration& app_config) {
  const auto& required = app_config[static_cast<std::size_t>(Part::Required)];
  const auto& scaling = required.items().at(1);
  return free_aggregate(connection(required.items().at(0).as_int()),
                        virtual_scaler(scaling.items().at(0).as_int(), scaling.items().at(1).as_int()));
}

}  // namespace qrm::video
