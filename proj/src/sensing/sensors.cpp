#include "daas/sensing/sensors.hpp"

#include <cmath>
#include <sstream>

#include "daas/core/error.hpp"

namespace daas::sensing {

namespace {

constexpr double kDueSlack = 1e-9;

std::string format_number(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

double property_or(const SensorDescriptor& d, const std::string& key, double fallback) {
  auto it = d.properties.find(key);
  if (it == d.properties.end()) return fallback;
  try {
    return std::stod(it->second);
  } catch (const std::exception&) {
    throw Error(ErrorCode::Configuration, "sensor '" + d.id + "' property '" + key + "' is not a number");
  }
}

}  // namespace

std::string_view to_string(SensorKind k) {
  switch (k) {
    case SensorKind::Camera: return "camera";
    case SensorKind::Odometry: return "odometry";
    case SensorKind::StatStream: return "stat_stream";
  }
  return "unknown";
}

SensorKind parse_sensor_kind(std::string_view s) {
  if (s == "camera") return SensorKind::Camera;
  if (s == "odometry") return SensorKind::Odometry;
  if (s == "stat_stream") return SensorKind::StatStream;
  throw Error(ErrorCode::Validation, "unknown sensor kind '" + std::string(s) + "'");
}

CameraOptics optics_from(const SensorDescriptor& d) {
  CameraOptics o;
  o.half_angle = property_or(d, "fov_half_angle_deg", 60.0) * M_PI / 180.0;
  o.max_range = property_or(d, "max_range", 20.0);
  return o;
}

CameraFrame observe(const sim::SimWorld& world, const CameraOptics& optics, std::uint64_t frame_seq) {
  CameraFrame frame;
  frame.sim_time = world.clock();
  frame.frame_seq = frame_seq;
  frame.observer = world.pose();
  for (const auto& target : world.targets()) {
    if (!target.present) continue;
    Observation obs;
    obs.target_id = target.id;
    obs.range = horizontal_distance(world.pose(), target.position);
    obs.bearing = obs.range > 0.0 ? bearing(world.pose(), target.position) : world.heading();
    const double off_axis = std::abs(wrap_angle(obs.bearing - world.heading()));
    obs.in_fov = obs.range <= optics.max_range && off_axis <= optics.half_angle;
    frame.observations.push_back(std::move(obs));
  }
  return frame;
}

void SensorHub::add_sensor(SensorDescriptor descriptor) {
  if (descriptor.id.empty()) throw Error(ErrorCode::Validation, "sensor id must be non-empty");
  if (!(descriptor.rate > 0.0) || !std::isfinite(descriptor.rate)) {
    throw Error(ErrorCode::Validation, "sensor '" + descriptor.id + "' rate must be > 0");
  }
  if (channels_.contains(descriptor.id)) {
    throw Error(ErrorCode::DuplicateId, "sensor id '" + descriptor.id + "' already registered");
  }
  auto ch = std::make_shared<detail::Channel>();
  if (descriptor.kind == SensorKind::Camera) ch->optics = optics_from(descriptor);
  ch->descriptor = std::move(descriptor);
  channels_.emplace(ch->descriptor.id, std::move(ch));
}

std::shared_ptr<detail::Channel>& SensorHub::channel(const std::string& id) {
  auto it = channels_.find(id);
  if (it == channels_.end()) throw Error(ErrorCode::NotFound, "unknown sensor '" + id + "'");
  return it->second;
}

const std::shared_ptr<detail::Channel>& SensorHub::channel(const std::string& id) const {
  auto it = channels_.find(id);
  if (it == channels_.end()) throw Error(ErrorCode::NotFound, "unknown sensor '" + id + "'");
  return it->second;
}

const SensorDescriptor& SensorHub::descriptor(const std::string& id) const { return channel(id)->descriptor; }

std::vector<SensorDescriptor> SensorHub::descriptors() const {
  std::vector<SensorDescriptor> out;
  for (const auto& [id, ch] : channels_) out.push_back(ch->descriptor);
  return out;
}

DataStream SensorHub::get_data_stream(const std::string& sensor_id, DeliveryMode mode, SampleConsumer consumer) {
  auto& ch = channel(sensor_id);
  if (mode == DeliveryMode::Push) {
    if (!consumer) throw Error(ErrorCode::Validation, "push stream requires a consumer");
    ch->consumers.push_back(std::move(consumer));
  }
  return DataStream(ch, mode);
}

std::string SensorHub::get_sensor_property(const std::string& sensor_id, const std::string& key) const {
  const auto& d = channel(sensor_id)->descriptor;
  if (key == "id") return d.id;
  if (key == "kind") return std::string(to_string(d.kind));
  if (key == "rate") return format_number(d.rate);
  auto it = d.properties.find(key);
  if (it == d.properties.end()) {
    throw Error(ErrorCode::NotFound, "sensor '" + sensor_id + "' has no property '" + key + "'");
  }
  return it->second;
}

void SensorHub::deliver(detail::Channel& ch, SensorSample sample) {
  ch.latest = std::move(sample);
  for (const auto& consumer : ch.consumers) consumer(*ch.latest);
}

void SensorHub::sample(const sim::SimWorld& world) {
  const double now = world.clock();
  for (auto& [id, ch] : channels_) {
    if (ch->descriptor.kind == SensorKind::StatStream) continue;
    // Sample k is due at k / rate. Catch-up samples share the tick's state.
    while (static_cast<double>(ch->next_index) / ch->descriptor.rate <= now + kDueSlack) {
      const std::uint64_t seq = ch->next_index++;
      if (ch->descriptor.kind == SensorKind::Camera) {
        deliver(*ch, observe(world, ch->optics, seq));
      } else {
        deliver(*ch, OdometrySample{now, seq, world.pose(), world.velocity(), world.battery()});
      }
    }
  }
}

void SensorHub::publish_state(const StatStreamEvent& event) {
  for (auto& [id, ch] : channels_) {
    if (ch->descriptor.kind == SensorKind::StatStream) deliver(*ch, event);
  }
}

}  // namespace daas::sensing
