#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "daas/core/types.hpp"
#include "daas/sim/world.hpp"

namespace daas::sensing {

enum class SensorKind : std::uint8_t { Camera, Odometry, StatStream };
enum class DeliveryMode : std::uint8_t { Push, Pull };

std::string_view to_string(SensorKind k);
SensorKind parse_sensor_kind(std::string_view s);

struct SensorDescriptor {
  std::string id;
  SensorKind kind = SensorKind::Camera;
  double rate = 1.0;  // samples per sim-second
  std::map<std::string, std::string> properties;
};

// Symbolic stand-in for an image: ground-truth geometry of each target.
// Bearing is the world-frame azimuth (radians CCW from +x) and range the
// horizontal distance from the drone.
struct Observation {
  std::string target_id;
  double bearing = 0.0;
  double range = 0.0;
  bool in_fov = false;

  bool operator==(const Observation&) const = default;
};

struct CameraFrame {
  double sim_time = 0.0;
  std::uint64_t frame_seq = 0;
  Position3 observer = Position3::Zero();
  std::vector<Observation> observations;

  bool operator==(const CameraFrame&) const = default;
};

struct OdometrySample {
  double sim_time = 0.0;
  std::uint64_t seq = 0;
  Position3 pose = Position3::Zero();
  Velocity3 velocity = Velocity3::Zero();
  double battery = 0.0;

  bool operator==(const OdometrySample&) const = default;
};

using SensorSample = std::variant<CameraFrame, OdometrySample, StatStreamEvent>;
using SampleConsumer = std::function<void(const SensorSample&)>;

// Horizontal field-of-view cone centred on the drone heading.
struct CameraOptics {
  double half_angle = 60.0 * M_PI / 180.0;
  double max_range = 20.0;
};

CameraOptics optics_from(const SensorDescriptor& d);
CameraFrame observe(const sim::SimWorld& world, const CameraOptics& optics, std::uint64_t frame_seq);

namespace detail {
struct Channel {
  SensorDescriptor descriptor;
  CameraOptics optics;
  std::uint64_t next_index = 0;
  std::optional<SensorSample> latest;
  std::vector<SampleConsumer> consumers;
};
}  // namespace detail

// Handle returned by get_data_stream. Pull handles read the most recent
// sample; push handles are registrations and `pull()` on them still works.
class DataStream {
 public:
  DataStream(std::shared_ptr<const detail::Channel> channel, DeliveryMode mode)
      : channel_(std::move(channel)), mode_(mode) {}

  DeliveryMode mode() const { return mode_; }
  const std::string& sensor_id() const { return channel_->descriptor.id; }
  std::optional<SensorSample> pull() const { return channel_->latest; }

 private:
  std::shared_ptr<const detail::Channel> channel_;
  DeliveryMode mode_;
};

class SensorHub {
 public:
  void add_sensor(SensorDescriptor descriptor);
  bool has_sensor(const std::string& id) const { return channels_.contains(id); }
  const SensorDescriptor& descriptor(const std::string& id) const;
  std::vector<SensorDescriptor> descriptors() const;

  // Push mode requires a consumer; Pull ignores it.
  DataStream get_data_stream(const std::string& sensor_id, DeliveryMode mode, SampleConsumer consumer = {});
  std::string get_sensor_property(const std::string& sensor_id, const std::string& key) const;

  // Emits every periodic sample due at the world's current clock.
  void sample(const sim::SimWorld& world);
  // Feeds stat-stream sensors.
  void publish_state(const StatStreamEvent& event);

 private:
  std::shared_ptr<detail::Channel>& channel(const std::string& id);
  const std::shared_ptr<detail::Channel>& channel(const std::string& id) const;
  static void deliver(detail::Channel& ch, SensorSample sample);

  std::map<std::string, std::shared_ptr<detail::Channel>> channels_;
};

}  // namespace daas::sensing
