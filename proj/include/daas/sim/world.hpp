#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "daas/core/geometry.hpp"

namespace daas::sim {

struct DroneModel {
  double max_horizontal_speed = 1.5;  // m/s
  double max_vertical_speed = 1.0;    // m/s
  double takeoff_altitude = 1.5;      // m
  double battery_capacity = 100.0;    // percent
  double hover_drain = 0.05;          // percent/s
  double move_drain = 0.1;            // percent/s
  double arrival_epsilon = 0.2;       // m

  void validate() const;
};

// A target starts at path[0].position and travels to each following point
// at that point's speed. A single-point path is a stationary target.
struct TrackPoint {
  Position3 position = Position3::Zero();
  double speed = 1.0;
};

struct TargetTrack {
  std::string id;
  std::vector<TrackPoint> path;
  bool loop = false;
  double start_time = 0.0;     // target holds at path[0] until then
  bool vanish_at_end = false;  // leaves the world after the last point

  void validate() const;
};

struct TargetState {
  std::string id;
  Position3 position = Position3::Zero();
  Velocity3 velocity = Velocity3::Zero();
  bool present = true;
};

enum class FlightPhase : std::uint8_t { Disarmed, Armed, Climbing, Flying, Descending, Landed };
enum class ControlMode : std::uint8_t { Position, Velocity };

const char* to_string(FlightPhase phase);

struct StepEvents {
  bool arrived = false;
  bool takeoff_complete = false;
  bool touchdown = false;
  bool forced_landing = false;
};

// Point-mass kinematic drone plus scripted targets, advanced in fixed steps.
// Horizontal and vertical speed limits are applied independently; velocity
// changes are instantaneous.
class SimWorld {
 public:
  SimWorld(DroneModel model, double dt, std::uint64_t seed, Position3 origin, std::vector<TargetTrack> targets = {});

  StepEvents step(double dt);

  void arm();
  void takeoff(double altitude);
  void land();
  void command_goto(const Position3& target);
  // With a yaw, the heading snaps to it instead of following the motion.
  void command_velocity(const Velocity3& v, std::optional<double> yaw = std::nullopt);
  // Position hold at the current pose.
  void hold();

  // tick / rate rather than tick * dt keeps decimal timesteps exact where possible.
  double clock() const { return static_cast<double>(tick_) / (1.0 / dt_); }
  std::uint64_t tick() const { return tick_; }
  double dt() const { return dt_; }
  std::uint64_t seed() const { return seed_; }
  const DroneModel& model() const { return model_; }

  const Position3& pose() const { return pose_; }
  const Velocity3& velocity() const { return velocity_; }
  double battery() const { return battery_; }
  double heading() const { return heading_; }
  FlightPhase phase() const { return phase_; }
  ControlMode mode() const { return mode_; }
  const Position3& setpoint() const { return setpoint_; }
  const Velocity3& velocity_setpoint() const { return velocity_setpoint_; }
  bool airborne() const {
    return phase_ == FlightPhase::Climbing || phase_ == FlightPhase::Flying || phase_ == FlightPhase::Descending;
  }

  const std::vector<TargetState>& targets() const { return target_states_; }
  const TargetState* find_target(const std::string& id) const;

 private:
  struct TrackCursor {
    std::size_t next = 1;
    bool finished = false;
  };

  void require_controllable(const char* what) const;
  Position3 move_toward(const Position3& goal) const;
  void advance_targets();

  DroneModel model_;
  double dt_;
  std::uint64_t seed_;
  std::uint64_t tick_ = 0;

  Position3 pose_;
  Velocity3 velocity_ = Velocity3::Zero();
  double battery_;
  double heading_ = 0.0;
  FlightPhase phase_ = FlightPhase::Disarmed;
  ControlMode mode_ = ControlMode::Position;
  Position3 setpoint_;
  Velocity3 velocity_setpoint_ = Velocity3::Zero();
  std::optional<double> yaw_setpoint_;
  double climb_altitude_ = 0.0;
  bool arrival_pending_ = false;

  std::vector<TargetTrack> tracks_;
  std::vector<TargetState> target_states_;
  std::vector<TrackCursor> cursors_;
};

}  // namespace daas::sim
