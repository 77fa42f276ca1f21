#include "daas/sim/world.hpp"

#include <cmath>

#include "daas/core/error.hpp"
#include "daas/core/types.hpp"

namespace daas::sim {

namespace {

constexpr double kExact = 1e-9;

}  // namespace

const char* to_string(FlightPhase phase) {
  switch (phase) {
    case FlightPhase::Disarmed: return "disarmed";
    case FlightPhase::Armed: return "armed";
    case FlightPhase::Climbing: return "climbing";
    case FlightPhase::Flying: return "flying";
    case FlightPhase::Descending: return "descending";
    case FlightPhase::Landed: return "landed";
  }
  return "unknown";
}

void DroneModel::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorCode::Validation, std::string(name) + " must be > 0");
  };
  positive(max_horizontal_speed, "max_horizontal_speed");
  positive(max_vertical_speed, "max_vertical_speed");
  positive(takeoff_altitude, "takeoff_altitude");
  positive(battery_capacity, "battery_capacity");
  positive(hover_drain, "hover_drain");
  positive(move_drain, "move_drain");
  positive(arrival_epsilon, "arrival_epsilon");
}

void TargetTrack::validate() const {
  if (id.empty()) throw Error(ErrorCode::Validation, "target id must be non-empty");
  if (path.empty()) throw Error(ErrorCode::Validation, "target '" + id + "' has an empty path");
  for (const auto& p : path) {
    daas::validate(p.position, "target '" + id + "'");
    if (!(p.speed > 0.0)) throw Error(ErrorCode::Validation, "target '" + id + "' speeds must be > 0");
  }
}

SimWorld::SimWorld(DroneModel model, double dt, std::uint64_t seed, Position3 origin, std::vector<TargetTrack> targets)
    : model_(model), dt_(dt), seed_(seed), pose_(origin), battery_(model.battery_capacity), setpoint_(origin),
      tracks_(std::move(targets)) {
  model_.validate();
  if (!(dt_ > 0.0)) throw Error(ErrorCode::Validation, "dt must be > 0");
  daas::validate(origin, "takeoff origin");
  if (origin.z() < 0.0) throw Error(ErrorCode::Validation, "takeoff origin must have z >= 0");
  for (const auto& t : tracks_) {
    t.validate();
    target_states_.push_back(TargetState{t.id, t.path.front().position, Velocity3::Zero(), true});
    cursors_.push_back(TrackCursor{1, t.path.size() == 1 && !t.loop});
  }
}

const TargetState* SimWorld::find_target(const std::string& id) const {
  for (const auto& t : target_states_) {
    if (t.id == id) return &t;
  }
  return nullptr;
}

void SimWorld::arm() {
  if (phase_ != FlightPhase::Disarmed) throw Error(ErrorCode::Rejected, "arm requires a disarmed drone");
  phase_ = FlightPhase::Armed;
}

void SimWorld::takeoff(double altitude) {
  if (phase_ != FlightPhase::Armed) {
    throw Error(ErrorCode::Rejected, std::string("takeoff rejected in phase ") + to_string(phase_));
  }
  if (!(altitude > 0.0) || !std::isfinite(altitude)) throw Error(ErrorCode::Validation, "takeoff altitude must be > 0");
  phase_ = FlightPhase::Climbing;
  climb_altitude_ = altitude;
  mode_ = ControlMode::Position;
  setpoint_ = Position3(pose_.x(), pose_.y(), altitude);
}

void SimWorld::land() {
  if (phase_ != FlightPhase::Climbing && phase_ != FlightPhase::Flying) {
    throw Error(ErrorCode::Rejected, std::string("land rejected in phase ") + to_string(phase_));
  }
  phase_ = FlightPhase::Descending;
  arrival_pending_ = false;
}

void SimWorld::require_controllable(const char* what) const {
  if (phase_ != FlightPhase::Climbing && phase_ != FlightPhase::Flying) {
    throw Error(ErrorCode::Rejected, std::string(what) + " rejected: drone not airborne (" + to_string(phase_) + ")");
  }
}

void SimWorld::command_goto(const Position3& target) {
  require_controllable("goto");
  daas::validate(target, "goto target");
  if (target.z() < 0.0) throw Error(ErrorCode::Validation, "goto target below ground");
  phase_ = FlightPhase::Flying;
  mode_ = ControlMode::Position;
  setpoint_ = target;
  yaw_setpoint_.reset();
  arrival_pending_ = true;
}

void SimWorld::command_velocity(const Velocity3& v, std::optional<double> yaw) {
  require_controllable("velocity");
  daas::validate(v, "velocity command");
  if (yaw && !std::isfinite(*yaw)) throw Error(ErrorCode::Validation, "yaw must be finite");
  yaw_setpoint_ = yaw;
  phase_ = FlightPhase::Flying;
  mode_ = ControlMode::Velocity;
  velocity_setpoint_ = clamp_velocity(v, model_.max_horizontal_speed, model_.max_vertical_speed);
  arrival_pending_ = false;
}

void SimWorld::hold() {
  require_controllable("hold");
  phase_ = FlightPhase::Flying;
  mode_ = ControlMode::Position;
  setpoint_ = pose_;
  yaw_setpoint_.reset();
  arrival_pending_ = false;
}

Position3 SimWorld::move_toward(const Position3& goal) const {
  Position3 next = pose_;
  const Eigen::Vector2d dh = goal.head<2>() - pose_.head<2>();
  const double h = dh.norm();
  const double h_step = model_.max_horizontal_speed * dt_;
  if (h <= h_step) {
    next.head<2>() = goal.head<2>();
  } else {
    next.head<2>() += dh * (h_step / h);
  }
  const double dz = goal.z() - pose_.z();
  const double v_step = model_.max_vertical_speed * dt_;
  next.z() = std::abs(dz) <= v_step ? goal.z() : pose_.z() + std::copysign(v_step, dz);
  return next;
}

StepEvents SimWorld::step(double dt) {
  if (std::abs(dt - dt_) > 1e-12) throw Error(ErrorCode::Validation, "step dt must equal the configured timestep");
  StepEvents events;
  const Position3 before = pose_;

  switch (phase_) {
    case FlightPhase::Disarmed:
    case FlightPhase::Armed:
    case FlightPhase::Landed:
      break;
    case FlightPhase::Climbing:
      pose_ = move_toward(setpoint_);
      if (std::abs(pose_.z() - climb_altitude_) <= kExact) {
        phase_ = FlightPhase::Flying;
        mode_ = ControlMode::Position;
        setpoint_ = pose_;
        events.takeoff_complete = true;
      }
      break;
    case FlightPhase::Descending:
      pose_ = move_toward(Position3(pose_.x(), pose_.y(), 0.0));
      if (pose_.z() <= kExact) {
        pose_.z() = 0.0;
        phase_ = FlightPhase::Landed;
        events.touchdown = true;
      }
      break;
    case FlightPhase::Flying:
      if (mode_ == ControlMode::Position) {
        pose_ = move_toward(setpoint_);
      } else {
        pose_ += velocity_setpoint_ * dt_;
        pose_.z() = std::max(pose_.z(), 0.0);
      }
      break;
  }

  const Position3 displacement = pose_ - before;
  velocity_ = displacement / dt_;
  if (phase_ == FlightPhase::Flying && mode_ == ControlMode::Velocity && yaw_setpoint_) {
    heading_ = wrap_angle(*yaw_setpoint_);
  } else if (horizontal_norm(displacement) > kExact) {
    heading_ = std::atan2(displacement.y(), displacement.x());
  }

  if (airborne() || events.touchdown) {
    const double rate = displacement.norm() > kExact ? model_.move_drain : model_.hover_drain;
    battery_ = std::max(0.0, battery_ - rate * dt_);
    if (battery_ <= 0.0 && (phase_ == FlightPhase::Climbing || phase_ == FlightPhase::Flying)) {
      phase_ = FlightPhase::Descending;
      arrival_pending_ = false;
      events.forced_landing = true;
    }
  }

  if (arrival_pending_ && phase_ == FlightPhase::Flying && mode_ == ControlMode::Position &&
      euclidean_distance(pose_, setpoint_) <= model_.arrival_epsilon) {
    arrival_pending_ = false;
    events.arrived = true;
  }

  advance_targets();
  ++tick_;
  return events;
}

void SimWorld::advance_targets() {
  const double now = clock();
  for (std::size_t i = 0; i < tracks_.size(); ++i) {
    const TargetTrack& track = tracks_[i];
    TargetState& state = target_states_[i];
    TrackCursor& cursor = cursors_[i];
    const Position3 before = state.position;
    if (!state.present || cursor.finished || now < track.start_time) {
      state.velocity.setZero();
      continue;
    }
    double remaining = dt_;
    std::size_t zero_hops = 0;
    while (remaining > 0.0 && !cursor.finished && zero_hops <= track.path.size()) {
      const TrackPoint& goal = track.path[cursor.next];
      const Position3 delta = goal.position - state.position;
      const double dist = delta.norm();
      const double needed = dist / goal.speed;
      if (needed <= remaining) {
        state.position = goal.position;
        remaining -= needed;
        ++cursor.next;
        if (cursor.next == track.path.size()) {
          if (track.loop) {
            cursor.next = 0;
          } else {
            cursor.finished = true;
            if (track.vanish_at_end) state.present = false;
          }
        }
        zero_hops = needed == 0.0 ? zero_hops + 1 : 0;
      } else {
        state.position += delta * (goal.speed * remaining / dist);
        remaining = 0.0;
      }
    }
    state.velocity = (state.position - before) / dt_;
  }
}

}  // namespace daas::sim
