#include "daas/analytics/follow.hpp"

#include <algorithm>
#include <cmath>

#include "daas/core/error.hpp"

namespace daas::analytics {

namespace {

constexpr double kVelocitySmoothing = 0.5;

}  // namespace

FollowController::FollowController(FollowConfig config) : config_(config) {}

void FollowController::reset() {
  integral_ = 0.0;
  previous_error_.reset();
  last_detection_time_.reset();
  previous_target_.reset();
  target_velocity_.setZero();
  last_command_.setZero();
}

Velocity3 FollowController::update(const Detection& detection, double dt) {
  if (!(dt > 0.0)) throw Error(ErrorCode::Validation, "follow_control requires dt > 0");
  const FollowGains& g = config_.gains;

  const double error = detection.range - config_.setpoint_distance;
  integral_ = std::clamp(integral_ + error * dt, -config_.integral_limit, config_.integral_limit);
  const double derivative = previous_error_ ? (error - *previous_error_) / dt : 0.0;
  previous_error_ = error;

  const Position3 target = detection.target_estimate();
  if (previous_target_ && last_detection_time_) {
    const double span = detection.frame_time - *last_detection_time_;
    const double interval = span > 0.0 ? span : dt;
    const Velocity3 raw = (target - *previous_target_) / interval;
    target_velocity_ = kVelocitySmoothing * raw + (1.0 - kVelocitySmoothing) * target_velocity_;
    target_velocity_.z() = 0.0;
  }
  previous_target_ = target;
  last_detection_time_ = detection.frame_time;

  const double along = g.kp * error + g.ki * integral_ + g.kd * derivative;
  Velocity3 command(along * std::cos(detection.bearing), along * std::sin(detection.bearing), 0.0);
  if (config_.feedforward) command += target_velocity_;
  if (config_.altitude) command.z() = g.kp_vertical * (*config_.altitude - detection.observer.z());

  last_command_ = clamp_velocity(command, config_.max_horizontal_speed, config_.max_vertical_speed);
  return last_command_;
}

bool FollowController::check_loss(double now) {
  if (!last_detection_time_) return false;
  if (now - *last_detection_time_ <= config_.loss_timeout) return false;
  reset();
  return true;
}

}  // namespace daas::analytics
