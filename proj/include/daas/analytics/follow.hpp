#pragma once

#include <optional>

#include "daas/analytics/tasks.hpp"

namespace daas::analytics {

// PID on the range error along the line of sight to the target, plus an
// optional feed-forward of the target's estimated ground velocity. Output is
// a world-frame velocity command clamped to the drone's speed limits.
class FollowController {
 public:
  explicit FollowController(FollowConfig config = {});

  const FollowConfig& config() const { return config_; }

  Velocity3 update(const Detection& detection, double dt);

  // Returns true exactly once when no detection arrived for longer than the
  // loss timeout; the controller then resets.
  bool check_loss(double now);

  bool tracking() const { return last_detection_time_.has_value(); }
  double integral() const { return integral_; }
  const Velocity3& last_command() const { return last_command_; }
  const Velocity3& target_velocity_estimate() const { return target_velocity_; }
  void reset();

 private:
  FollowConfig config_;
  double integral_ = 0.0;
  std::optional<double> previous_error_;
  std::optional<double> last_detection_time_;
  std::optional<Position3> previous_target_;
  Velocity3 target_velocity_ = Velocity3::Zero();
  Velocity3 last_command_ = Velocity3::Zero();
};

inline Velocity3 follow_control(FollowController& controller, const Detection& detection, double dt) {
  return controller.update(detection, dt);
}

}  // namespace daas::analytics
