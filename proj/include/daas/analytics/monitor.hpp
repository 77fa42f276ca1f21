#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "daas/core/types.hpp"

namespace daas::analytics {

struct MonitorFlag {
  double sim_time = 0.0;
  std::string message;
};

// Down-sampled telemetry series. gps expands to gps_x/gps_y in the local
// frame; camera counts frames delivered to the monitor so far.
struct MetricSeries {
  std::vector<double> time;
  std::map<std::string, std::vector<double>> fields;
  std::vector<MonitorFlag> flags;
};

// Watches telemetry and reconciles the reported mission state with
// odometry: EnRoute with no progress for longer than `stuck_window` raises
// a flag.
class MonitoringAnalytics {
 public:
  explicit MonitoringAnalytics(std::vector<std::string> fields, double sample_period = 0.0,
                               double stuck_window = 5.0, double stuck_displacement = 0.05);

  // Returns a flag when one is raised by this sample.
  std::optional<MonitorFlag> observe(const TelemetryEvent& event);
  void observe_camera_frame() { ++camera_frames_; }

  const MetricSeries& series() const { return series_; }

 private:
  std::vector<std::string> fields_;
  double sample_period_;
  double stuck_window_;
  double stuck_displacement_;
  std::optional<double> next_sample_;
  double camera_frames_ = 0.0;

  std::optional<std::pair<double, Position3>> progress_anchor_;
  bool flagged_ = false;
  MetricSeries series_;
};

MetricSeries monitor(const std::vector<std::string>& fields, std::span<const TelemetryEvent> telemetry,
                     double sample_period = 0.0);

}  // namespace daas::analytics
