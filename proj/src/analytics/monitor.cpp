#include "daas/analytics/monitor.hpp"

#include <algorithm>
#include <sstream>

#include "daas/core/error.hpp"

namespace daas::analytics {

namespace {

const std::vector<std::string> kKnownFields = {"battery", "height", "gps", "camera"};

}  // namespace

MonitoringAnalytics::MonitoringAnalytics(std::vector<std::string> fields, double sample_period, double stuck_window,
                                         double stuck_displacement)
    : fields_(std::move(fields)),
      sample_period_(sample_period),
      stuck_window_(stuck_window),
      stuck_displacement_(stuck_displacement) {
  for (const auto& f : fields_) {
    if (std::find(kKnownFields.begin(), kKnownFields.end(), f) == kKnownFields.end()) {
      throw Error(ErrorCode::Configuration, "unknown monitor field '" + f + "'");
    }
    if (f == "gps") {
      series_.fields["gps_x"];
      series_.fields["gps_y"];
    } else {
      series_.fields[f];
    }
  }
  if (sample_period_ < 0.0) throw Error(ErrorCode::Configuration, "monitor sample period must be >= 0");
}

std::optional<MonitorFlag> MonitoringAnalytics::observe(const TelemetryEvent& event) {
  if (!next_sample_ || event.sim_time + 1e-9 >= *next_sample_) {
    series_.time.push_back(event.sim_time);
    for (const auto& f : fields_) {
      if (f == "battery") series_.fields["battery"].push_back(event.battery);
      if (f == "height") series_.fields["height"].push_back(event.pose.z());
      if (f == "camera") series_.fields["camera"].push_back(camera_frames_);
      if (f == "gps") {
        series_.fields["gps_x"].push_back(event.pose.x());
        series_.fields["gps_y"].push_back(event.pose.y());
      }
    }
    next_sample_ = next_sample_ ? *next_sample_ + sample_period_ : event.sim_time + sample_period_;
  }

  if (event.state != MissionState::EnRoute) {
    progress_anchor_.reset();
    flagged_ = false;
    return std::nullopt;
  }
  if (!progress_anchor_ || euclidean_distance(event.pose, progress_anchor_->second) > stuck_displacement_) {
    progress_anchor_ = {event.sim_time, event.pose};
    flagged_ = false;
    return std::nullopt;
  }
  if (!flagged_ && event.sim_time - progress_anchor_->first > stuck_window_) {
    flagged_ = true;
    std::ostringstream msg;
    msg << "state en_route but no odometry progress for " << (event.sim_time - progress_anchor_->first) << " s";
    MonitorFlag flag{event.sim_time, msg.str()};
    series_.flags.push_back(flag);
    return flag;
  }
  return std::nullopt;
}

MetricSeries monitor(const std::vector<std::string>& fields, std::span<const TelemetryEvent> telemetry,
                     double sample_period) {
  MonitoringAnalytics m(fields, sample_period);
  for (const auto& e : telemetry) m.observe(e);
  return m.series();
}

}  // namespace daas::analytics
