#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "daas/controlplane/service.hpp"
#include "daas/core/events.hpp"

namespace daas::cli {

struct OverheadStats {
  double median_ms = 0.0;
  double p95_ms = 0.0;
  std::size_t frames = 0;
};

struct MetricsReport {
  std::string scenario;
  std::string scheduler;
  std::string status;
  std::string end_reason;
  std::vector<std::string> visit_order;
  std::size_t waypoints_visited = 0;
  // Horizontal legs from the takeoff origin through each visited target.
  double tour_length = 0.0;
  // Flown distance over all telemetry samples.
  double total_path_length = 0.0;
  double horizontal_path_length = 0.0;
  double mission_duration = 0.0;
  std::size_t abort_count = 0;
  std::size_t preempt_count = 0;
  std::size_t commands_accepted = 0;
  std::size_t commands_rejected = 0;
  std::optional<OverheadStats> overhead;
};

MetricsReport compute_metrics(std::span<const MissionEvent> events);
void attach_overhead(MetricsReport& report, std::span<const navigation::OverheadSample> samples);

nlohmann::json to_json(const MetricsReport& r);
// One row per report: scheduler, visits, tour, flown, duration, order.
std::string format_table(std::span<const MetricsReport> reports);

}  // namespace daas::cli
