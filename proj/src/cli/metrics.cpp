#include "daas/cli/metrics.hpp"

#include <iomanip>
#include <sstream>

#include "daas/core/error.hpp"

namespace daas::cli {

MetricsReport compute_metrics(std::span<const MissionEvent> events) {
  MetricsReport r;
  Position3 origin = Position3::Zero();
  std::vector<Position3> targets;
  std::optional<Position3> last_pose;
  for (const auto& ev : events) {
    if (const auto* h = std::get_if<TraceHeader>(&ev)) {
      r.scenario = h->scenario;
      r.scheduler = h->scheduler;
      origin = h->takeoff_origin;
    } else if (const auto* t = std::get_if<TelemetryEvent>(&ev)) {
      if (last_pose) {
        r.total_path_length += euclidean_distance(*last_pose, t->pose);
        r.horizontal_path_length += horizontal_distance(*last_pose, t->pose);
      }
      last_pose = t->pose;
      r.mission_duration = t->sim_time;
    } else if (const auto* v = std::get_if<VisitEvent>(&ev)) {
      r.visit_order.push_back(v->id);
      targets.push_back(v->target);
    } else if (const auto* s = std::get_if<StatStreamEvent>(&ev)) {
      if (s->to_state == MissionState::Aborted) ++r.abort_count;
      if (s->to_state == MissionState::Preempted) ++r.preempt_count;
    } else if (const auto* c = std::get_if<CommandEvent>(&ev)) {
      ++(c->accepted ? r.commands_accepted : r.commands_rejected);
    } else if (const auto* e = std::get_if<EndEvent>(&ev)) {
      r.status = e->status;
      r.end_reason = e->reason;
    }
  }
  r.waypoints_visited = r.visit_order.size();
  if (!targets.empty()) {
    std::vector<Position3> tour;
    tour.reserve(targets.size() + 1);
    tour.push_back(origin);
    tour.insert(tour.end(), targets.begin(), targets.end());
    r.tour_length = horizontal_path_length(std::span<const Position3>(tour));
  }
  return r;
}

void attach_overhead(MetricsReport& report, std::span<const navigation::OverheadSample> samples) {
  try {
    const auto o = controlplane::overhead_report(samples);
    report.overhead = OverheadStats{o.median_ms, o.p95_ms, o.frames};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotReady) throw;
  }
}

nlohmann::json to_json(const MetricsReport& r) {
  nlohmann::json j{{"scenario", r.scenario},
                   {"scheduler", r.scheduler},
                   {"status", r.status},
                   {"end_reason", r.end_reason},
                   {"visit_order", r.visit_order},
                   {"waypoints_visited", r.waypoints_visited},
                   {"tour_length", r.tour_length},
                   {"total_path_length", r.total_path_length},
                   {"horizontal_path_length", r.horizontal_path_length},
                   {"mission_duration", r.mission_duration},
                   {"abort_count", r.abort_count},
                   {"preempt_count", r.preempt_count},
                   {"commands_accepted", r.commands_accepted},
                   {"commands_rejected", r.commands_rejected}};
  if (r.overhead) {
    j["overhead"] = {{"median_ms", r.overhead->median_ms},
                     {"p95_ms", r.overhead->p95_ms},
                     {"frames", r.overhead->frames}};
  } else {
    j["overhead"] = nullptr;
  }
  return j;
}

std::string format_table(std::span<const MetricsReport> reports) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(2);
  out << std::left << std::setw(20) << "scheduler" << std::right << std::setw(8) << "visits" << std::setw(12)
      << "tour_m" << std::setw(12) << "flown_m" << std::setw(12) << "duration_s" << "  order\n";
  for (const auto& r : reports) {
    std::string order;
    for (std::size_t i = 0; i < r.visit_order.size(); ++i) order += (i ? "," : "") + r.visit_order[i];
    out << std::left << std::setw(20) << r.scheduler << std::right << std::setw(8) << r.waypoints_visited
        << std::setw(12) << r.tour_length << std::setw(12) << r.total_path_length << std::setw(12)
        << r.mission_duration << "  " << order << "\n";
  }
  return out.str();
}

}  // namespace daas::cli
