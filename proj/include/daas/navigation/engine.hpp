#pragma once

#include <chrono>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "daas/analytics/detector.hpp"
#include "daas/analytics/follow.hpp"
#include "daas/analytics/monitor.hpp"
#include "daas/analytics/placement.hpp"
#include "daas/core/events.hpp"
#include "daas/navigation/queue.hpp"
#include "daas/navigation/scenario.hpp"
#include "daas/navigation/scheduler.hpp"
#include "daas/sensing/sensors.hpp"
#include "daas/sensing/stat_stream.hpp"
#include "daas/sim/world.hpp"

namespace daas::navigation {

enum class MissionStatus : std::uint8_t { Created, Running, Completed, Faulted, Aborted };

std::string_view to_string(MissionStatus s);
bool is_terminal(MissionStatus s);

struct CommandAck {
  bool accepted = false;
  std::string reason;
  double applied_at = 0.0;  // sim seconds
  std::uint64_t tick = 0;
};

// Wall-clock cost of one camera frame through the analytics pipeline.
// Overhead is the total minus the time spent inside inference.
struct OverheadSample {
  double frame_time = 0.0;  // sim seconds
  std::string task;
  double total_ms = 0.0;
  double inference_ms = 0.0;

  double overhead_ms() const { return total_ms - inference_ms; }
};

// Snapshot of mission state that is safe to copy to other threads.
struct MissionSnapshot {
  MissionStatus status = MissionStatus::Created;
  MissionState state = MissionState::Init;
  double sim_time = 0.0;
  std::uint64_t tick = 0;
  Position3 pose = Position3::Zero();
  Velocity3 velocity = Velocity3::Zero();
  double battery = 100.0;
  std::vector<std::string> visited;
  QueueSnapshot queue;
};

// Runs one mission deterministically in fixed sim-time ticks. Each tick:
// commands, sensing and analytics, detections due, mission logic, physics,
// telemetry. All events go to the sink in emission order.
class MissionEngine {
 public:
  using EventSink = std::function<void(const MissionEvent&)>;
  using AckCallback = std::function<void(const CommandAck&)>;

  MissionEngine(Scenario scenario, EventSink sink);
  ~MissionEngine();

  MissionEngine(const MissionEngine&) = delete;
  MissionEngine& operator=(const MissionEngine&) = delete;

  // Plug-in seams. Must be called before start().
  void set_trajectory_scheduler(std::unique_ptr<TrajectoryScheduler> scheduler);
  void set_analytics_scheduler(std::unique_ptr<analytics::AnalyticsScheduler> scheduler);

  // Places analytics, emits the header and first telemetry, loads the
  // predefined batches and arms. Throws Error{Placement} or {Configuration}.
  void start();
  // Advances one tick. Returns false once the mission is terminal.
  bool tick();
  // start() then tick() until terminal.
  MissionStatus run();

  // Thread-safe. The command is applied at the start of the next tick.
  void submit(ControlCommand command, AckCallback on_applied = {});
  // Thread-safe. Rejects every command still waiting in the inbox.
  void reject_pending(const std::string& reason);

  bool finished() const { return is_terminal(status_); }
  MissionStatus status() const { return status_; }
  MissionState state() const { return fsm_.current(); }
  double sim_time() const { return world_.clock(); }
  const sim::SimWorld& world() const { return world_; }
  const WaypointQueue& queue() const { return queue_; }
  const std::vector<std::string>& visited() const { return visited_; }
  const analytics::Placement& placement() const { return placement_; }
  const std::vector<OverheadSample>& overhead_samples() const { return overhead_; }
  std::map<std::string, analytics::MetricSeries> monitor_series() const;
  const Scenario& scenario() const { return scenario_; }
  const TrajectoryScheduler& trajectory_scheduler() const { return *trajectory_scheduler_; }
  MissionSnapshot snapshot() const;

 private:
  using WallClock = std::chrono::steady_clock;

  enum class NavMode : std::uint8_t { Idle, Waypoint, Home };

  struct PendingCommand {
    ControlCommand command;
    AckCallback on_applied;
  };

  struct DetectorRuntime {
    analytics::Detector detector;
    std::vector<bool> fired;
    bool active = true;
  };

  struct FollowRuntime {
    analytics::AnalyticsTask task;
    analytics::FollowController controller;
    bool active = false;
    std::optional<double> last_update;
    double last_bearing = 0.0;
    bool ever_locked = false;
  };

  struct MonitorRuntime {
    analytics::AnalyticsTask task;
    analytics::MonitoringAnalytics monitor;
  };

  struct FrameTiming {
    WallClock::time_point available;
    WallClock::time_point inference_start;
    bool recorded = false;
  };

  struct PendingDetection {
    analytics::Detection detection;
    std::uint64_t order = 0;
    std::shared_ptr<FrameTiming> timing;
  };

  void emit(const MissionEvent& event);
  void transition(sensing::MissionEventKind event, const std::string& detail = {});
  void emit_queue(const std::string& op, std::vector<std::string> ids, int priority);
  void notice(const std::string& kind, const std::string& message);
  void emit_telemetry();

  void drain_commands();
  CommandAck apply(const ControlCommand& command);
  void add_batch(const NavigationBatch& batch, const std::string& source);

  void on_camera_frame(const std::string& sensor_id, const sensing::CameraFrame& frame);
  void deliver_detections();
  void handle_detection(const PendingDetection& pending);
  void fire_action(const analytics::TriggerAction& action, const analytics::Detection& detection,
                   const std::string& source);
  void record_overhead(const PendingDetection& pending, WallClock::time_point dequeued);
  void hold_position();
  void launch_task(const std::string& task_id);

  void run_logic();
  bool step_logic();
  FollowRuntime* locked_follow();
  bool try_track();
  bool dispatch_next();
  void dispatch(const QueuedWaypoint& wp);
  void go_home();
  bool should_wait() const;
  void land(const std::string& reason);
  void abort_navigation(const std::string& reason);
  void finish(MissionStatus status, const std::string& reason);
  void handle_step(const sim::StepEvents& events);

  Scenario scenario_;
  EventSink sink_;
  sim::SimWorld world_;
  sensing::StatStream fsm_;
  sensing::SensorHub hub_;
  WaypointQueue queue_;
  std::unique_ptr<TrajectoryScheduler> trajectory_scheduler_;
  std::unique_ptr<analytics::AnalyticsScheduler> analytics_scheduler_;
  analytics::Placement placement_;
  std::optional<analytics::ComputePool> pool_;

  std::map<std::string, DetectorRuntime> detectors_;
  std::map<std::string, FollowRuntime> follows_;
  std::map<std::string, MonitorRuntime> monitors_;
  std::vector<std::string> task_order_;

  std::multimap<std::pair<double, std::uint64_t>, PendingDetection> pending_detections_;
  std::uint64_t detection_order_ = 0;
  std::vector<OverheadSample> overhead_;

  mutable std::mutex inbox_mutex_;
  std::deque<PendingCommand> inbox_;
  std::vector<std::pair<std::uint64_t, ControlCommand>> scripted_;  // (tick, command), tick order
  std::size_t next_scripted_ = 0;
  std::uint64_t command_seq_ = 0;

  MissionStatus status_ = MissionStatus::Created;
  NavMode mode_ = NavMode::Idle;
  std::optional<double> hover_started_;
  bool home_done_ = false;
  bool abort_requested_ = false;
  bool landing_for_limit_ = false;
  std::vector<std::string> visited_;
};

}  // namespace daas::navigation
