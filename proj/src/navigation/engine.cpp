#include "daas/navigation/engine.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <sstream>

#include "daas/core/error.hpp"

namespace daas::navigation {

using analytics::ActionKind;
using analytics::TaskKind;
using sensing::MissionEventKind;

namespace {

constexpr double kTimeEps = 1e-9;
constexpr double kSettleEps = 1e-6;

double ms_between(std::chrono::steady_clock::time_point a, std::chrono::steady_clock::time_point b) {
  return std::chrono::duration<double, std::milli>(b - a).count();
}

}  // namespace

std::string_view to_string(MissionStatus s) {
  switch (s) {
    case MissionStatus::Created: return "created";
    case MissionStatus::Running: return "running";
    case MissionStatus::Completed: return "completed";
    case MissionStatus::Faulted: return "faulted";
    case MissionStatus::Aborted: return "aborted";
  }
  return "unknown";
}

bool is_terminal(MissionStatus s) {
  return s == MissionStatus::Completed || s == MissionStatus::Faulted || s == MissionStatus::Aborted;
}

MissionEngine::MissionEngine(Scenario scenario, EventSink sink)
    : scenario_(std::move(scenario)),
      sink_(std::move(sink)),
      world_(scenario_.drone, scenario_.dt, scenario_.seed, scenario_.takeoff_origin, scenario_.targets),
      fsm_(scenario_.transition_table ? *scenario_.transition_table : sensing::TransitionTable::standard()) {
  scenario_.validate();
  trajectory_scheduler_ = SchedulerRegistry::instance().create(scenario_.scheduler);
  analytics_scheduler_ = std::make_unique<analytics::PolicyScheduler>(scenario_.placement);
  for (const auto& d : scenario_.sensors) hub_.add_sensor(d);
  for (const auto& sc : scenario_.commands) {
    const auto tick = static_cast<std::uint64_t>(std::ceil(sc.at / scenario_.dt - kTimeEps));
    scripted_.emplace_back(tick, sc.command);
  }
  std::stable_sort(scripted_.begin(), scripted_.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
}

MissionEngine::~MissionEngine() = default;

void MissionEngine::set_trajectory_scheduler(std::unique_ptr<TrajectoryScheduler> scheduler) {
  if (status_ != MissionStatus::Created) throw Error(ErrorCode::Rejected, "scheduler must be set before start");
  if (!scheduler) throw Error(ErrorCode::Validation, "scheduler must not be null");
  trajectory_scheduler_ = std::move(scheduler);
}

void MissionEngine::set_analytics_scheduler(std::unique_ptr<analytics::AnalyticsScheduler> scheduler) {
  if (status_ != MissionStatus::Created) throw Error(ErrorCode::Rejected, "scheduler must be set before start");
  if (!scheduler) throw Error(ErrorCode::Validation, "scheduler must not be null");
  analytics_scheduler_ = std::move(scheduler);
}

void MissionEngine::start() {
  if (status_ != MissionStatus::Created) throw Error(ErrorCode::Rejected, "mission already started");

  std::vector<analytics::AnalyticsTask> free_tasks;
  for (const auto& t : scenario_.analytics) {
    if (!scenario_.deploy.contains(t.id)) free_tasks.push_back(t);
  }
  analytics::Placement chosen;
  if (!free_tasks.empty()) chosen = analytics_scheduler_->place(free_tasks, scenario_.compute);
  std::map<std::string, std::string> resource_of(chosen.begin(), chosen.end());
  for (const auto& [task, res] : scenario_.deploy) resource_of[task] = res;

  auto find_resource = [&](const std::string& id) -> const analytics::ComputeResource& {
    for (const auto& r : scenario_.compute) {
      if (r.id == id) return r;
    }
    throw Error(ErrorCode::Placement, "unknown compute resource '" + id + "'");
  };

  pool_.emplace(scenario_.compute);
  for (const auto& t : scenario_.analytics) {
    const auto it = resource_of.find(t.id);
    if (it == resource_of.end()) throw Error(ErrorCode::Placement, "task '" + t.id + "' was not placed");
    placement_.emplace_back(t.id, it->second);
    task_order_.push_back(t.id);
    switch (t.kind) {
      case TaskKind::Detector:
      case TaskKind::Remote: {
        DetectorRuntime rt{analytics::Detector(t, scenario_.seed), std::vector<bool>(t.triggers.size(), false),
                           t.active};
        rt.detector.deploy(find_resource(it->second));
        detectors_.emplace(t.id, std::move(rt));
        break;
      }
      case TaskKind::FollowController: {
        analytics::FollowConfig cfg = t.follow;
        cfg.max_horizontal_speed = scenario_.drone.max_horizontal_speed;
        cfg.max_vertical_speed = scenario_.drone.max_vertical_speed;
        follows_.emplace(t.id, FollowRuntime{t, analytics::FollowController(cfg), t.active, std::nullopt, 0.0, false});
        break;
      }
      case TaskKind::Monitor: {
        double period = 0.0;
        if (!t.input.empty()) period = 1.0 / hub_.descriptor(t.input).rate;
        monitors_.emplace(t.id, MonitorRuntime{t, analytics::MonitoringAnalytics(t.fields, period)});
        break;
      }
    }
  }

  for (const auto& d : scenario_.sensors) {
    if (d.kind != sensing::SensorKind::Camera) continue;
    const std::string id = d.id;
    hub_.get_data_stream(id, sensing::DeliveryMode::Push, [this, id](const sensing::SensorSample& s) {
      on_camera_frame(id, std::get<sensing::CameraFrame>(s));
    });
  }

  TraceHeader header;
  header.scenario = scenario_.name;
  header.pattern = std::string(to_string(scenario_.pattern));
  header.scheduler = trajectory_scheduler_->name();
  header.seed = scenario_.seed;
  header.dt = scenario_.dt;
  header.max_horizontal_speed = scenario_.drone.max_horizontal_speed;
  header.max_vertical_speed = scenario_.drone.max_vertical_speed;
  header.arrival_epsilon = scenario_.drone.arrival_epsilon;
  header.takeoff_origin = scenario_.takeoff_origin;
  emit(header);

  status_ = MissionStatus::Running;
  for (const auto& batch : scenario_.batches) add_batch(batch, "predefined");

  transition(MissionEventKind::Arm);
  world_.arm();
  transition(MissionEventKind::Takeoff);
  world_.takeoff(scenario_.takeoff_origin.z() + scenario_.drone.takeoff_altitude);
  emit_telemetry();
}

bool MissionEngine::tick() {
  if (status_ == MissionStatus::Created) start();
  if (finished()) return false;
  try {
    drain_commands();
    if (finished()) return false;

    hub_.sample(world_);
    deliver_detections();

    const double now = world_.clock();
    for (auto& [id, f] : follows_) {
      if (!f.active || !f.controller.check_loss(now)) continue;
      f.last_update.reset();
      notice("track_lost", "task " + id + " lost " + f.task.follow_target);
      if (state() == MissionState::Tracking && locked_follow() == nullptr) {
        hold_position();
        transition(MissionEventKind::TrackLost, id);
      }
    }

    run_logic();
    if (finished()) return false;

    handle_step(world_.step(scenario_.dt));
    emit_telemetry();

    const double t = world_.clock();
    if (state() == MissionState::Landed) {
      finish(abort_requested_ ? MissionStatus::Aborted : MissionStatus::Completed,
             landing_for_limit_ ? "duration_limit" : "landed");
      return false;
    }
    if (!landing_for_limit_ && t + kTimeEps >= scenario_.duration_limit) {
      landing_for_limit_ = true;
      notice("duration_limit", "mission duration limit reached");
      land("duration_limit");
    }
    if (t + kTimeEps >= scenario_.duration_limit + scenario_.landing_grace) {
      finish(MissionStatus::Faulted, "landing did not complete within the grace period");
    }
  } catch (const Error& e) {
    finish(MissionStatus::Faulted, std::string(to_string(e.code())) + ": " + e.what());
  }
  return !finished();
}

MissionStatus MissionEngine::run() {
  if (status_ == MissionStatus::Created) start();
  while (tick()) {
  }
  return status_;
}

void MissionEngine::submit(ControlCommand command, AckCallback on_applied) {
  std::lock_guard lock(inbox_mutex_);
  inbox_.push_back(PendingCommand{std::move(command), std::move(on_applied)});
}

void MissionEngine::reject_pending(const std::string& reason) {
  std::deque<PendingCommand> dropped;
  {
    std::lock_guard lock(inbox_mutex_);
    dropped.swap(inbox_);
  }
  for (auto& pc : dropped) {
    if (pc.on_applied) pc.on_applied(CommandAck{false, reason, world_.clock(), world_.tick()});
  }
}

std::map<std::string, analytics::MetricSeries> MissionEngine::monitor_series() const {
  std::map<std::string, analytics::MetricSeries> out;
  for (const auto& [id, m] : monitors_) out.emplace(id, m.monitor.series());
  return out;
}

MissionSnapshot MissionEngine::snapshot() const {
  MissionSnapshot s;
  s.status = status_;
  s.state = fsm_.current();
  s.sim_time = world_.clock();
  s.tick = world_.tick();
  s.pose = world_.pose();
  s.velocity = world_.velocity();
  s.battery = world_.battery();
  s.visited = visited_;
  s.queue = queue_.snapshot();
  return s;
}

// ---- events ----

void MissionEngine::emit(const MissionEvent& event) {
  if (sink_) sink_(event);
}

void MissionEngine::transition(MissionEventKind event, const std::string& detail) {
  const StatStreamEvent e = fsm_.apply(event, world_.clock(), detail);
  hub_.publish_state(e);
  emit(e);
}

void MissionEngine::emit_queue(const std::string& op, std::vector<std::string> ids, int priority) {
  emit(QueueEvent{world_.clock(), op, std::move(ids), priority, queue_.size()});
}

void MissionEngine::notice(const std::string& kind, const std::string& message) {
  emit(NoticeEvent{world_.clock(), kind, message});
}

void MissionEngine::emit_telemetry() {
  TelemetryEvent e;
  e.sim_time = world_.clock();
  e.pose = world_.pose();
  e.velocity = world_.velocity();
  e.battery = world_.battery();
  e.state = fsm_.current();
  e.visited_waypoint_ids = visited_;
  emit(e);
  for (auto& [id, m] : monitors_) {
    if (auto flag = m.monitor.observe(e)) notice("monitor_flag", id + ": " + flag->message);
  }
}

void MissionEngine::finish(MissionStatus status, const std::string& reason) {
  if (finished()) return;
  status_ = status;
  emit(EndEvent{world_.clock(), std::string(to_string(status)), reason});
}

// ---- commands ----

void MissionEngine::drain_commands() {
  std::vector<PendingCommand> batch;
  while (next_scripted_ < scripted_.size() && scripted_[next_scripted_].first <= world_.tick()) {
    batch.push_back(PendingCommand{scripted_[next_scripted_].second, {}});
    ++next_scripted_;
  }
  {
    std::lock_guard lock(inbox_mutex_);
    while (!inbox_.empty()) {
      batch.push_back(std::move(inbox_.front()));
      inbox_.pop_front();
    }
  }
  for (auto& pc : batch) {
    const CommandAck ack = apply(pc.command);
    emit(CommandEvent{world_.clock(), world_.tick(), ++command_seq_, std::string(to_string(pc.command.kind)),
                      ack.accepted, ack.reason, pc.command.payload});
    if (!ack.accepted) notice("command_rejected", std::string(to_string(pc.command.kind)) + ": " + ack.reason);
    if (pc.on_applied) pc.on_applied(ack);
  }
}

CommandAck MissionEngine::apply(const ControlCommand& command) {
  CommandAck ack{false, {}, world_.clock(), world_.tick()};
  try {
    command.validate();
    if (finished()) throw Error(ErrorCode::Rejected, "mission is terminal");
    const MissionState s = state();
    switch (command.kind) {
      case CommandKind::InjectBatch:
        add_batch(*command.payload, "command");
        break;
      case CommandKind::Pause:
        if (!fsm_.accepts(MissionEventKind::Pause)) {
          throw Error(ErrorCode::Rejected, "cannot pause in state " + std::string(to_string(s)));
        }
        hold_position();
        transition(MissionEventKind::Pause, "operator");
        break;
      case CommandKind::Resume:
        if (s != MissionState::Paused) throw Error(ErrorCode::Rejected, "mission is not paused");
        transition(MissionEventKind::Resume, "operator");
        break;
      case CommandKind::Abort: {
        if (s == MissionState::Landed) throw Error(ErrorCode::Rejected, "mission already landed");
        abort_requested_ = true;
        auto ids = queue_.clear();
        if (!ids.empty()) emit_queue("clear", std::move(ids), 0);
        for (auto& [id, f] : follows_) f.active = false;
        mode_ = NavMode::Idle;
        hover_started_.reset();
        if (s == MissionState::Init || s == MissionState::Armed) {
          transition(MissionEventKind::Abort, "operator");
          transition(MissionEventKind::Touchdown, "operator");
          finish(MissionStatus::Aborted, "operator_abort");
        } else if (s != MissionState::Landing) {
          if (fsm_.accepts(MissionEventKind::Abort)) transition(MissionEventKind::Abort, "operator");
          land("operator_abort");
        }
        break;
      }
    }
    ack.accepted = true;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::IllegalTransition) throw;
    ack.reason = e.what();
  }
  return ack;
}

void MissionEngine::add_batch(const NavigationBatch& batch, const std::string& source) {
  if (source != "predefined" && scenario_.pattern == MissionPattern::StaticPredefined) {
    throw Error(ErrorCode::Rejected, "static_predefined missions accept no insertions");
  }
  if (finished()) throw Error(ErrorCode::Rejected, "mission is terminal");
  const MissionState s = state();
  if (s == MissionState::Landing || s == MissionState::Landed) throw Error(ErrorCode::Rejected, "mission is landing");
  if (abort_requested_) throw Error(ErrorCode::Rejected, "mission was aborted");
  daas::validate(batch);

  NavigationBatch absolute = batch;
  for (auto& wp : absolute.waypoints) {
    wp = resolved(wp, scenario_.takeoff_origin);
    if (std::find(visited_.begin(), visited_.end(), wp.id) != visited_.end()) {
      throw Error(ErrorCode::DuplicateId, "waypoint id '" + wp.id + "' was already visited");
    }
  }

  Position3 anchor = world_.pose();
  for (const auto& q : queue_.pending()) {
    if (q.priority == batch.priority) anchor = q.waypoint.target;
  }
  absolute.waypoints = generate_navigation(absolute, anchor, *trajectory_scheduler_);

  const bool can_preempt =
      s == MissionState::EnRoute || s == MissionState::WaypointHover || s == MissionState::Paused;
  const AddResult result = queue_.add(absolute, can_preempt);
  home_done_ = false;

  std::vector<std::string> ids;
  for (const auto& wp : absolute.waypoints) ids.push_back(wp.id);
  emit_queue("add", std::move(ids), batch.priority);

  if (result.preempted) {
    emit_queue("preempt", {result.preempted->waypoint.id}, result.preempted->priority);
    if (s == MissionState::EnRoute || s == MissionState::WaypointHover) {
      hold_position();
      mode_ = NavMode::Idle;
      hover_started_.reset();
      transition(MissionEventKind::Preempt, source);
    }
  }
}

// ---- analytics ----

void MissionEngine::hold_position() {
  if (world_.phase() == sim::FlightPhase::Climbing || world_.phase() == sim::FlightPhase::Flying) world_.hold();
}

void MissionEngine::on_camera_frame(const std::string& sensor_id, const sensing::CameraFrame& frame) {
  const auto available = WallClock::now();
  for (auto& [id, m] : monitors_) {
    if (m.task.input.empty() || m.task.input == sensor_id) m.monitor.observe_camera_frame();
  }
  for (const auto& task_id : task_order_) {
    auto it = detectors_.find(task_id);
    if (it == detectors_.end()) continue;
    auto& rt = it->second;
    if (!rt.active || rt.detector.task().input != sensor_id) continue;
    if (!rt.detector.wants_next_frame()) {
      rt.detector.analyse(frame);
      continue;
    }
    const auto& task = rt.detector.task();
    const double occupancy = rt.detector.resource().inference_for(task.kind) + task.per_inference_cost;
    const double start = pool_->reserve(rt.detector.resource().id, frame.sim_time, occupancy);
    auto timing = std::make_shared<FrameTiming>();
    timing->available = available;
    timing->inference_start = WallClock::now();
    for (auto& d : rt.detector.analyse(frame, start)) {
      const auto key = std::make_pair(d.emit_time, detection_order_);
      pending_detections_.emplace(key, PendingDetection{std::move(d), detection_order_, timing});
      ++detection_order_;
    }
  }
}

void MissionEngine::deliver_detections() {
  const double now = world_.clock();
  while (!pending_detections_.empty() && pending_detections_.begin()->first.first <= now + kTimeEps) {
    auto node = pending_detections_.extract(pending_detections_.begin());
    const auto& d = node.mapped().detection;
    emit(DetectionEvent{d.frame_time, d.emit_time, d.task_id, d.target_id, d.bearing, d.range, d.confidence});
    handle_detection(node.mapped());
    if (finished()) return;
  }
}

void MissionEngine::handle_detection(const PendingDetection& pending) {
  const auto dequeued = WallClock::now();
  const auto& d = pending.detection;
  bool commanded = false;

  auto dit = detectors_.find(d.task_id);
  if (dit != detectors_.end() && dit->second.active) {
    auto& rt = dit->second;
    const auto& triggers = rt.detector.task().triggers;
    for (std::size_t i = 0; i < triggers.size(); ++i) {
      if (triggers[i].when.once && rt.fired[i]) continue;
      if (!triggers[i].when.matches(d)) continue;
      rt.fired[i] = true;
      notice("trigger", d.task_id + " fired on " + d.target_id);
      for (const auto& action : triggers[i].actions) fire_action(action, d, d.task_id);
      commanded = true;
    }
  }

  for (auto& [id, f] : follows_) {
    if (!f.active || f.task.input != d.task_id || f.task.follow_target != d.target_id) continue;
    const double dt = f.last_update ? std::max(d.frame_time - *f.last_update, 1e-3) : scenario_.dt;
    f.last_update = d.frame_time;
    f.last_bearing = d.bearing;
    const Velocity3 cmd = f.controller.update(d, dt);
    if (state() == MissionState::Tracking && locked_follow() == &f) {
      world_.command_velocity(cmd, d.bearing);
      commanded = true;
    }
  }

  if (commanded) record_overhead(pending, dequeued);
}

void MissionEngine::record_overhead(const PendingDetection& pending, WallClock::time_point dequeued) {
  auto& timing = *pending.timing;
  if (timing.recorded) return;
  timing.recorded = true;
  const auto done = WallClock::now();
  OverheadSample s;
  s.frame_time = pending.detection.frame_time;
  s.task = pending.detection.task_id;
  s.total_ms = ms_between(timing.available, done);
  s.inference_ms = ms_between(timing.inference_start, dequeued);
  overhead_.push_back(std::move(s));
}

void MissionEngine::fire_action(const analytics::TriggerAction& action, const analytics::Detection& detection,
                                const std::string& source) {
  switch (action.kind) {
    case ActionKind::ClearNavigation:
      abort_navigation(source);
      break;
    case ActionKind::SubmitBatch:
      try {
        add_batch(analytics::batch_for(action, detection), "analytics:" + source);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::IllegalTransition) throw;
        notice("batch_rejected", source + ": " + e.what());
      }
      break;
    case ActionKind::LaunchTask:
      launch_task(action.task);
      break;
    case ActionKind::Land:
      land("analytics:" + source);
      break;
  }
}

void MissionEngine::launch_task(const std::string& task_id) {
  if (auto it = detectors_.find(task_id); it != detectors_.end()) {
    it->second.active = true;
  } else if (auto fit = follows_.find(task_id); fit != follows_.end()) {
    fit->second.active = true;
  } else {
    notice("launch_ignored", "task " + task_id + " cannot be launched");
    return;
  }
  notice("task_launched", task_id);
}

void MissionEngine::abort_navigation(const std::string& reason) {
  auto ids = queue_.clear();
  emit_queue("clear", std::move(ids), 0);
  mode_ = NavMode::Idle;
  hover_started_.reset();
  const MissionState s = state();
  if (s == MissionState::Landing || s == MissionState::Landed || s == MissionState::Aborted) return;
  if (fsm_.accepts(MissionEventKind::Abort)) {
    hold_position();
    transition(MissionEventKind::Abort, reason);
  }
}

// ---- mission logic ----

MissionEngine::FollowRuntime* MissionEngine::locked_follow() {
  for (auto& [id, f] : follows_) {
    if (f.active && f.controller.tracking()) return &f;
  }
  return nullptr;
}

bool MissionEngine::try_track() {
  FollowRuntime* f = locked_follow();
  if (!f) return false;
  if (auto top = queue_.top_priority(); top && *top < f->task.priority) {
    return false;
  }
  if (!fsm_.accepts(MissionEventKind::TrackAcquired)) return false;
  mode_ = NavMode::Idle;
  f->ever_locked = true;
  transition(MissionEventKind::TrackAcquired, f->task.id);
  world_.command_velocity(f->controller.last_command(), f->last_bearing);
  return true;
}

bool MissionEngine::dispatch_next() {
  auto next = queue_.pop();
  if (!next) return false;
  dispatch(*next);
  return true;
}

void MissionEngine::dispatch(const QueuedWaypoint& wp) {
  world_.command_goto(wp.waypoint.target);
  mode_ = NavMode::Waypoint;
  hover_started_.reset();
  emit_queue("dispatch", {wp.waypoint.id}, wp.priority);
  transition(MissionEventKind::WaypointDispatched, wp.waypoint.id);
  if (wp.waypoint.deadline && world_.clock() > *wp.waypoint.deadline + kTimeEps) {
    std::ostringstream msg;
    msg << wp.waypoint.id << " dispatched after its deadline " << *wp.waypoint.deadline << " s";
    notice("deadline_missed", msg.str());
  }
}

void MissionEngine::go_home() {
  const Position3 home(scenario_.takeoff_origin.x(), scenario_.takeoff_origin.y(), world_.pose().z());
  world_.command_goto(home);
  mode_ = NavMode::Home;
  hover_started_.reset();
  transition(MissionEventKind::WaypointDispatched, "return_home");
}

bool MissionEngine::should_wait() const {
  if (scenario_.on_idle == IdleBehavior::Hover) return true;
  if (scenario_.pattern == MissionPattern::SensorDriven) return true;
  if (next_scripted_ < scripted_.size()) return true;
  if (!pending_detections_.empty()) return true;
  // A follow task that has not locked on yet may still produce work.
  for (const auto& [id, f] : follows_) {
    if (f.active && !f.ever_locked) return true;
  }
  return false;
}

void MissionEngine::land(const std::string& reason) {
  const MissionState s = state();
  if (s == MissionState::Landing || s == MissionState::Landed) return;
  if (!fsm_.accepts(MissionEventKind::LandCommand)) return;
  mode_ = NavMode::Idle;
  hover_started_.reset();
  transition(MissionEventKind::LandCommand, reason);
  if (world_.phase() == sim::FlightPhase::Climbing || world_.phase() == sim::FlightPhase::Flying) world_.land();
}

void MissionEngine::run_logic() {
  for (int guard = 0; guard < 8 && !finished(); ++guard) {
    if (!step_logic()) return;
  }
}

bool MissionEngine::step_logic() {
  const MissionState s = state();
  const double now = world_.clock();
  switch (s) {
    case MissionState::Hover:
    case MissionState::Preempted:
    case MissionState::Resuming:
    case MissionState::Aborted: {
      if (s == MissionState::Resuming && mode_ == NavMode::Waypoint && queue_.in_flight()) {
        dispatch(*queue_.in_flight());
        return true;
      }
      if (s == MissionState::Resuming && mode_ == NavMode::Home) {
        go_home();
        return true;
      }
      if (try_track()) return true;
      if (dispatch_next()) return true;
      if (s == MissionState::Resuming) {
        mode_ = NavMode::Idle;
        transition(MissionEventKind::HoverElapsed, "idle");
        return true;
      }
      if (should_wait()) return false;
      if (scenario_.return_home && !home_done_ && s != MissionState::Aborted &&
          horizontal_distance(world_.pose(), scenario_.takeoff_origin) > scenario_.drone.arrival_epsilon) {
        go_home();
        return true;
      }
      land(s == MissionState::Aborted ? "abort_complete" : "mission_complete");
      return state() != s;
    }
    case MissionState::EnRoute:
    case MissionState::WaypointHover: {
      if (FollowRuntime* f = locked_follow()) {
        const int current = queue_.in_flight() ? queue_.in_flight()->priority : INT_MAX;
        if (f->task.priority < current) {
          if (auto w = queue_.suspend_in_flight()) emit_queue("preempt", {w->waypoint.id}, w->priority);
          hold_position();
          mode_ = NavMode::Idle;
          hover_started_.reset();
          transition(MissionEventKind::Preempt, f->task.id);
          return true;
        }
      }
      if (s != MissionState::WaypointHover) return false;
      const bool settled = euclidean_distance(world_.pose(), world_.setpoint()) < kSettleEps;
      if (!settled) return false;
      if (!hover_started_) hover_started_ = now;
      const double duration =
          mode_ == NavMode::Waypoint && queue_.in_flight() ? queue_.in_flight()->waypoint.hover_duration : 0.0;
      if (now - *hover_started_ + kTimeEps < duration) return false;

      std::string label = "home";
      if (mode_ == NavMode::Waypoint && queue_.in_flight()) {
        const auto wp = *queue_.in_flight();
        label = wp.waypoint.id;
        emit(VisitEvent{now, wp.waypoint.id, wp.waypoint.target, world_.pose()});
        visited_.push_back(wp.waypoint.id);
        queue_.complete_in_flight();
        emit_queue("complete", {wp.waypoint.id}, wp.priority);
      } else {
        home_done_ = true;
      }
      mode_ = NavMode::Idle;
      hover_started_.reset();
      transition(MissionEventKind::HoverElapsed, label);
      return true;
    }
    default:
      return false;
  }
}

void MissionEngine::handle_step(const sim::StepEvents& events) {
  if (events.takeoff_complete && state() == MissionState::TakingOff) transition(MissionEventKind::TakeoffComplete);
  if (events.arrived && state() == MissionState::EnRoute) {
    std::string label = "home";
    if (mode_ == NavMode::Waypoint && queue_.in_flight()) label = queue_.in_flight()->waypoint.id;
    hover_started_.reset();
    transition(MissionEventKind::Arrival, label);
  }
  if (events.forced_landing) {
    notice("forced_landing", "battery depleted");
    mode_ = NavMode::Idle;
    const MissionState s = state();
    if (s != MissionState::Landing && s != MissionState::Landed) {
      transition(MissionEventKind::LandCommand, "battery_depleted");
    }
  }
  if (events.touchdown) transition(MissionEventKind::Touchdown);
}

}  // namespace daas::navigation
