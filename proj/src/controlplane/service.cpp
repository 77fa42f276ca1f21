#include "daas/controlplane/service.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "daas/core/error.hpp"
#include "daas/core/wire.hpp"

namespace daas::controlplane {

namespace {

double percentile(std::vector<double> values, double q) {
  std::sort(values.begin(), values.end());
  if (q == 0.5) {
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
  }
  const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(values.size())));
  return values[std::clamp<std::size_t>(rank, 1, values.size()) - 1];
}

}  // namespace

OverheadReport overhead_report(std::span<const OverheadSample> samples, std::size_t min_frames) {
  if (samples.size() < min_frames) {
    throw Error(ErrorCode::NotReady, "overhead report needs at least " + std::to_string(min_frames) +
                                         " frames, have " + std::to_string(samples.size()));
  }
  OverheadReport r;
  r.frames = samples.size();
  r.samples.assign(samples.begin(), samples.end());
  std::vector<double> overhead;
  overhead.reserve(samples.size());
  for (const auto& s : samples) overhead.push_back(std::max(0.0, s.overhead_ms()));
  r.median_ms = percentile(overhead, 0.5);
  r.p95_ms = percentile(overhead, 0.95);
  return r;
}

Json to_json(const MissionStateView& v) {
  Json j{{"mission_id", v.mission_id},
         {"status", navigation::to_string(v.status)},
         {"state", to_string(v.state)},
         {"sim_time", v.sim_time},
         {"pose", position_to_json(v.pose)},
         {"battery", v.battery},
         {"visited_waypoint_ids", v.visited}};
  if (!v.end_reason.empty()) j["end_reason"] = v.end_reason;
  return j;
}

Json to_json(const navigation::QueueSnapshot& q) {
  Json entries = Json::array();
  for (const auto& e : q.entries) entries.push_back(Json{{"id", e.id}, {"priority", e.priority}, {"position", e.position}});
  Json j{{"entries", entries}, {"size", q.entries.size()}};
  j["suspended"] = q.suspended ? Json(*q.suspended) : Json(nullptr);
  j["in_flight"] = q.in_flight ? Json(*q.in_flight) : Json(nullptr);
  return j;
}

Json to_json(const OverheadReport& r, bool with_samples) {
  Json j{{"median_ms", r.median_ms}, {"p95_ms", r.p95_ms}, {"frames", r.frames}};
  if (with_samples) {
    Json samples = Json::array();
    for (const auto& s : r.samples) {
      samples.push_back(Json{{"frame_time", s.frame_time},
                             {"task", s.task},
                             {"total_ms", s.total_ms},
                             {"inference_ms", s.inference_ms},
                             {"overhead_ms", std::max(0.0, s.overhead_ms())}});
    }
    j["samples"] = samples;
  }
  return j;
}

Json to_json(const CommandAck& a) {
  Json j{{"accepted", a.accepted}, {"applied_at", a.applied_at}, {"tick", a.tick}};
  if (!a.reason.empty()) j["reason"] = a.reason;
  return j;
}

// ---- EventLog ----

void EventLog::append(std::string line) {
  {
    std::lock_guard lock(mutex_);
    if (closed_) return;
    lines_.push_back(std::move(line));
  }
  cv_.notify_all();
}

void EventLog::close() {
  {
    std::lock_guard lock(mutex_);
    closed_ = true;
  }
  cv_.notify_all();
}

EventLog::Wait EventLog::wait_for(std::size_t index, std::chrono::milliseconds timeout) const {
  std::unique_lock lock(mutex_);
  const bool ready = cv_.wait_for(lock, timeout, [&] { return index < lines_.size() || closed_; });
  if (index < lines_.size()) return Wait::Ready;
  return ready ? Wait::Closed : Wait::Timeout;
}

std::string EventLog::at(std::size_t index) const {
  std::lock_guard lock(mutex_);
  return lines_.at(index);
}

std::size_t EventLog::size() const {
  std::lock_guard lock(mutex_);
  return lines_.size();
}

bool EventLog::closed() const {
  std::lock_guard lock(mutex_);
  return closed_;
}

std::vector<std::string> EventLog::lines() const {
  std::lock_guard lock(mutex_);
  return lines_;
}

std::optional<std::string> Subscription::next(std::chrono::milliseconds timeout) {
  if (ended_) return std::nullopt;
  switch (log_->wait_for(cursor_, timeout)) {
    case EventLog::Wait::Ready:
      return log_->at(cursor_++);
    case EventLog::Wait::Closed:
      ended_ = true;
      return std::nullopt;
    case EventLog::Wait::Timeout:
      return std::nullopt;
  }
  return std::nullopt;
}

// ---- MissionService ----

struct MissionService::Mission {
  std::string id;
  std::string scenario_name;
  navigation::Pacing pacing = navigation::Pacing::Max;
  double time_scale = 1.0;
  std::unique_ptr<navigation::MissionEngine> engine;
  std::shared_ptr<EventLog> log = std::make_shared<EventLog>();
  std::ofstream trace_file;
  std::thread thread;
  std::atomic<bool> stop{false};

  mutable std::mutex mutex;
  mutable std::condition_variable done_cv;
  navigation::MissionSnapshot snapshot;
  std::vector<OverheadSample> overhead;
  std::string end_reason;
  bool closed = false;
  // Acks applied during a tick, released once the snapshot reflects them.
  std::vector<std::pair<std::shared_ptr<std::promise<CommandAck>>, CommandAck>> applied;

  void release_acks() {
    for (auto& [promise, ack] : applied) promise->set_value(ack);
    applied.clear();
  }
};

MissionService::MissionService(ServiceOptions options) : options_(std::move(options)) {
  if (options_.trace_dir) std::filesystem::create_directories(*options_.trace_dir);
}

MissionService::~MissionService() { shutdown(); }

void MissionService::shutdown() {
  std::vector<std::shared_ptr<Mission>> all;
  {
    std::lock_guard lock(mutex_);
    for (auto& [id, m] : missions_) all.push_back(m);
  }
  for (auto& m : all) m->stop = true;
  for (auto& m : all) {
    if (m->thread.joinable()) m->thread.join();
  }
}

MissionHandle MissionService::start_mission(const nlohmann::json& scenario) {
  return start_mission(navigation::parse_scenario(scenario));
}

MissionHandle MissionService::start_mission(navigation::Scenario scenario) {
  auto m = std::make_shared<Mission>();
  {
    std::lock_guard lock(mutex_);
    m->id = "m" + std::to_string(next_id_++);
  }
  m->scenario_name = scenario.name;
  m->pacing = scenario.pacing;
  m->time_scale = scenario.time_scale;
  if (options_.trace_dir) {
    const auto path = *options_.trace_dir / (m->id + ".ndjson");
    m->trace_file.open(path, std::ios::binary | std::ios::trunc);
    if (!m->trace_file) throw Error(ErrorCode::Configuration, "cannot write trace file " + path.string());
  }

  Mission* raw = m.get();
  m->engine = std::make_unique<navigation::MissionEngine>(std::move(scenario), [raw](const MissionEvent& e) {
    std::string line = serialize_event(e);
    if (raw->trace_file.is_open()) raw->trace_file << line << '\n';
    if (const auto* end = std::get_if<EndEvent>(&e)) {
      std::lock_guard lock(raw->mutex);
      raw->end_reason = end->reason;
    }
    raw->log->append(std::move(line));
  });
  m->engine->start();
  m->snapshot = m->engine->snapshot();

  {
    std::lock_guard lock(mutex_);
    missions_.emplace(m->id, m);
  }
  MissionHandle handle{m->id, m->scenario_name, m->snapshot.status};
  m->thread = std::thread([raw] { run_loop(*raw); });
  return handle;
}

void MissionService::run_loop(Mission& m) {
  using Clock = std::chrono::steady_clock;
  const auto wall_start = Clock::now();
  std::size_t copied = 0;
  while (!m.stop) {
    if (m.pacing == navigation::Pacing::Realtime) {
      const auto due = wall_start + std::chrono::duration_cast<Clock::duration>(
                                        std::chrono::duration<double>(m.engine->sim_time() / m.time_scale));
      while (!m.stop && Clock::now() < due) {
        std::this_thread::sleep_until(std::min(due, Clock::now() + std::chrono::milliseconds(50)));
      }
      if (m.stop) break;
    }
    const bool more = m.engine->tick();
    {
      std::lock_guard lock(m.mutex);
      m.snapshot = m.engine->snapshot();
      const auto& samples = m.engine->overhead_samples();
      m.overhead.insert(m.overhead.end(), samples.begin() + static_cast<std::ptrdiff_t>(copied), samples.end());
      copied = samples.size();
    }
    m.release_acks();
    if (!more) break;
  }
  {
    std::lock_guard lock(m.mutex);
    m.engine->reject_pending("mission is terminal");
    m.closed = true;
  }
  m.release_acks();
  if (m.trace_file.is_open()) m.trace_file.close();
  m.log->close();
  m.done_cv.notify_all();
}

std::shared_ptr<MissionService::Mission> MissionService::find(const std::string& mission_id) const {
  std::lock_guard lock(mutex_);
  auto it = missions_.find(mission_id);
  if (it == missions_.end()) throw Error(ErrorCode::NotFound, "unknown mission '" + mission_id + "'");
  return it->second;
}

MissionHandle MissionService::handle(const std::string& mission_id) const {
  auto m = find(mission_id);
  std::lock_guard lock(m->mutex);
  return MissionHandle{m->id, m->scenario_name, m->snapshot.status};
}

std::vector<MissionHandle> MissionService::list() const {
  std::vector<std::shared_ptr<Mission>> all;
  {
    std::lock_guard lock(mutex_);
    for (const auto& [id, m] : missions_) all.push_back(m);
  }
  std::vector<MissionHandle> out;
  for (const auto& m : all) {
    std::lock_guard lock(m->mutex);
    out.push_back(MissionHandle{m->id, m->scenario_name, m->snapshot.status});
  }
  return out;
}

MissionStateView MissionService::get_state(const std::string& mission_id) const {
  auto m = find(mission_id);
  std::lock_guard lock(m->mutex);
  const auto& s = m->snapshot;
  return MissionStateView{m->id, s.status, s.state, s.sim_time, s.pose, s.battery, s.visited, m->end_reason};
}

navigation::QueueSnapshot MissionService::get_queue(const std::string& mission_id) const {
  auto m = find(mission_id);
  std::lock_guard lock(m->mutex);
  return m->snapshot.queue;
}

std::future<CommandAck> MissionService::submit_command(const std::string& mission_id, ControlCommand command) {
  auto m = find(mission_id);
  command.validate();
  auto promise = std::make_shared<std::promise<CommandAck>>();
  auto future = promise->get_future();
  std::lock_guard lock(m->mutex);
  if (m->closed || navigation::is_terminal(m->snapshot.status)) {
    promise->set_value(CommandAck{false, "mission is terminal", m->snapshot.sim_time, m->snapshot.tick});
    return future;
  }
  m->engine->submit(std::move(command), [m = m.get(), promise](const CommandAck& ack) {
    m->applied.emplace_back(promise, ack);
  });
  return future;
}

Subscription MissionService::stream_telemetry(const std::string& mission_id) const {
  return Subscription(find(mission_id)->log);
}

OverheadReport MissionService::overhead_report(const std::string& mission_id) const {
  auto m = find(mission_id);
  std::vector<OverheadSample> samples;
  {
    std::lock_guard lock(m->mutex);
    samples = m->overhead;
  }
  return controlplane::overhead_report(samples);
}

bool MissionService::wait(const std::string& mission_id, std::chrono::milliseconds timeout) const {
  auto m = find(mission_id);
  std::unique_lock lock(m->mutex);
  return m->done_cv.wait_for(lock, timeout, [&] { return m->closed; });
}

std::vector<std::string> MissionService::trace(const std::string& mission_id) const {
  return find(mission_id)->log->lines();
}

}  // namespace daas::controlplane
