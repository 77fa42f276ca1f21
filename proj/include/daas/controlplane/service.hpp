#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "daas/navigation/engine.hpp"
#include "daas/navigation/scenario.hpp"

namespace daas::controlplane {

using navigation::CommandAck;
using navigation::ControlCommand;
using navigation::MissionStatus;
using navigation::OverheadSample;

struct MissionHandle {
  std::string mission_id;
  std::string scenario;
  MissionStatus status = MissionStatus::Created;
};

struct MissionStateView {
  std::string mission_id;
  MissionStatus status = MissionStatus::Created;
  MissionState state = MissionState::Init;
  double sim_time = 0.0;
  Position3 pose = Position3::Zero();
  double battery = 100.0;
  std::vector<std::string> visited;
  std::string end_reason;
};

struct OverheadReport {
  double median_ms = 0.0;
  double p95_ms = 0.0;
  std::size_t frames = 0;
  std::vector<OverheadSample> samples;
};

inline constexpr std::size_t kMinOverheadFrames = 100;

// Throws Error{NotReady} below `min_frames` samples.
OverheadReport overhead_report(std::span<const OverheadSample> samples, std::size_t min_frames = kMinOverheadFrames);

nlohmann::json to_json(const MissionStateView& v);
nlohmann::json to_json(const navigation::QueueSnapshot& q);
nlohmann::json to_json(const OverheadReport& r, bool with_samples = true);
nlohmann::json to_json(const CommandAck& a);

// Append-only record of a mission's serialized events. Readers block on
// new lines; nothing is dropped, so late readers replay from the start.
class EventLog {
 public:
  enum class Wait : std::uint8_t { Ready, Timeout, Closed };

  void append(std::string line);
  void close();

  Wait wait_for(std::size_t index, std::chrono::milliseconds timeout) const;
  std::string at(std::size_t index) const;
  std::size_t size() const;
  bool closed() const;
  std::vector<std::string> lines() const;

 private:
  mutable std::mutex mutex_;
  mutable std::condition_variable cv_;
  std::vector<std::string> lines_;
  bool closed_ = false;
};

// Cursor over an EventLog. Each subscriber sees every line exactly once,
// in order.
class Subscription {
 public:
  explicit Subscription(std::shared_ptr<const EventLog> log) : log_(std::move(log)) {}

  // nullopt on timeout or end of stream; ended() tells them apart.
  std::optional<std::string> next(std::chrono::milliseconds timeout = std::chrono::hours(1));
  bool ended() const { return ended_; }
  std::size_t position() const { return cursor_; }

 private:
  std::shared_ptr<const EventLog> log_;
  std::size_t cursor_ = 0;
  bool ended_ = false;
};

struct ServiceOptions {
  // When set, each mission's trace is also written to <dir>/<mission_id>.ndjson.
  std::optional<std::filesystem::path> trace_dir;
};

// Runs missions on their own threads. Each mission's commands go through
// the engine's single inbox, so concurrent callers get one total order.
class MissionService {
 public:
  explicit MissionService(ServiceOptions options = {});
  ~MissionService();

  MissionService(const MissionService&) = delete;
  MissionService& operator=(const MissionService&) = delete;

  MissionHandle start_mission(navigation::Scenario scenario);
  // Throws Error{Schema} with the field path.
  MissionHandle start_mission(const nlohmann::json& scenario);

  MissionHandle handle(const std::string& mission_id) const;
  std::vector<MissionHandle> list() const;
  MissionStateView get_state(const std::string& mission_id) const;
  navigation::QueueSnapshot get_queue(const std::string& mission_id) const;

  // The future resolves once the command was applied at a tick boundary, or
  // immediately with a rejection when the mission is terminal.
  std::future<CommandAck> submit_command(const std::string& mission_id, ControlCommand command);

  Subscription stream_telemetry(const std::string& mission_id) const;
  OverheadReport overhead_report(const std::string& mission_id) const;

  // Blocks until the mission is terminal or the timeout passes.
  bool wait(const std::string& mission_id, std::chrono::milliseconds timeout = std::chrono::hours(24)) const;
  std::vector<std::string> trace(const std::string& mission_id) const;

  // Stops every mission loop and joins the threads.
  void shutdown();

 private:
  struct Mission;

  std::shared_ptr<Mission> find(const std::string& mission_id) const;
  static void run_loop(Mission& m);

  ServiceOptions options_;
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Mission>> missions_;
  std::uint64_t next_id_ = 1;
};

}  // namespace daas::controlplane
