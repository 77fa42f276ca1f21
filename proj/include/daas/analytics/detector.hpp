#pragma once

#include <optional>
#include <random>
#include <vector>

#include "daas/analytics/tasks.hpp"
#include "daas/sensing/sensors.hpp"

namespace daas::analytics {

// Synthetic detector over symbolic camera frames. Reports in-FOV targets of
// its class after the deployed resource's latency, with optional seeded
// miss-rate and bearing noise.
class Detector {
 public:
  Detector(AnalyticsTask task, std::uint64_t seed);

  void deploy(const ComputeResource& resource);
  bool deployed() const { return resource_.has_value(); }
  const ComputeResource& resource() const;
  const AnalyticsTask& task() const { return task_; }

  // Sim-seconds from inference start to visible result.
  double latency() const;

  // Throws Error{NotDeployed}. Frames skipped by the stride yield nothing.
  // `start` delays inference start (queueing on a busy resource).
  std::vector<Detection> analyse(const sensing::CameraFrame& frame, std::optional<double> start = std::nullopt);
  // Stride check without consuming randomness; true when the next frame
  // passed to analyse() will be processed.
  bool wants_next_frame() const { return frames_seen_ % static_cast<std::uint64_t>(task_.stride) == 0; }

 private:
  AnalyticsTask task_;
  std::optional<ComputeResource> resource_;
  std::mt19937_64 rng_;
  std::uint64_t frames_seen_ = 0;
};

inline std::vector<Detection> analyse(Detector& detector, const sensing::CameraFrame& frame) {
  return detector.analyse(frame);
}

// Stable 64-bit hash used to derive per-task seeds (FNV-1a).
std::uint64_t stable_hash(std::string_view s);

}  // namespace daas::analytics
