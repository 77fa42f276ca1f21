#include "daas/analytics/detector.hpp"

#include <algorithm>

#include "daas/core/error.hpp"

namespace daas::analytics {

std::uint64_t stable_hash(std::string_view s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

Detector::Detector(AnalyticsTask task, std::uint64_t seed)
    : task_(std::move(task)), rng_(seed ^ stable_hash(task_.id)) {
  task_.validate();
  if (task_.kind != TaskKind::Detector && task_.kind != TaskKind::Remote) {
    throw Error(ErrorCode::Configuration, "task '" + task_.id + "' is not a detector");
  }
}

void Detector::deploy(const ComputeResource& resource) {
  resource.validate();
  resource_ = resource;
}

const ComputeResource& Detector::resource() const {
  if (!resource_) throw Error(ErrorCode::NotDeployed, "task '" + task_.id + "' is not deployed");
  return *resource_;
}

double Detector::latency() const { return resource().total_latency(task_.kind) + task_.per_inference_cost; }

std::vector<Detection> Detector::analyse(const sensing::CameraFrame& frame, std::optional<double> start) {
  if (!resource_) throw Error(ErrorCode::NotDeployed, "task '" + task_.id + "' is not deployed");
  const bool process = wants_next_frame();
  ++frames_seen_;
  std::vector<Detection> out;
  if (!process) return out;

  const double emit_time = std::max(frame.sim_time, start.value_or(frame.sim_time)) + latency();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (const auto& obs : frame.observations) {
    if (!obs.in_fov) continue;
    if (!task_.targets.empty() &&
        std::find(task_.targets.begin(), task_.targets.end(), obs.target_id) == task_.targets.end()) {
      continue;
    }
    if (task_.miss_rate > 0.0 && unit(rng_) < task_.miss_rate) continue;
    Detection d;
    d.frame_time = frame.sim_time;
    d.emit_time = emit_time;
    d.frame_seq = frame.frame_seq;
    d.task_id = task_.id;
    d.target_id = obs.target_id;
    d.bearing = obs.bearing;
    if (task_.bearing_noise > 0.0) d.bearing = wrap_angle(d.bearing + task_.bearing_noise * noise(rng_));
    d.range = obs.range;
    // Synthetic confidence: decays linearly with range, floored at 0.5.
    d.confidence = std::clamp(1.0 - obs.range / 40.0, 0.5, 1.0);
    d.observer = frame.observer;
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace daas::analytics
