#include "daas/analytics/placement.hpp"

#include <algorithm>
#include <limits>

#include "daas/core/error.hpp"

namespace daas::analytics {

std::string_view to_string(PlacementPolicy p) {
  switch (p) {
    case PlacementPolicy::EdgeOnly: return "edge_only";
    case PlacementPolicy::CloudOnly: return "cloud_only";
    case PlacementPolicy::LeastLatency: return "least_latency";
    case PlacementPolicy::RoundRobin: return "round_robin";
  }
  return "unknown";
}

PlacementPolicy parse_placement_policy(std::string_view s) {
  if (s == "edge_only") return PlacementPolicy::EdgeOnly;
  if (s == "cloud_only") return PlacementPolicy::CloudOnly;
  if (s == "least_latency") return PlacementPolicy::LeastLatency;
  if (s == "round_robin") return PlacementPolicy::RoundRobin;
  throw Error(ErrorCode::Validation, "unknown placement policy '" + std::string(s) + "'");
}

Placement schedule_placement(std::span<const AnalyticsTask> tasks, std::span<const ComputeResource> resources,
                             PlacementPolicy policy) {
  if (resources.empty()) throw Error(ErrorCode::Placement, "no compute resources available");
  for (const auto& r : resources) r.validate();

  std::vector<int> load(resources.size(), 0);
  auto has_room = [&](std::size_t i) { return load[i] < resources[i].capacity; };

  Placement out;
  std::size_t rr_cursor = 0;
  for (const auto& task : tasks) {
    std::optional<std::size_t> chosen;
    if (policy == PlacementPolicy::RoundRobin) {
      for (std::size_t k = 0; k < resources.size() && !chosen; ++k) {
        const std::size_t i = (rr_cursor + k) % resources.size();
        if (has_room(i)) {
          chosen = i;
          rr_cursor = i + 1;
        }
      }
    } else {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < resources.size(); ++i) {
        const auto& r = resources[i];
        if (policy == PlacementPolicy::EdgeOnly && r.tier != Tier::Edge) continue;
        if (policy == PlacementPolicy::CloudOnly && r.tier != Tier::Cloud) continue;
        if (!has_room(i)) continue;
        const double latency = r.total_latency(task.kind);
        if (latency < best || (latency == best && chosen && r.id < resources[*chosen].id)) {
          best = latency;
          chosen = i;
        }
      }
    }
    if (!chosen) {
      throw Error(ErrorCode::Placement, "no resource with spare capacity for task '" + task.id + "' under " +
                                            std::string(to_string(policy)));
    }
    ++load[*chosen];
    out.emplace_back(task.id, resources[*chosen].id);
  }
  return out;
}

ComputePool::ComputePool(std::span<const ComputeResource> resources) {
  for (const auto& r : resources) slot_free_at_[r.id].assign(static_cast<std::size_t>(r.capacity), 0.0);
}

double ComputePool::reserve(const std::string& resource_id, double ready_time, double duration) {
  auto it = slot_free_at_.find(resource_id);
  if (it == slot_free_at_.end()) throw Error(ErrorCode::NotFound, "unknown compute resource '" + resource_id + "'");
  auto slot = std::min_element(it->second.begin(), it->second.end());
  const double start = std::max(ready_time, *slot);
  *slot = start + duration;
  return start;
}

}  // namespace daas::analytics
