#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "daas/analytics/tasks.hpp"

namespace daas::analytics {

enum class PlacementPolicy : std::uint8_t { EdgeOnly, CloudOnly, LeastLatency, RoundRobin };

std::string_view to_string(PlacementPolicy p);
PlacementPolicy parse_placement_policy(std::string_view s);

// task id -> resource id, in task order.
using Placement = std::vector<std::pair<std::string, std::string>>;

// Capacity is the number of tasks a resource can host. Throws
// Error{Placement} when a task cannot be placed.
Placement schedule_placement(std::span<const AnalyticsTask> tasks, std::span<const ComputeResource> resources,
                             PlacementPolicy policy);

// Plug-in seam for analytics schedulers.
class AnalyticsScheduler {
 public:
  virtual ~AnalyticsScheduler() = default;
  virtual std::string name() const = 0;
  virtual Placement place(std::span<const AnalyticsTask> tasks, std::span<const ComputeResource> resources) const = 0;
};

class PolicyScheduler final : public AnalyticsScheduler {
 public:
  explicit PolicyScheduler(PlacementPolicy policy) : policy_(policy) {}
  std::string name() const override { return std::string(to_string(policy_)); }
  Placement place(std::span<const AnalyticsTask> tasks, std::span<const ComputeResource> resources) const override {
    return schedule_placement(tasks, resources, policy_);
  }

 private:
  PlacementPolicy policy_;
};

// Sim-time occupancy of each resource's inference slots.
class ComputePool {
 public:
  explicit ComputePool(std::span<const ComputeResource> resources);

  // Earliest start >= ready_time on a free slot; occupies it for `duration`.
  // Returns the start time.
  double reserve(const std::string& resource_id, double ready_time, double duration);

 private:
  std::map<std::string, std::vector<double>> slot_free_at_;
};

}  // namespace daas::analytics
