#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "daas/core/types.hpp"

namespace daas::navigation {

struct SchedulerCapabilities {
  bool deadline_aware = false;
};

// Orders an unordered batch. Implementations must return a permutation of
// their input.
class TrajectoryScheduler {
 public:
  virtual ~TrajectoryScheduler() = default;
  virtual std::string name() const = 0;
  virtual SchedulerCapabilities capabilities() const { return {}; }
  virtual std::vector<Waypoint> order(std::span<const Waypoint> waypoints, const Position3& start) const = 0;
};

class OrderedScheduler final : public TrajectoryScheduler {
 public:
  std::string name() const override { return "ordered"; }
  std::vector<Waypoint> order(std::span<const Waypoint> waypoints, const Position3& start) const override;
};

// Greedy nearest-unvisited tour from `start`. Equidistant candidates break
// by lexicographic id.
class NearestNeighborScheduler final : public TrajectoryScheduler {
 public:
  std::string name() const override { return "nearest_neighbor"; }
  std::vector<Waypoint> order(std::span<const Waypoint> waypoints, const Position3& start) const override;
};

// Earliest deadline first, stable; waypoints without a deadline keep their
// relative order after the ones that have one.
class EarliestDeadlineScheduler final : public TrajectoryScheduler {
 public:
  std::string name() const override { return "earliest_deadline"; }
  SchedulerCapabilities capabilities() const override { return {.deadline_aware = true}; }
  std::vector<Waypoint> order(std::span<const Waypoint> waypoints, const Position3& start) const override;
};

// Ordered batches come back unchanged; unordered ones go through the
// scheduler. Waypoints must already be in absolute coordinates.
std::vector<Waypoint> generate_navigation(const NavigationBatch& batch, const Position3& current_pose,
                                          const TrajectoryScheduler& scheduler);

// Name -> factory lookup for trajectory schedulers. Third-party schedulers
// register here and become selectable from scenario files.
class SchedulerRegistry {
 public:
  using Factory = std::function<std::unique_ptr<TrajectoryScheduler>()>;

  static SchedulerRegistry& instance();

  void add(const std::string& name, Factory factory);
  bool contains(const std::string& name) const;
  std::unique_ptr<TrajectoryScheduler> create(const std::string& name) const;  // Error{NotFound}
  std::vector<std::string> names() const;

 private:
  SchedulerRegistry();

  mutable std::mutex mutex_;
  std::map<std::string, Factory> factories_;
};

}  // namespace daas::navigation
