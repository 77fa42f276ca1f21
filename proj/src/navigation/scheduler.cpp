#include "daas/navigation/scheduler.hpp"

#include <algorithm>
#include <limits>

#include "daas/core/error.hpp"

namespace daas::navigation {

namespace {

constexpr double kTieTolerance = 1e-9;

}  // namespace

std::vector<Waypoint> OrderedScheduler::order(std::span<const Waypoint> waypoints, const Position3&) const {
  return {waypoints.begin(), waypoints.end()};
}

std::vector<Waypoint> NearestNeighborScheduler::order(std::span<const Waypoint> waypoints,
                                                      const Position3& start) const {
  std::vector<Waypoint> remaining(waypoints.begin(), waypoints.end());
  std::vector<Waypoint> tour;
  tour.reserve(remaining.size());
  Position3 cursor = start;
  while (!remaining.empty()) {
    std::size_t best = 0;
    double best_distance = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < remaining.size(); ++i) {
      const double d = euclidean_distance(cursor, remaining[i].target);
      const bool closer = d < best_distance - kTieTolerance;
      const bool tie = std::abs(d - best_distance) <= kTieTolerance && remaining[i].id < remaining[best].id;
      if (closer || tie) {
        best = i;
        best_distance = std::min(d, best_distance);
      }
    }
    cursor = remaining[best].target;
    tour.push_back(std::move(remaining[best]));
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return tour;
}

std::vector<Waypoint> EarliestDeadlineScheduler::order(std::span<const Waypoint> waypoints, const Position3&) const {
  std::vector<Waypoint> out(waypoints.begin(), waypoints.end());
  std::stable_sort(out.begin(), out.end(), [](const Waypoint& a, const Waypoint& b) {
    if (a.deadline && b.deadline) return *a.deadline < *b.deadline;
    return a.deadline.has_value() && !b.deadline.has_value();
  });
  return out;
}

std::vector<Waypoint> generate_navigation(const NavigationBatch& batch, const Position3& current_pose,
                                          const TrajectoryScheduler& scheduler) {
  if (batch.scheduling == SchedulingType::Ordered) return batch.waypoints;
  return scheduler.order(batch.waypoints, current_pose);
}

SchedulerRegistry::SchedulerRegistry() {
  factories_["ordered"] = [] { return std::make_unique<OrderedScheduler>(); };
  factories_["nearest_neighbor"] = [] { return std::make_unique<NearestNeighborScheduler>(); };
  factories_["earliest_deadline"] = [] { return std::make_unique<EarliestDeadlineScheduler>(); };
}

SchedulerRegistry& SchedulerRegistry::instance() {
  static SchedulerRegistry registry;
  return registry;
}

void SchedulerRegistry::add(const std::string& name, Factory factory) {
  if (name.empty() || !factory) throw Error(ErrorCode::Validation, "scheduler registration needs a name and factory");
  std::lock_guard lock(mutex_);
  factories_[name] = std::move(factory);
}

bool SchedulerRegistry::contains(const std::string& name) const {
  std::lock_guard lock(mutex_);
  return factories_.contains(name);
}

std::unique_ptr<TrajectoryScheduler> SchedulerRegistry::create(const std::string& name) const {
  Factory factory;
  {
    std::lock_guard lock(mutex_);
    auto it = factories_.find(name);
    if (it == factories_.end()) throw Error(ErrorCode::NotFound, "unknown scheduler '" + name + "'");
    factory = it->second;
  }
  return factory();
}

std::vector<std::string> SchedulerRegistry::names() const {
  std::lock_guard lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [name, f] : factories_) out.push_back(name);
  return out;
}

}  // namespace daas::navigation
