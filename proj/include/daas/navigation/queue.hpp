#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "daas/core/types.hpp"

namespace daas::navigation {

struct QueuedWaypoint {
  Waypoint waypoint;
  int priority = 1;
  NavigationType nav_type = NavigationType::DistanceDriven;
  std::uint64_t batch_id = 0;

  bool operator==(const QueuedWaypoint&) const = default;
};

struct AddResult {
  std::size_t added = 0;
  // Set when the batch outranked the in-flight waypoint, which is now suspended.
  std::optional<QueuedWaypoint> preempted;
};

struct QueueEntry {
  std::string id;
  int priority = 0;
  std::size_t position = 0;  // index within its priority bucket; the suspended slot reports 0

  bool operator==(const QueueEntry&) const = default;
};

struct QueueSnapshot {
  std::vector<QueueEntry> entries;  // dispatch order
  std::optional<std::string> suspended;
  std::optional<std::string> in_flight;
};

// Priority-bucketed FIFO of waypoints. Pops strictly by ascending priority
// value, FIFO within a bucket. One waypoint may be in flight; when a batch
// with a strictly better priority arrives, the in-flight waypoint moves to
// the suspended slot and is restored ahead of its own bucket.
class WaypointQueue {
 public:
  // Waypoints are appended in the given order. Throws Error{DuplicateId} if
  // any id is already pending, suspended or in flight; nothing is added then.
  AddResult add(const NavigationBatch& batch, bool allow_preempt = true);

  // Pops the next waypoint and marks it in flight. A waypoint still in
  // flight is treated as finished.
  std::optional<QueuedWaypoint> pop();

  void complete_in_flight() { in_flight_.reset(); }
  // Moves the in-flight waypoint to the suspended slot. Returns it.
  std::optional<QueuedWaypoint> suspend_in_flight();

  // Empties buckets, the suspended slot and the in-flight slot. Returns the
  // ids that were removed.
  std::vector<std::string> clear();

  std::size_t size() const;  // pending + suspended, excluding in flight
  bool empty() const { return size() == 0; }
  bool contains(const std::string& id) const;
  std::optional<int> top_priority() const;

  const std::optional<QueuedWaypoint>& in_flight() const { return in_flight_; }
  const std::optional<QueuedWaypoint>& suspended() const { return suspended_; }
  std::optional<QueuedWaypoint> peek() const;

  QueueSnapshot snapshot() const;
  std::vector<QueuedWaypoint> pending() const;  // dispatch order, suspended included

 private:
  void park_suspended();

  std::map<int, std::deque<QueuedWaypoint>> buckets_;
  std::optional<QueuedWaypoint> suspended_;
  std::optional<QueuedWaypoint> in_flight_;
  std::uint64_t next_batch_id_ = 1;
};

// Free-function forms of the navigation interface.
inline AddResult add_navigation(WaypointQueue& queue, const NavigationBatch& batch) { return queue.add(batch); }
inline std::vector<std::string> clear_navigation(WaypointQueue& queue) { return queue.clear(); }
// Priority-then-FIFO does not depend on the pose; it is accepted for
// interface parity with pose-aware dispatchers.
inline std::optional<QueuedWaypoint> next_waypoint(WaypointQueue& queue, const Position3& /*current_pose*/) {
  return queue.pop();
}

}  // namespace daas::navigation
