#include "daas/navigation/queue.hpp"

#include <unordered_set>

#include "daas/core/error.hpp"

namespace daas::navigation {

bool WaypointQueue::contains(const std::string& id) const {
  if (in_flight_ && in_flight_->waypoint.id == id) return true;
  if (suspended_ && suspended_->waypoint.id == id) return true;
  for (const auto& [prio, bucket] : buckets_) {
    for (const auto& q : bucket) {
      if (q.waypoint.id == id) return true;
    }
  }
  return false;
}

AddResult WaypointQueue::add(const NavigationBatch& batch, bool allow_preempt) {
  validate(batch);
  for (const auto& wp : batch.waypoints) {
    if (contains(wp.id)) throw Error(ErrorCode::DuplicateId, "waypoint id '" + wp.id + "' already queued");
  }
  AddResult result;
  if (batch.waypoints.empty()) return result;

  const std::uint64_t batch_id = next_batch_id_++;
  auto& bucket = buckets_[batch.priority];
  for (const auto& wp : batch.waypoints) {
    bucket.push_back(QueuedWaypoint{wp, batch.priority, batch.nav_type, batch_id});
  }
  result.added = batch.waypoints.size();

  if (allow_preempt && in_flight_ && batch.priority < in_flight_->priority) {
    result.preempted = suspend_in_flight();
  }
  return result;
}

void WaypointQueue::park_suspended() {
  if (!suspended_) return;
  buckets_[suspended_->priority].push_front(std::move(*suspended_));
  suspended_.reset();
}

std::optional<QueuedWaypoint> WaypointQueue::suspend_in_flight() {
  if (!in_flight_) return std::nullopt;
  // A second suspension pushes the older one back to the head of its bucket,
  // which keeps its place ahead of later arrivals of the same priority.
  park_suspended();
  suspended_ = std::move(in_flight_);
  in_flight_.reset();
  return suspended_;
}

std::optional<int> WaypointQueue::top_priority() const {
  std::optional<int> best;
  for (const auto& [prio, bucket] : buckets_) {
    if (!bucket.empty()) {
      best = prio;
      break;
    }
  }
  if (suspended_ && (!best || suspended_->priority <= *best)) best = suspended_->priority;
  return best;
}

std::optional<QueuedWaypoint> WaypointQueue::peek() const {
  const auto top = top_priority();
  if (!top) return std::nullopt;
  if (suspended_ && suspended_->priority == *top) return suspended_;
  return buckets_.at(*top).front();
}

std::optional<QueuedWaypoint> WaypointQueue::pop() {
  in_flight_.reset();
  const auto top = top_priority();
  if (!top) return std::nullopt;
  if (suspended_ && suspended_->priority == *top) {
    in_flight_ = std::move(suspended_);
    suspended_.reset();
  } else {
    auto it = buckets_.find(*top);
    in_flight_ = std::move(it->second.front());
    it->second.pop_front();
    if (it->second.empty()) buckets_.erase(it);
  }
  return in_flight_;
}

std::vector<std::string> WaypointQueue::clear() {
  std::vector<std::string> ids;
  if (in_flight_) ids.push_back(in_flight_->waypoint.id);
  for (const auto& q : pending()) ids.push_back(q.waypoint.id);
  buckets_.clear();
  suspended_.reset();
  in_flight_.reset();
  return ids;
}

std::size_t WaypointQueue::size() const {
  std::size_t n = suspended_ ? 1 : 0;
  for (const auto& [prio, bucket] : buckets_) n += bucket.size();
  return n;
}

std::vector<QueuedWaypoint> WaypointQueue::pending() const {
  std::vector<QueuedWaypoint> out;
  bool suspended_placed = !suspended_;
  for (const auto& [prio, bucket] : buckets_) {
    if (!suspended_placed && suspended_->priority <= prio) {
      out.push_back(*suspended_);
      suspended_placed = true;
    }
    out.insert(out.end(), bucket.begin(), bucket.end());
  }
  if (!suspended_placed) out.push_back(*suspended_);
  return out;
}

QueueSnapshot WaypointQueue::snapshot() const {
  QueueSnapshot snap;
  int current_prio = -1;
  std::size_t position = 0;
  for (const auto& q : pending()) {
    if (q.priority != current_prio) {
      current_prio = q.priority;
      position = 0;
    }
    snap.entries.push_back(QueueEntry{q.waypoint.id, q.priority, position++});
  }
  if (suspended_) snap.suspended = suspended_->waypoint.id;
  if (in_flight_) snap.in_flight = in_flight_->waypoint.id;
  return snap;
}

}  // namespace daas::navigation
