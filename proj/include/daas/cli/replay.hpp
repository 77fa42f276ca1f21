#pragma once

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "daas/core/events.hpp"

namespace daas::cli {

struct Violation {
  std::string check;
  double sim_time = 0.0;
  std::string message;
};

struct Verdict {
  std::size_t events = 0;
  std::vector<std::string> checks;  // every check that ran
  std::vector<Violation> violations;

  bool pass() const { return violations.empty(); }
};

// Re-checks runtime invariants offline: time monotonicity, speed clamp,
// battery monotonicity, visit-once, abort safety, the state machine path,
// arrival accuracy and detection causality. Throws Error{Schema} when the
// trace is structurally incomplete (no header or no end record).
Verdict verify_trace(std::span<const MissionEvent> events);

nlohmann::json to_json(const Verdict& v);
std::string format_verdict(const Verdict& v);

}  // namespace daas::cli
