#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "daas/cli/metrics.hpp"
#include "daas/navigation/engine.hpp"
#include "daas/navigation/scenario.hpp"

namespace daas::cli {

// Command-line overrides; each one, when set, beats the scenario file.
struct Overrides {
  std::optional<std::string> scheduler;
  std::optional<std::uint64_t> seed;
  std::optional<double> duration;
  std::optional<navigation::Pacing> pacing;
};

void apply_overrides(navigation::Scenario& scenario, const Overrides& overrides);

struct SimulationResult {
  navigation::MissionStatus status = navigation::MissionStatus::Created;
  std::vector<std::string> trace;  // serialized records, one per line
  std::vector<MissionEvent> events;
  std::vector<navigation::OverheadSample> overhead;
  std::map<std::string, analytics::MetricSeries> monitors;
};

// Runs a mission to completion on the calling thread at max pacing.
SimulationResult simulate(const navigation::Scenario& scenario);

struct Comparison {
  std::vector<MetricsReport> rows;
  bool identical_visit_sets = true;
};

// Throws Error{Validation} for fewer than two names and Error{Schema} for an
// unknown scheduler.
Comparison compare_schedulers(const navigation::Scenario& scenario, const std::vector<std::string>& schedulers);

}  // namespace daas::cli
