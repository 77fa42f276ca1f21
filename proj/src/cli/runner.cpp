#include "daas/cli/runner.hpp"

#include <algorithm>

#include "daas/core/error.hpp"
#include "daas/core/wire.hpp"
#include "daas/navigation/scheduler.hpp"

namespace daas::cli {

void apply_overrides(navigation::Scenario& scenario, const Overrides& overrides) {
  if (overrides.scheduler) scenario.scheduler = *overrides.scheduler;
  if (overrides.seed) scenario.seed = *overrides.seed;
  if (overrides.duration) scenario.duration_limit = *overrides.duration;
  if (overrides.pacing) scenario.pacing = *overrides.pacing;
  scenario.validate();
}

SimulationResult simulate(const navigation::Scenario& scenario) {
  SimulationResult result;
  navigation::MissionEngine engine(scenario, [&result](const MissionEvent& e) {
    result.trace.push_back(serialize_event(e));
    result.events.push_back(e);
  });
  result.status = engine.run();
  result.overhead = engine.overhead_samples();
  result.monitors = engine.monitor_series();
  return result;
}

Comparison compare_schedulers(const navigation::Scenario& scenario, const std::vector<std::string>& schedulers) {
  if (schedulers.size() < 2) throw Error(ErrorCode::Validation, "compare needs at least two schedulers");
  for (const auto& name : schedulers) {
    if (!navigation::SchedulerRegistry::instance().contains(name)) {
      throw Error(ErrorCode::Schema, "unknown scheduler '" + name + "'", "/scheduler");
    }
  }
  Comparison out;
  std::optional<std::vector<std::string>> reference;
  for (const auto& name : schedulers) {
    navigation::Scenario s = scenario;
    s.scheduler = name;
    s.pacing = navigation::Pacing::Max;
    const SimulationResult run = simulate(s);
    MetricsReport report = compute_metrics(run.events);
    std::vector<std::string> visits = report.visit_order;
    std::sort(visits.begin(), visits.end());
    if (!reference) {
      reference = visits;
    } else if (*reference != visits) {
      out.identical_visit_sets = false;
    }
    out.rows.push_back(std::move(report));
  }
  return out;
}

}  // namespace daas::cli
