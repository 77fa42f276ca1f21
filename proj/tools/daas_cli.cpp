#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "daas/cli/metrics.hpp"
#include "daas/cli/replay.hpp"
#include "daas/cli/runner.hpp"
#include "daas/cli/trace.hpp"
#include "daas/controlplane/http_server.hpp"
#include "daas/controlplane/service.hpp"
#include "daas/core/error.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFaulted = 1;
constexpr int kExitInput = 2;
constexpr int kExitInvariant = 3;

struct Args {
  std::string scenario;
  std::string trace;
  std::string out = "out";
  std::string scheduler;
  std::vector<std::string> schedulers;
  std::int64_t seed = -1;
  double duration = -1.0;
  std::string pacing;
  std::string host = "127.0.0.1";
  int port = 8080;
  bool json = false;
};

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path().empty() ? fs::path(".") : path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw daas::Error(daas::ErrorCode::Configuration, "cannot write " + path.string());
  out << content;
}

daas::navigation::Scenario load(const Args& a) {
  auto scenario = daas::navigation::load_scenario(a.scenario);
  daas::cli::Overrides o;
  if (!a.scheduler.empty()) o.scheduler = a.scheduler;
  if (a.seed >= 0) o.seed = static_cast<std::uint64_t>(a.seed);
  if (a.duration > 0.0) o.duration = a.duration;
  if (!a.pacing.empty()) {
    try {
      o.pacing = daas::navigation::parse_pacing(a.pacing);
    } catch (const daas::Error& e) {
      throw daas::Error(daas::ErrorCode::Schema, e.what(), "/pacing");
    }
  }
  daas::cli::apply_overrides(scenario, o);
  return scenario;
}

int cmd_run(const Args& a) {
  const auto scenario = load(a);
  daas::controlplane::MissionService service;
  const auto handle = service.start_mission(scenario);
  service.wait(handle.mission_id);
  const auto lines = service.trace(handle.mission_id);

  std::string trace_text;
  for (const auto& l : lines) trace_text += l + "\n";
  const fs::path out_dir(a.out);
  write_file(out_dir / (scenario.name + ".trace.ndjson"), trace_text);

  const auto events = daas::cli::parse_trace_lines(lines);
  auto report = daas::cli::compute_metrics(events);
  try {
    const auto overhead = service.overhead_report(handle.mission_id);
    report.overhead = daas::cli::OverheadStats{overhead.median_ms, overhead.p95_ms, overhead.frames};
  } catch (const daas::Error& e) {
    if (e.code() != daas::ErrorCode::NotReady) throw;
  }
  const auto verdict = daas::cli::verify_trace(events);
  auto report_json = daas::cli::to_json(report);
  report_json["replay"] = daas::cli::to_json(verdict);
  write_file(out_dir / (scenario.name + ".report.json"), report_json.dump(2) + "\n");

  if (a.json) {
    std::cout << report_json.dump(2) << "\n";
  } else {
    std::cout << daas::cli::format_table(std::span(&report, 1));
    std::cout << "status: " << report.status << " (" << report.end_reason << ")\n";
    if (report.overhead) {
      std::cout << "overhead: median " << report.overhead->median_ms << " ms, p95 " << report.overhead->p95_ms
                << " ms over " << report.overhead->frames << " frames\n";
    }
    std::cout << "trace: " << (out_dir / (scenario.name + ".trace.ndjson")).string() << "\n";
  }
  if (!verdict.pass()) {
    std::cerr << daas::cli::format_verdict(verdict);
    return kExitInvariant;
  }
  return report.status == "faulted" ? kExitFaulted : kExitOk;
}

int cmd_compare(const Args& a) {
  const auto scenario = load(a);
  const auto cmp = daas::cli::compare_schedulers(scenario, a.schedulers);
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : cmp.rows) rows.push_back(daas::cli::to_json(r));
  nlohmann::json j{{"scenario", scenario.name}, {"identical_visit_sets", cmp.identical_visit_sets}, {"rows", rows}};
  write_file(fs::path(a.out) / (scenario.name + ".compare.json"), j.dump(2) + "\n");
  if (a.json) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << daas::cli::format_table(cmp.rows);
    if (cmp.rows.size() >= 2) {
      std::cout << "savings vs " << cmp.rows.front().scheduler << ":";
      for (std::size_t i = 1; i < cmp.rows.size(); ++i) {
        std::cout << " " << cmp.rows[i].scheduler << "=" << (cmp.rows.front().tour_length - cmp.rows[i].tour_length)
                  << " m";
      }
      std::cout << "\n";
    }
  }
  if (!cmp.identical_visit_sets) {
    std::cerr << "schedulers visited different waypoint sets\n";
    return kExitInvariant;
  }
  return kExitOk;
}

int cmd_replay(const Args& a) {
  const auto events = daas::cli::read_trace_file(a.trace);
  const auto verdict = daas::cli::verify_trace(events);
  if (a.json) {
    std::cout << daas::cli::to_json(verdict).dump(2) << "\n";
  } else {
    std::cout << daas::cli::format_verdict(verdict);
  }
  return verdict.pass() ? kExitOk : kExitInvariant;
}

int cmd_serve(const Args& a) {
  daas::controlplane::ServiceOptions options;
  if (!a.out.empty()) options.trace_dir = fs::path(a.out);
  daas::controlplane::MissionService service(options);
  daas::controlplane::HttpServer server(service);
  std::cout << "listening on http://" << a.host << ":" << a.port << std::endl;
  server.serve(a.host, a.port);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Drone mission runtime: run scenarios, compare schedulers, replay traces, serve the control plane.\n"
               "Overrides given on the command line take precedence over scenario-file values."};
  app.require_subcommand(1);
  Args a;

  auto add_overrides = [&a](CLI::App* sub) {
    sub->add_option("--scheduler", a.scheduler, "Trajectory scheduler (ordered, nearest_neighbor, earliest_deadline)");
    sub->add_option("--seed", a.seed, "RNG seed")->check(CLI::NonNegativeNumber);
    sub->add_option("--duration", a.duration, "Mission duration limit in sim seconds")->check(CLI::PositiveNumber);
    sub->add_option("--pacing", a.pacing, "max or realtime");
    sub->add_option("--out", a.out, "Output directory for traces and reports")->capture_default_str();
    sub->add_flag("--json", a.json, "Print the machine-readable report");
  };

  auto* run = app.add_subcommand("run", "Run a scenario and write its trace and report");
  run->add_option("scenario", a.scenario, "Scenario JSON file")->required();
  add_overrides(run);

  auto* compare = app.add_subcommand("compare", "Run a scenario under several schedulers");
  compare->add_option("scenario", a.scenario, "Scenario JSON file")->required();
  compare->add_option("--schedulers", a.schedulers, "Scheduler names")
      ->delimiter(',')
      ->default_val(std::vector<std::string>{"ordered", "nearest_neighbor"});
  add_overrides(compare);

  auto* replay = app.add_subcommand("replay", "Verify a trace file offline");
  replay->add_option("trace", a.trace, "Trace file (.ndjson)")->required();
  replay->add_flag("--json", a.json, "Print the machine-readable verdict");

  auto* serve = app.add_subcommand("serve", "Start the HTTP control plane");
  serve->add_option("--host", a.host, "Bind address")->capture_default_str();
  serve->add_option("--port", a.port, "Port")->capture_default_str();
  serve->add_option("--out", a.out, "Directory for per-mission trace files")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*run) return cmd_run(a);
    if (*compare) return cmd_compare(a);
    if (*replay) return cmd_replay(a);
    if (*serve) return cmd_serve(a);
  } catch (const daas::Error& e) {
    std::cerr << "error: " << e.what();
    if (!e.path().empty()) std::cerr << " at " << e.path();
    std::cerr << "\n";
    switch (e.code()) {
      case daas::ErrorCode::Schema:
      case daas::ErrorCode::Validation:
      case daas::ErrorCode::NotFound:
      case daas::ErrorCode::DuplicateId:
      case daas::ErrorCode::Configuration:
      case daas::ErrorCode::Placement:
        return kExitInput;
      default:
        return kExitInvariant;
    }
  }
  return kExitOk;
}
