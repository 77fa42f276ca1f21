#include "daas/navigation/scenario.hpp"

#include <fstream>
#include <set>

#include "daas/core/error.hpp"
#include "daas/core/wire.hpp"
#include "daas/navigation/scheduler.hpp"

namespace daas::navigation {

namespace {

using wire::join;

[[noreturn]] void schema_error(const std::string& message, const std::string& path) {
  throw Error(ErrorCode::Schema, message, path.empty() ? "/" : path);
}

// Runs `fn`, re-raising any runtime error as a schema error under `path`.
template <typename F>
auto at_path(const std::string& path, F&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Schema) throw Error(ErrorCode::Schema, e.what(), path + e.path());
    throw Error(ErrorCode::Schema, e.what(), path.empty() ? "/" : path);
  } catch (const nlohmann::json::exception& e) {
    schema_error(e.what(), path);
  }
}

const Json& array_at(const Json& j, const std::string& key, const std::string& path) {
  const Json& v = wire::require(j, key, path);
  if (!v.is_array()) schema_error("expected an array", join(path, key));
  return v;
}

const Json* optional_array(const Json& j, const std::string& key, const std::string& path) {
  if (!j.contains(key)) return nullptr;
  return &array_at(j, key, path);
}

int integer_or(const Json& j, const std::string& key, int fallback, const std::string& path) {
  if (!j.contains(key)) return fallback;
  const Json& v = j.at(key);
  if (!v.is_number_integer()) schema_error("expected an integer", join(path, key));
  return v.get<int>();
}

std::vector<std::string> strings_or_empty(const Json& j, const std::string& key, const std::string& path) {
  std::vector<std::string> out;
  const Json* arr = optional_array(j, key, path);
  if (!arr) return out;
  for (std::size_t i = 0; i < arr->size(); ++i) {
    if (!(*arr)[i].is_string()) schema_error("expected a string", join(join(path, key), i));
    out.push_back((*arr)[i].get<std::string>());
  }
  return out;
}

template <typename F>
auto enum_field(const Json& j, const std::string& key, const std::string& path, F parse) {
  const std::string s = wire::string(j, key, path);
  try {
    return parse(s);
  } catch (const Error& e) {
    throw Error(ErrorCode::Schema, e.what(), join(path, key));
  }
}

void reject_unknown_keys(const Json& j, const std::set<std::string>& known, const std::string& path) {
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) schema_error("unknown field '" + key + "'", join(path, key));
  }
}

NavigationBatch parse_batch(const Json& j, const std::string& path) {
  return at_path(path, [&] { return j.get<NavigationBatch>(); });
}

sim::DroneModel parse_drone(const Json& j, const std::string& path) {
  sim::DroneModel m;
  m.max_horizontal_speed = wire::number_or(j, "max_horizontal_speed", m.max_horizontal_speed, path);
  m.max_vertical_speed = wire::number_or(j, "max_vertical_speed", m.max_vertical_speed, path);
  m.takeoff_altitude = wire::number_or(j, "takeoff_altitude", m.takeoff_altitude, path);
  m.battery_capacity = wire::number_or(j, "battery_capacity", m.battery_capacity, path);
  m.hover_drain = wire::number_or(j, "hover_drain", m.hover_drain, path);
  m.move_drain = wire::number_or(j, "move_drain", m.move_drain, path);
  m.arrival_epsilon = wire::number_or(j, "arrival_epsilon", m.arrival_epsilon, path);
  at_path(path, [&] { m.validate(); });
  return m;
}

sensing::SensorDescriptor parse_sensor(const Json& j, const std::string& path) {
  sensing::SensorDescriptor d;
  d.id = wire::string(j, "id", path);
  d.kind = enum_field(j, "kind", path, sensing::parse_sensor_kind);
  d.rate = wire::number(j, "rate", path);
  if (!(d.rate > 0.0)) schema_error("sensor rate must be > 0", join(path, "rate"));
  if (j.contains("properties")) {
    const Json& props = j.at("properties");
    if (!props.is_object()) schema_error("expected an object", join(path, "properties"));
    for (const auto& [key, value] : props.items()) {
      if (value.is_string()) {
        d.properties[key] = value.get<std::string>();
      } else if (value.is_number() || value.is_boolean()) {
        d.properties[key] = value.dump();
      } else {
        schema_error("property values must be scalars", join(join(path, "properties"), key));
      }
    }
  }
  return d;
}

sim::TargetTrack parse_target(const Json& j, const std::string& path) {
  sim::TargetTrack t;
  t.id = wire::string(j, "id", path);
  const Json& pts = array_at(j, "path", path);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const std::string p = join(join(path, "path"), i);
    sim::TrackPoint tp;
    tp.position = position_from_json(pts[i], p);
    tp.speed = wire::number_or(pts[i], "speed", tp.speed, p);
    t.path.push_back(tp);
  }
  t.loop = wire::boolean_or(j, "loop", false, path);
  t.start_time = wire::number_or(j, "start_time", 0.0, path);
  t.vanish_at_end = wire::boolean_or(j, "vanish_at_end", false, path);
  at_path(path, [&] { t.validate(); });
  return t;
}

analytics::ComputeResource parse_resource(const Json& j, const std::string& path) {
  analytics::ComputeResource r;
  r.id = wire::string(j, "id", path);
  r.tier = enum_field(j, "tier", path, analytics::parse_tier);
  if (j.contains("inference_latency")) {
    const Json& lat = j.at("inference_latency");
    if (!lat.is_object()) schema_error("expected an object", join(path, "inference_latency"));
    for (const auto& item : lat.items()) {
      const std::string& kind = item.key();
      const Json& value = item.value();
      const std::string p = join(join(path, "inference_latency"), kind);
      at_path(p, [&] { return analytics::parse_task_kind(kind); });
      if (!value.is_number()) schema_error("expected a number", p);
      r.inference_latency[kind] = value.get<double>();
    }
  }
  r.round_trip_network = wire::number_or(j, "round_trip_network", 0.0, path);
  r.capacity = integer_or(j, "capacity", 4, path);
  at_path(path, [&] { r.validate(); });
  return r;
}

analytics::TriggerBinding parse_binding(const Json& j, const std::string& path) {
  analytics::TriggerBinding b;
  if (j.contains("when")) {
    const Json& w = j.at("when");
    const std::string p = join(path, "when");
    b.when.targets = strings_or_empty(w, "targets", p);
    b.when.min_confidence = wire::number_or(w, "min_confidence", 0.0, p);
    if (w.contains("max_range")) b.when.max_range = wire::number(w, "max_range", p);
    b.when.once = wire::boolean_or(w, "once", true, p);
  }
  const Json& actions = array_at(j, "actions", path);
  for (std::size_t i = 0; i < actions.size(); ++i) {
    const std::string p = join(join(path, "actions"), i);
    analytics::TriggerAction a;
    a.kind = enum_field(actions[i], "kind", p, analytics::parse_action_kind);
    if (a.kind == analytics::ActionKind::LaunchTask) a.task = wire::string(actions[i], "task", p);
    if (a.kind == analytics::ActionKind::SubmitBatch) {
      a.batch = parse_batch(wire::require(actions[i], "batch", p), join(p, "batch"));
      a.relative_to_target = wire::boolean_or(actions[i], "relative_to_target", false, p);
    }
    b.actions.push_back(std::move(a));
  }
  return b;
}

analytics::AnalyticsTask parse_task(const Json& j, const std::string& path) {
  analytics::AnalyticsTask t;
  t.id = wire::string(j, "id", path);
  t.kind = enum_field(j, "kind", path, analytics::parse_task_kind);
  t.input = wire::string_or(j, "input", "", path);
  t.per_inference_cost = wire::number_or(j, "per_inference_cost", 0.0, path);
  if (j.contains("deadline")) t.deadline = wire::number(j, "deadline", path);
  t.stride = integer_or(j, "stride", 1, path);
  t.active = wire::boolean_or(j, "active", true, path);
  t.priority = integer_or(j, "priority", 1, path);
  t.targets = strings_or_empty(j, "targets", path);
  t.miss_rate = wire::number_or(j, "miss_rate", 0.0, path);
  t.bearing_noise = wire::number_or(j, "bearing_noise", 0.0, path);
  if (const Json* triggers = optional_array(j, "triggers", path)) {
    for (std::size_t i = 0; i < triggers->size(); ++i) {
      t.triggers.push_back(parse_binding((*triggers)[i], join(join(path, "triggers"), i)));
    }
  }
  t.follow_target = wire::string_or(j, "follow_target", "", path);
  if (j.contains("follow")) {
    const Json& f = j.at("follow");
    const std::string p = join(path, "follow");
    auto& c = t.follow;
    c.gains.kp = wire::number_or(f, "kp", c.gains.kp, p);
    c.gains.ki = wire::number_or(f, "ki", c.gains.ki, p);
    c.gains.kd = wire::number_or(f, "kd", c.gains.kd, p);
    c.gains.kp_vertical = wire::number_or(f, "kp_vertical", c.gains.kp_vertical, p);
    c.setpoint_distance = wire::number_or(f, "setpoint_distance", c.setpoint_distance, p);
    c.integral_limit = wire::number_or(f, "integral_limit", c.integral_limit, p);
    c.loss_timeout = wire::number_or(f, "loss_timeout", c.loss_timeout, p);
    if (f.contains("altitude")) c.altitude = wire::number(f, "altitude", p);
    c.feedforward = wire::boolean_or(f, "feedforward", c.feedforward, p);
  }
  t.fields = strings_or_empty(j, "fields", path);
  at_path(path, [&] { t.validate(); });
  return t;
}

sensing::TransitionTable parse_table(const Json& arr, const std::string& path) {
  sensing::TransitionTable table;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string p = join(path, i);
    const MissionState from = enum_field(arr[i], "from", p, parse_mission_state);
    const auto event = enum_field(arr[i], "event", p, sensing::parse_mission_event);
    const MissionState to = enum_field(arr[i], "to", p, parse_mission_state);
    at_path(p, [&] { table.set(from, event, to); });
  }
  return table;
}

bool has_action(const analytics::AnalyticsTask& t, analytics::ActionKind kind) {
  for (const auto& b : t.triggers) {
    for (const auto& a : b.actions) {
      if (a.kind == kind) return true;
    }
  }
  return false;
}

}  // namespace

std::string_view to_string(MissionPattern p) {
  switch (p) {
    case MissionPattern::StaticPredefined: return "static_predefined";
    case MissionPattern::DynamicPredefined: return "dynamic_predefined";
    case MissionPattern::SensorDriven: return "sensor_driven";
    case MissionPattern::AnalyticsUpdate: return "analytics_update";
    case MissionPattern::AnalyticsAbort: return "analytics_abort";
  }
  return "unknown";
}

MissionPattern parse_mission_pattern(std::string_view s) {
  if (s == "static_predefined") return MissionPattern::StaticPredefined;
  if (s == "dynamic_predefined") return MissionPattern::DynamicPredefined;
  if (s == "sensor_driven") return MissionPattern::SensorDriven;
  if (s == "analytics_update") return MissionPattern::AnalyticsUpdate;
  if (s == "analytics_abort") return MissionPattern::AnalyticsAbort;
  throw Error(ErrorCode::Validation, "unknown mission pattern '" + std::string(s) + "'");
}

std::string_view to_string(Pacing p) { return p == Pacing::Max ? "max" : "realtime"; }

Pacing parse_pacing(std::string_view s) {
  if (s == "max") return Pacing::Max;
  if (s == "realtime") return Pacing::Realtime;
  throw Error(ErrorCode::Validation, "unknown pacing '" + std::string(s) + "'");
}

std::string_view to_string(CommandKind k) {
  switch (k) {
    case CommandKind::InjectBatch: return "inject_batch";
    case CommandKind::Pause: return "pause";
    case CommandKind::Resume: return "resume";
    case CommandKind::Abort: return "abort";
  }
  return "unknown";
}

CommandKind parse_command_kind(std::string_view s) {
  if (s == "inject_batch") return CommandKind::InjectBatch;
  if (s == "pause") return CommandKind::Pause;
  if (s == "resume") return CommandKind::Resume;
  if (s == "abort") return CommandKind::Abort;
  throw Error(ErrorCode::Validation, "unknown command kind '" + std::string(s) + "'");
}

void ControlCommand::validate() const {
  if (kind == CommandKind::InjectBatch) {
    if (!payload) throw Error(ErrorCode::Validation, "inject_batch requires a payload");
    daas::validate(*payload);
  } else if (payload) {
    throw Error(ErrorCode::Validation, std::string(to_string(kind)) + " takes no payload");
  }
}

ControlCommand parse_control_command(const Json& j, const std::string& path) {
  if (!j.is_object()) schema_error("expected an object", path);
  ControlCommand c;
  c.kind = enum_field(j, "kind", path, parse_command_kind);
  if (j.contains("payload") && !j.at("payload").is_null()) {
    c.payload = parse_batch(j.at("payload"), join(path, "payload"));
  }
  at_path(path, [&] { c.validate(); });
  return c;
}

Json to_json(const ControlCommand& c) {
  Json j{{"kind", to_string(c.kind)}};
  if (c.payload) j["payload"] = *c.payload;
  return j;
}

analytics::ComputeResource default_edge_resource() {
  analytics::ComputeResource r;
  r.id = "onboard";
  r.tier = analytics::Tier::Edge;
  r.inference_latency = {{"detector", 0.03}, {"remote", 0.03}};
  r.capacity = 8;
  return r;
}

Scenario parse_scenario(const Json& j) {
  if (!j.is_object()) schema_error("scenario must be a JSON object", "/");
  reject_unknown_keys(j,
                      {"schema", "name", "pattern", "seed", "dt", "duration_limit", "landing_grace", "pacing",
                       "time_scale", "drone", "takeoff_origin", "return_home", "on_idle", "scheduler", "sensors",
                       "targets", "compute", "placement_policy", "deploy", "analytics", "batches", "commands",
                       "transition_table", "description"},
                      "");
  Scenario s;
  s.schema = integer_or(j, "schema", 1, "");
  if (s.schema != 1) schema_error("unsupported schema version " + std::to_string(s.schema), "/schema");
  s.name = wire::string(j, "name", "");
  s.pattern = enum_field(j, "pattern", "", parse_mission_pattern);
  if (j.contains("seed")) {
    const Json& seed = j.at("seed");
    if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<std::int64_t>() >= 0)) {
      schema_error("seed must be a non-negative integer", "/seed");
    }
    s.seed = seed.get<std::uint64_t>();
  }
  s.dt = wire::number_or(j, "dt", s.dt, "");
  s.duration_limit = wire::number_or(j, "duration_limit", s.duration_limit, "");
  s.landing_grace = wire::number_or(j, "landing_grace", s.landing_grace, "");
  if (j.contains("pacing")) s.pacing = enum_field(j, "pacing", "", parse_pacing);
  s.time_scale = wire::number_or(j, "time_scale", s.time_scale, "");
  if (j.contains("drone")) s.drone = parse_drone(j.at("drone"), "/drone");
  if (j.contains("takeoff_origin")) s.takeoff_origin = position_from_json(j.at("takeoff_origin"), "/takeoff_origin");
  s.return_home = wire::boolean_or(j, "return_home", false, "");
  if (j.contains("on_idle")) {
    const std::string idle = wire::string(j, "on_idle", "");
    if (idle == "land") {
      s.on_idle = IdleBehavior::Land;
    } else if (idle == "hover") {
      s.on_idle = IdleBehavior::Hover;
    } else {
      schema_error("on_idle must be 'land' or 'hover'", "/on_idle");
    }
  }
  s.scheduler = wire::string_or(j, "scheduler", s.scheduler, "");

  if (const Json* arr = optional_array(j, "sensors", "")) {
    for (std::size_t i = 0; i < arr->size(); ++i) s.sensors.push_back(parse_sensor((*arr)[i], join("/sensors", i)));
  }
  if (const Json* arr = optional_array(j, "targets", "")) {
    for (std::size_t i = 0; i < arr->size(); ++i) s.targets.push_back(parse_target((*arr)[i], join("/targets", i)));
  }
  if (const Json* arr = optional_array(j, "compute", "")) {
    for (std::size_t i = 0; i < arr->size(); ++i) {
      s.compute.push_back(parse_resource((*arr)[i], join("/compute", i)));
    }
  }
  if (s.compute.empty()) s.compute.push_back(default_edge_resource());
  if (j.contains("placement_policy")) {
    s.placement = enum_field(j, "placement_policy", "", analytics::parse_placement_policy);
  }
  if (j.contains("deploy")) {
    const Json& d = j.at("deploy");
    if (!d.is_object()) schema_error("expected an object", "/deploy");
    for (const auto& [task, res] : d.items()) {
      if (!res.is_string()) schema_error("expected a resource id", join("/deploy", task));
      s.deploy[task] = res.get<std::string>();
    }
  }
  if (const Json* arr = optional_array(j, "analytics", "")) {
    for (std::size_t i = 0; i < arr->size(); ++i) {
      s.analytics.push_back(parse_task((*arr)[i], join("/analytics", i)));
    }
  }
  if (const Json* arr = optional_array(j, "batches", "")) {
    for (std::size_t i = 0; i < arr->size(); ++i) s.batches.push_back(parse_batch((*arr)[i], join("/batches", i)));
  }
  if (const Json* arr = optional_array(j, "commands", "")) {
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const std::string p = join("/commands", i);
      ScriptedCommand sc;
      sc.at = wire::number((*arr)[i], "at", p);
      if (!(sc.at >= 0.0)) schema_error("command time must be >= 0", join(p, "at"));
      sc.command = parse_control_command((*arr)[i], p);
      s.commands.push_back(std::move(sc));
    }
  }
  if (const Json* arr = optional_array(j, "transition_table", "")) {
    s.transition_table = parse_table(*arr, "/transition_table");
  }
  s.validate();
  return s;
}

void Scenario::validate() const {
  if (name.empty()) schema_error("name must be non-empty", "/name");
  if (!(dt > 0.0)) schema_error("dt must be > 0", "/dt");
  if (!(duration_limit > 0.0)) schema_error("duration_limit must be > 0", "/duration_limit");
  if (!(landing_grace >= 0.0)) schema_error("landing_grace must be >= 0", "/landing_grace");
  if (!(time_scale > 0.0)) schema_error("time_scale must be > 0", "/time_scale");
  at_path("/drone", [&] { drone.validate(); });
  at_path("/takeoff_origin", [&] { daas::validate(takeoff_origin, "takeoff_origin"); });
  if (!SchedulerRegistry::instance().contains(scheduler)) {
    schema_error("unknown scheduler '" + scheduler + "'", "/scheduler");
  }

  std::map<std::string, sensing::SensorKind> sensor_kinds;
  for (std::size_t i = 0; i < sensors.size(); ++i) {
    if (!sensor_kinds.emplace(sensors[i].id, sensors[i].kind).second) {
      schema_error("duplicate sensor id '" + sensors[i].id + "'", join(join("/sensors", i), "id"));
    }
  }
  std::set<std::string> target_ids;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (!target_ids.insert(targets[i].id).second) {
      schema_error("duplicate target id '" + targets[i].id + "'", join(join("/targets", i), "id"));
    }
  }
  std::set<std::string> resource_ids;
  for (std::size_t i = 0; i < compute.size(); ++i) {
    if (!resource_ids.insert(compute[i].id).second) {
      schema_error("duplicate resource id '" + compute[i].id + "'", join(join("/compute", i), "id"));
    }
  }

  std::map<std::string, analytics::TaskKind> task_kinds;
  for (std::size_t i = 0; i < analytics.size(); ++i) {
    if (!task_kinds.emplace(analytics[i].id, analytics[i].kind).second) {
      schema_error("duplicate task id '" + analytics[i].id + "'", join(join("/analytics", i), "id"));
    }
  }
  for (std::size_t i = 0; i < analytics.size(); ++i) {
    const auto& t = analytics[i];
    const std::string p = join("/analytics", i);
    switch (t.kind) {
      case analytics::TaskKind::Detector:
      case analytics::TaskKind::Remote: {
        auto it = sensor_kinds.find(t.input);
        if (it == sensor_kinds.end() || it->second != sensing::SensorKind::Camera) {
          schema_error("detector input must name a camera sensor", join(p, "input"));
        }
        break;
      }
      case analytics::TaskKind::FollowController: {
        auto it = task_kinds.find(t.input);
        if (it == task_kinds.end() ||
            (it->second != analytics::TaskKind::Detector && it->second != analytics::TaskKind::Remote)) {
          schema_error("follow controller input must name a detector task", join(p, "input"));
        }
        if (t.follow_target.empty()) schema_error("follow controller needs a follow_target", join(p, "follow_target"));
        break;
      }
      case analytics::TaskKind::Monitor:
        if (!t.input.empty() && !sensor_kinds.contains(t.input)) {
          schema_error("monitor input must name a sensor", join(p, "input"));
        }
        break;
    }
    for (std::size_t b = 0; b < t.triggers.size(); ++b) {
      for (std::size_t a = 0; a < t.triggers[b].actions.size(); ++a) {
        const auto& action = t.triggers[b].actions[a];
        const std::string ap = join(join(join(join(p, "triggers"), b), "actions"), a);
        if (action.kind == analytics::ActionKind::LaunchTask && !task_kinds.contains(action.task)) {
          schema_error("launch_task names unknown task '" + action.task + "'", join(ap, "task"));
        }
        if (action.kind == analytics::ActionKind::SubmitBatch && pattern == MissionPattern::StaticPredefined) {
          schema_error("static_predefined missions cannot submit batches at runtime", join(ap, "kind"));
        }
      }
    }
  }
  for (const auto& [task, res] : deploy) {
    if (!task_kinds.contains(task)) schema_error("deploy names unknown task '" + task + "'", join("/deploy", task));
    if (!resource_ids.contains(res)) schema_error("deploy names unknown resource '" + res + "'", join("/deploy", task));
  }

  std::set<std::string> waypoint_ids;
  for (std::size_t i = 0; i < batches.size(); ++i) {
    at_path(join("/batches", i), [&] { daas::validate(batches[i]); });
    for (std::size_t w = 0; w < batches[i].waypoints.size(); ++w) {
      if (!waypoint_ids.insert(batches[i].waypoints[w].id).second) {
        schema_error("duplicate waypoint id '" + batches[i].waypoints[w].id + "'",
                     join(join(join(join("/batches", i), "waypoints"), w), "id"));
      }
    }
  }

  auto any_task = [&](auto pred) {
    for (const auto& t : analytics) {
      if (pred(t)) return true;
    }
    return false;
  };
  switch (pattern) {
    case MissionPattern::StaticPredefined:
    case MissionPattern::DynamicPredefined:
      if (batches.empty()) schema_error("a predefined mission needs at least one batch", "/batches");
      break;
    case MissionPattern::SensorDriven:
      if (!batches.empty()) schema_error("sensor_driven missions start with an empty queue", "/batches");
      if (!any_task([](const auto& t) {
            return t.kind == analytics::TaskKind::FollowController || !t.triggers.empty();
          })) {
        schema_error("sensor_driven missions need a follow controller or a triggering detector", "/analytics");
      }
      break;
    case MissionPattern::AnalyticsUpdate:
      if (!any_task([](const auto& t) {
            return has_action(t, analytics::ActionKind::SubmitBatch) || has_action(t, analytics::ActionKind::LaunchTask);
          })) {
        schema_error("analytics_update missions need a submit_batch or launch_task trigger", "/analytics");
      }
      break;
    case MissionPattern::AnalyticsAbort:
      if (!any_task([](const auto& t) { return has_action(t, analytics::ActionKind::ClearNavigation); })) {
        schema_error("analytics_abort missions need a clear_navigation trigger", "/analytics");
      }
      break;
  }
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::NotFound, "cannot open scenario file '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::Schema, std::string("malformed JSON: ") + e.what(), "/");
  }
  return parse_scenario(j);
}

}  // namespace daas::navigation
