#include <doctest.h>

#include <fstream>
#include <sstream>
#include <thread>

#include "daas/cli/runner.hpp"
#include "daas/controlplane/http_server.hpp"
#include "daas/controlplane/service.hpp"
#include "daas/core/error.hpp"
#include "daas/core/wire.hpp"
#include "oracles.hpp"

// After the project headers: <resolv.h> defines a _res macro that breaks Eigen.
#include <httplib.h>

using namespace daas;
using namespace daas::controlplane;
using namespace std::chrono_literals;
namespace t = daas::testing;

namespace {

Json scenario_json(const std::string& name) {
  std::ifstream in(t::scenario_path(name));
  return Json::parse(in);
}

Json realtime(const std::string& name, double time_scale) {
  Json j = scenario_json(name);
  j["pacing"] = "realtime";
  j["time_scale"] = time_scale;
  return j;
}

std::vector<std::string> split_lines(const std::string& body) {
  std::vector<std::string> out;
  std::istringstream in(body);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

OverheadSample sample(double total, double inference) { return OverheadSample{0.0, "det", total, inference}; }

// HTTP fixture: a service and a server on an ephemeral port.
struct Server {
  MissionService service;
  HttpServer http{service};
  int port = http.start("127.0.0.1", 0);
  httplib::Client client{"127.0.0.1", port};

  Server() { client.set_read_timeout(30, 0); }
  ~Server() {
    http.stop();
    service.shutdown();
  }

  Json get(const std::string& path, int expected = 200) {
    auto res = client.Get(path);
    REQUIRE(res);
    CHECK(res->status == expected);
    return Json::parse(res->body);
  }

  Json post(const std::string& path, const Json& body, int expected) {
    auto res = client.Post(path, body.dump(), "application/json");
    REQUIRE(res);
    CHECK(res->status == expected);
    return Json::parse(res->body);
  }

  std::string start(const Json& scenario) { return post("/missions", scenario, 201)["mission_id"]; }

  Json wait_for_state(const std::string& id, const std::string& state, std::chrono::milliseconds limit = 20s) {
    const auto deadline = std::chrono::steady_clock::now() + limit;
    Json view;
    do {
      view = get("/missions/" + id + "/state");
      if (view["state"] == state) return view;
      std::this_thread::sleep_for(20ms);
    } while (std::chrono::steady_clock::now() < deadline);
    FAIL("state " << state << " not reached; last " << view.dump());
    return view;
  }
};

Json inject(std::vector<std::tuple<std::string, double, double>> wps, int priority = 2) {
  Json list = Json::array();
  for (const auto& [id, x, y] : wps) list.push_back(Json{{"id", id}, {"x", x}, {"y", y}, {"z", 10}});
  return Json{{"kind", "inject_batch"},
              {"payload", {{"nav_type", "distance_driven"}, {"priority", priority}, {"waypoints", list}}}};
}

}  // namespace

// ---- service ----

TEST_CASE("overhead statistics use the median and nearest-rank p95") {
  std::vector<OverheadSample> samples;
  for (int i = 1; i <= 200; ++i) samples.push_back(sample(i + 5.0, 5.0));
  const auto r = overhead_report(samples);
  CHECK(r.frames == 200);
  CHECK(r.median_ms == doctest::Approx(100.5));
  CHECK(r.p95_ms == doctest::Approx(190.0));
  try {
    overhead_report(std::span(samples).first(99));
    FAIL("report produced below the minimum");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotReady);
  }
  CHECK(overhead_report(std::span(samples).first(3), 1).median_ms == doctest::Approx(2.0));
}

TEST_CASE("event log subscribers each see every line in order") {
  auto log = std::make_shared<EventLog>();
  Subscription early(log);
  log->append("a");
  log->append("b");
  Subscription late(log);
  CHECK(early.next(10ms) == std::optional<std::string>("a"));
  std::thread writer([&] {
    std::this_thread::sleep_for(20ms);
    log->append("c");
    log->close();
  });
  std::vector<std::string> got_late;
  while (auto line = late.next(1s)) got_late.push_back(*line);
  writer.join();
  CHECK(late.ended());
  CHECK(got_late == std::vector<std::string>{"a", "b", "c"});
  CHECK(early.next(10ms) == std::optional<std::string>("b"));
  CHECK(early.next(10ms) == std::optional<std::string>("c"));
  CHECK_FALSE(early.next(10ms).has_value());
  CHECK(early.ended());
  log->append("ignored");
  CHECK(log->size() == 3);
}

TEST_CASE("service traces match an in-process run") {
  MissionService service;
  const auto h = service.start_mission(t::load("disaster_survey"));
  CHECK(h.mission_id == "m1");
  REQUIRE(service.wait(h.mission_id, 30s));
  CHECK(service.get_state(h.mission_id).status == MissionStatus::Completed);
  CHECK(service.trace(h.mission_id) == cli::simulate(t::load("disaster_survey")).trace);

  try {
    service.overhead_report(h.mission_id);
    FAIL("overhead without camera frames");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotReady);
  }
  auto ack = service.submit_command(h.mission_id, navigation::ControlCommand{navigation::CommandKind::Pause, {}, 0});
  CHECK_FALSE(ack.get().accepted);
  CHECK_THROWS_AS(service.get_state("m99"), Error);
}

TEST_CASE("bad scenario documents are rejected with a path") {
  MissionService service;
  Json j = scenario_json("farm_survey");
  j["seed"] = "random";
  try {
    service.start_mission(j);
    FAIL("bad seed accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Schema);
    CHECK(e.path() == "/seed");
  }
  CHECK(service.list().empty());
}

TEST_CASE("trace files are written when a directory is configured") {
  const auto dir = std::filesystem::temp_directory_path() / "daas_service_traces";
  std::filesystem::create_directories(dir);
  {
    MissionService service(ServiceOptions{dir});
    const auto h = service.start_mission(t::load("farm_survey"));
    service.wait(h.mission_id, 30s);
    service.shutdown();
    std::ifstream in(dir / (h.mission_id + ".ndjson"));
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(split_lines(ss.str()) == service.trace(h.mission_id));
  }
  std::filesystem::remove_all(dir);
}

// ---- HTTP ----

TEST_CASE("a new mission reports running and exposes its queue") {
  Server s;
  const Json created = s.post("/missions", realtime("farm_survey", 0.2), 201);
  CHECK(created["status"] == "running");
  const std::string id = created["mission_id"];
  const Json state = s.get("/missions/" + id + "/state");
  CHECK(state["status"] == "running");
  CHECK(state["state"] == "taking_off");
  const Json queue = s.get("/missions/" + id + "/queue");
  REQUIRE(queue["entries"].size() == 4);
  for (const auto& e : queue["entries"]) CHECK(e["priority"] == 2);
  CHECK(queue["size"] == 4);

  const Json list = s.get("/missions");
  REQUIRE(list.size() == 1);
  CHECK(list[0]["scenario"] == "farm_survey");
}

TEST_CASE("unknown missions and malformed bodies") {
  Server s;
  CHECK(s.get("/missions/m404/state", 404)["error"] == "not_found");
  s.get("/missions/m404/queue", 404);
  s.post("/missions/m404/commands", Json{{"kind", "pause"}}, 404);

  auto res = s.client.Post("/missions", "{", "application/json");
  REQUIRE(res);
  CHECK(res->status == 400);

  Json bad = scenario_json("farm_survey");
  bad["batches"][0]["waypoints"][0]["z"] = "high";
  const Json err = s.post("/missions", bad, 400);
  CHECK(err["error"] == "schema");
  CHECK(err["path"] == "/batches/0/waypoints/0/z");

  Json unplaceable = scenario_json("vip_follow");
  unplaceable["placement_policy"] = "edge_only";
  unplaceable["compute"] = Json::array({Json{{"id", "tiny"}, {"tier", "edge"}, {"capacity", 1},
                                             {"inference_latency", {{"detector", 0.03}}}}});
  s.post("/missions", unplaceable, 422);

  const std::string id = s.start(realtime("farm_survey", 0.2));
  s.post("/missions/" + id + "/commands", Json{{"kind", "warp"}}, 400);
}

TEST_CASE("injection grows a dynamic mission's queue and is refused for a static one") {
  Server s;
  const std::string dynamic = s.start(realtime("disaster_survey", 0.2));
  const std::size_t before = s.get("/missions/" + dynamic + "/queue")["size"];
  const Json ack = s.post("/missions/" + dynamic + "/commands",
                          inject({{"x1", 30, 50}, {"x2", 35, 55}, {"x3", 40, 50}}), 200);
  CHECK(ack["accepted"] == true);
  CHECK(s.get("/missions/" + dynamic + "/queue")["size"] == before + 3);

  s.post("/missions/" + dynamic + "/commands", inject({{"x1", 1, 1}}), 409);

  const std::string fixed = s.start(realtime("farm_survey", 0.2));
  const Json refused = s.post("/missions/" + fixed + "/commands", inject({{"y1", 30, 50}}), 409);
  CHECK(refused["accepted"] == false);
  CHECK(refused.contains("reason"));
  CHECK(s.get("/missions/" + fixed + "/queue")["size"] == 4);
}

TEST_CASE("pause holds position, resume continues and abort lands") {
  Server s;
  const std::string id = s.start(realtime("disaster_survey", 4.0));
  s.wait_for_state(id, "en_route");
  CHECK(s.post("/missions/" + id + "/commands", Json{{"kind", "pause"}}, 200)["accepted"] == true);
  const Json a = s.get("/missions/" + id + "/state");
  CHECK(a["state"] == "paused");
  std::this_thread::sleep_for(500ms);
  const Json b = s.get("/missions/" + id + "/state");
  CHECK(b["sim_time"].get<double>() > a["sim_time"].get<double>());
  const double dx = b["pose"]["x"].get<double>() - a["pose"]["x"].get<double>();
  const double dy = b["pose"]["y"].get<double>() - a["pose"]["y"].get<double>();
  const double dz = b["pose"]["z"].get<double>() - a["pose"]["z"].get<double>();
  CHECK(std::sqrt(dx * dx + dy * dy + dz * dz) <= 0.2);

  CHECK(s.post("/missions/" + id + "/commands", Json{{"kind", "resume"}}, 200)["accepted"] == true);
  s.wait_for_state(id, "en_route");
  CHECK(s.post("/missions/" + id + "/commands", Json{{"kind", "abort"}}, 200)["accepted"] == true);
  CHECK(s.get("/missions/" + id + "/queue")["size"] == 0);
  REQUIRE(s.service.wait(id, 60s));
  const Json end = s.get("/missions/" + id + "/state");
  CHECK(end["status"] == "aborted");
  CHECK(end["state"] == "landed");

  bool saw_aborted = false;
  bool saw_landing = false;
  for (const auto& line : s.service.trace(id)) {
    const Json j = Json::parse(line);
    if (j["type"] != "state") continue;
    saw_aborted |= j["to_state"] == "aborted";
    saw_landing |= saw_aborted && j["to_state"] == "landing";
  }
  CHECK(saw_landing);
}

TEST_CASE("telemetry replays finished missions and fans out to concurrent clients") {
  Server s;
  const std::string done = s.start(scenario_json("farm_survey"));
  REQUIRE(s.service.wait(done, 30s));
  auto res = s.client.Get("/missions/" + done + "/telemetry");
  REQUIRE(res);
  CHECK(res->status == 200);
  CHECK(res->get_header_value("Content-Type") == "application/x-ndjson");
  CHECK(split_lines(res->body) == s.service.trace(done));

  const std::string live = s.start(realtime("farm_survey", 40.0));
  std::string body_a;
  std::string body_b;
  std::thread a([&] {
    httplib::Client c("127.0.0.1", s.port);
    c.set_read_timeout(60, 0);
    if (auto r = c.Get("/missions/" + live + "/telemetry")) body_a = r->body;
  });
  std::this_thread::sleep_for(300ms);
  std::thread b([&] {
    httplib::Client c("127.0.0.1", s.port);
    c.set_read_timeout(60, 0);
    if (auto r = c.Get("/missions/" + live + "/telemetry")) body_b = r->body;
  });
  a.join();
  b.join();
  CHECK_FALSE(body_a.empty());
  CHECK(body_a == body_b);
  CHECK(split_lines(body_a) == s.service.trace(live));
}

TEST_CASE("overhead endpoint") {
  Server s;
  const std::string none = s.start(scenario_json("farm_survey"));
  s.service.wait(none, 30s);
  CHECK(s.get("/missions/" + none + "/overhead", 409)["error"] == "not_ready");

  const std::string cam = s.start(scenario_json("vip_follow"));
  REQUIRE(s.service.wait(cam, 60s));
  const Json full = s.get("/missions/" + cam + "/overhead");
  CHECK(full["frames"].get<std::size_t>() >= 1000);
  CHECK(full["samples"].size() == full["frames"].get<std::size_t>());
  CHECK(full["p95_ms"].get<double>() >= full["median_ms"].get<double>());
  CHECK_FALSE(s.get("/missions/" + cam + "/overhead?samples=false").contains("samples"));
}

TEST_CASE("cross-origin preflight") {
  Server s;
  auto res = s.client.Options("/missions");
  REQUIRE(res);
  CHECK(res->status == 204);
  CHECK(res->get_header_value("Access-Control-Allow-Origin") == "*");
}
