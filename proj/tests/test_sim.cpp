#include <doctest.h>

#include <cmath>

#include "daas/core/error.hpp"
#include "daas/sim/world.hpp"

using namespace daas;
using namespace daas::sim;

namespace {

constexpr double kDt = 0.05;

SimWorld airborne_world(std::vector<TargetTrack> targets = {}) {
  SimWorld w(DroneModel{}, kDt, 1, Position3(0, 0, 0), std::move(targets));
  w.arm();
  w.takeoff(1.5);
  while (w.phase() != FlightPhase::Flying) w.step(kDt);
  return w;
}

int steps_until_arrival(SimWorld& w, int limit = 100000) {
  for (int i = 1; i <= limit; ++i) {
    if (w.step(kDt).arrived) return i;
  }
  return -1;
}

}  // namespace

TEST_CASE("takeoff climbs at the vertical limit and reports completion once") {
  SimWorld w(DroneModel{}, kDt, 1, Position3(0, 0, 0));
  CHECK_THROWS_AS(w.command_goto(Position3(1, 1, 1)), Error);
  w.arm();
  w.takeoff(1.5);
  int completions = 0;
  int steps = 0;
  while (w.phase() != FlightPhase::Flying) {
    completions += w.step(kDt).takeoff_complete ? 1 : 0;
    ++steps;
  }
  CHECK(completions == 1);
  CHECK(steps == 30);  // 1.5 m at 1.0 m/s
  CHECK(w.pose().z() == doctest::Approx(1.5));
  CHECK(w.clock() == doctest::Approx(1.5));
}

TEST_CASE("horizontal and vertical speed limits are applied independently") {
  SimWorld w = airborne_world();
  w.command_goto(Position3(30, 40, 11.5));
  double max_h = 0.0;
  double max_v = 0.0;
  Position3 last = w.pose();
  for (int i = 0; i < 200; ++i) {
    w.step(kDt);
    const Position3 d = w.pose() - last;
    max_h = std::max(max_h, std::hypot(d.x(), d.y()) / kDt);
    max_v = std::max(max_v, std::abs(d.z()) / kDt);
    last = w.pose();
  }
  CHECK(max_h <= 1.5 + 1e-9);
  CHECK(max_v <= 1.0 + 1e-9);
  CHECK(max_h == doctest::Approx(1.5));
  CHECK(max_v == doctest::Approx(1.0));
}

TEST_CASE("arrival fires once within epsilon at the expected time") {
  SimWorld w = airborne_world();
  w.command_goto(Position3(15, 0, 1.5));
  const int steps = steps_until_arrival(w);
  // 15 m at 1.5 m/s; the event fires once within 0.2 m of the goal.
  CHECK(steps == static_cast<int>(std::ceil((15.0 - 0.2) / (1.5 * kDt))));
  CHECK(std::abs(w.pose().x() - 15.0) <= 0.2);
  CHECK(steps_until_arrival(w, 50) == -1);
}

TEST_CASE("velocity mode integrates the clamped command") {
  SimWorld w = airborne_world();
  w.command_velocity(Velocity3(3, 0, 0));
  CHECK(w.velocity_setpoint().x() == doctest::Approx(1.5));
  for (int i = 0; i < 20; ++i) w.step(kDt);
  CHECK(w.pose().x() == doctest::Approx(1.5));
  CHECK(w.heading() == doctest::Approx(0.0));
}

TEST_CASE("a yaw setpoint overrides the motion heading in velocity mode") {
  SimWorld w = airborne_world();
  w.command_velocity(Velocity3(1, 0, 0), M_PI / 2);
  w.step(kDt);
  CHECK(w.heading() == doctest::Approx(M_PI / 2));
  w.command_velocity(Velocity3(0, 0, 0), -M_PI / 4);
  w.step(kDt);
  CHECK(w.heading() == doctest::Approx(-M_PI / 4));
  w.command_goto(Position3(w.pose().x() - 5, w.pose().y(), 1.5));
  w.step(kDt);
  CHECK(std::abs(w.heading()) == doctest::Approx(M_PI));
  CHECK_THROWS_AS(w.command_velocity(Velocity3::Zero(), std::nan("")), Error);
}

TEST_CASE("hold freezes the pose") {
  SimWorld w = airborne_world();
  w.command_goto(Position3(10, 0, 1.5));
  for (int i = 0; i < 10; ++i) w.step(kDt);
  w.hold();
  const Position3 held = w.pose();
  for (int i = 0; i < 40; ++i) w.step(kDt);
  CHECK((w.pose() - held).norm() == doctest::Approx(0.0));
}

TEST_CASE("landing descends to the ground and reports touchdown") {
  SimWorld w = airborne_world();
  w.land();
  bool touchdown = false;
  for (int i = 0; i < 100 && !touchdown; ++i) touchdown = w.step(kDt).touchdown;
  CHECK(touchdown);
  CHECK(w.phase() == FlightPhase::Landed);
  CHECK(w.pose().z() == 0.0);
  CHECK_THROWS_AS(w.command_goto(Position3(1, 1, 1)), Error);
}

TEST_CASE("battery drains faster while moving and forces a landing at zero") {
  DroneModel model;
  model.battery_capacity = 1.0;
  model.hover_drain = 0.5;
  model.move_drain = 1.0;
  SimWorld w(model, kDt, 1, Position3(0, 0, 0));
  w.arm();
  w.takeoff(1.5);
  double last = w.battery();
  bool forced = false;
  for (int i = 0; i < 200 && !forced; ++i) {
    forced = w.step(kDt).forced_landing;
    CHECK(w.battery() <= last);
    last = w.battery();
  }
  CHECK(forced);
  CHECK(w.battery() == 0.0);
  CHECK(w.phase() == FlightPhase::Descending);
}

TEST_CASE("targets follow their paths at the configured speeds") {
  TargetTrack walker{"walker", {{Position3(0, 0, 0), 1.0}, {Position3(10, 0, 0), 0.5}}, false, 0.0, true};
  TargetTrack looper{"looper",
                     {{Position3(0, 0, 0), 1.0}, {Position3(2, 0, 0), 1.0}, {Position3(2, 2, 0), 1.0}},
                     true, 0.0, false};
  TargetTrack late{"late", {{Position3(0, 0, 0), 1.0}, {Position3(5, 0, 0), 1.0}}, false, 2.0, false};
  SimWorld w(DroneModel{}, kDt, 1, Position3(0, 0, 0), {walker, looper, late});
  for (int i = 0; i < 80; ++i) w.step(kDt);  // 4 s
  CHECK(w.find_target("walker")->position.x() == doctest::Approx(2.0));
  CHECK(w.find_target("late")->position.x() == doctest::Approx(2.0));
  const Position3 lp = w.find_target("looper")->position;
  CHECK(lp.x() == doctest::Approx(2.0));
  CHECK(lp.y() == doctest::Approx(2.0));
  CHECK(w.find_target("nobody") == nullptr);

  for (int i = 0; i < 400; ++i) w.step(kDt);  // 24 s
  CHECK_FALSE(w.find_target("walker")->present);
  CHECK(w.find_target("late")->position.x() == doctest::Approx(5.0));
}

TEST_CASE("the clock advances in exact decimal steps") {
  SimWorld w(DroneModel{}, kDt, 1, Position3(0, 0, 0));
  for (int i = 0; i < 508; ++i) w.step(kDt);
  CHECK(w.clock() == 25.4);
  CHECK(w.tick() == 508u);
  CHECK_THROWS_AS(w.step(0.1), Error);
}
