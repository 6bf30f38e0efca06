#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mpp/vehicle.hpp"

using namespace mpp;

namespace {
const VehicleParams params{};  // wheelbase 0.22, CG centered at 0.11
}

TEST_CASE("slip angle vanishes for straight steering") {
  CHECK(slip_angle(params, 0.0) == 0.0);
  // CG halfway between the axles: tan(beta) = tan(delta) / 2.
  const double delta = 0.2;
  CHECK(slip_angle(params, delta) ==
        doctest::Approx(std::atan(std::tan(delta) / 2)).epsilon(1e-12));
}

TEST_CASE("standstill is an equilibrium") {
  const VehicleState s{1.0, 2.0, 0.7, 0.0, 0.1};
  const VehicleState d = dynamics(params, s, {0.0, 0.0});
  CHECK(d.x == 0.0);
  CHECK(d.y == 0.0);
  CHECK(d.heading == 0.0);
  const VehicleState after =
      integrate(params, s, [](double) { return ControlInput{}; }, 1.0, 10);
  CHECK(after.x == s.x);
  CHECK(after.y == s.y);
  CHECK(after.speed == 0.0);
}

TEST_CASE("zero steering drives an exact straight line") {
  const double heading = 0.3;
  VehicleState s{0.0, 0.0, heading, 1.0, 0.0};
  s = integrate(params, s, [](double) { return ControlInput{}; }, 1.0, 10);
  CHECK(std::abs(s.x - std::cos(heading)) < 1e-9);
  CHECK(std::abs(s.y - std::sin(heading)) < 1e-9);
  CHECK(s.heading == doctest::Approx(heading).epsilon(1e-12));
  CHECK(s.speed == doctest::Approx(1.0));
}

TEST_CASE("constant steering tracks the analytic circle") {
  // Closed form: with omega = v tan(delta) cos(beta) / L constant,
  //   x(t) = R (sin(omega t + beta) - sin(beta))
  //   y(t) = -R (cos(omega t + beta) - cos(beta))
  // where R = v / omega is the CG turning radius.
  const double v = 1.0, delta = 0.2, duration = 1.0;
  const double beta = slip_angle(params, delta);
  const double omega =
      v * std::tan(delta) * std::cos(beta) / params.wheelbase;
  const double radius = v / omega;
  CHECK(radius == doctest::Approx(turning_radius(params, delta)).epsilon(1e-12));

  VehicleState s{0.0, 0.0, 0.0, v, delta};
  s = integrate(params, s, [](double) { return ControlInput{}; }, duration, 50);
  const double x_ref = radius * (std::sin(omega * duration + beta) - std::sin(beta));
  const double y_ref = -radius * (std::cos(omega * duration + beta) - std::cos(beta));
  const double travel = v * duration;
  CHECK(std::abs(s.x - x_ref) / travel < 1e-6);
  CHECK(std::abs(s.y - y_ref) / travel < 1e-6);
  CHECK(std::abs(s.heading - wrap_angle(omega * duration)) < 1e-6);
}

TEST_CASE("turning radius rejects straight motion") {
  CHECK_THROWS_AS(turning_radius(params, 0.0), std::invalid_argument);
}

TEST_CASE("inputs integrate into speed and steering") {
  VehicleState s{0.0, 0.0, 0.0, 0.0, 0.0};
  s = integrate(params, s, [](double) { return ControlInput{2.0, 0.5}; }, 0.2, 10);
  CHECK(s.speed == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(s.steering == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("heading wraps into [0, 2pi)") {
  CHECK(wrap_angle(0.0) == 0.0);
  CHECK(wrap_angle(2 * M_PI) == 0.0);
  CHECK(wrap_angle(-0.1) == doctest::Approx(2 * M_PI - 0.1));
  CHECK(wrap_angle(7.0) == doctest::Approx(7.0 - 2 * M_PI));
  VehicleState s{0.0, 0.0, 6.2, 1.0, 0.3};
  s = integrate(params, s, [](double) { return ControlInput{}; }, 1.0, 20);
  CHECK(s.heading >= 0.0);
  CHECK(s.heading < 2 * M_PI);
}

TEST_CASE("footprint is the body rectangle at the pose") {
  const VehicleState s{1.0, 1.0, 0.0, 0.0, 0.0};
  const ConvexPolygon fp = footprint(params, s);
  REQUIRE(fp.vertices.size() == 4);
  CHECK(fp.vertices[0].x == doctest::Approx(1.0 - params.body_length / 2));
  CHECK(fp.vertices[0].y == doctest::Approx(1.0 - params.body_width / 2));
  const ConvexPolygon inflated = footprint(params, s, 0.05);
  CHECK(inflated.vertices[0].x == doctest::Approx(fp.vertices[0].x - 0.05));
}
