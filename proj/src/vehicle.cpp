#include "mpp/vehicle.hpp"

#include <cmath>
#include <stdexcept>

namespace mpp {

double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * M_PI;
  a = std::fmod(a, two_pi);
  if (a < 0.0) a += two_pi;
  return a;
}

double slip_angle(const VehicleParams& p, double steering) {
  return std::atan(p.rear_to_cg / p.wheelbase * std::tan(steering));
}

VehicleState dynamics(const VehicleParams& p, const VehicleState& s,
                      const ControlInput& u) {
  const double beta = slip_angle(p, s.steering);
  VehicleState d;
  d.x = s.speed * std::cos(s.heading + beta);
  d.y = s.speed * std::sin(s.heading + beta);
  d.heading = s.speed / p.wheelbase * std::tan(s.steering) * std::cos(beta);
  d.speed = u.accel;
  d.steering = u.steer_rate;
  return d;
}

namespace {

VehicleState axpy(const VehicleState& s, double h, const VehicleState& d) {
  return {s.x + h * d.x, s.y + h * d.y, s.heading + h * d.heading,
          s.speed + h * d.speed, s.steering + h * d.steering};
}

}  // namespace

VehicleState integrate(const VehicleParams& p, VehicleState s,
                       const std::function<ControlInput(double)>& input,
                       double duration, int substeps) {
  if (substeps < 1) throw std::invalid_argument("need at least one substep");
  const double h = duration / substeps;
  double t = 0.0;
  for (int i = 0; i < substeps; ++i) {
    // Heading stays unwrapped inside the loop; the trig terms do not care
    // and wrapping mid-integration would corrupt the stage combinations.
    const VehicleState k1 = dynamics(p, s, input(t));
    const VehicleState k2 = dynamics(p, axpy(s, h / 2, k1), input(t + h / 2));
    const VehicleState k3 = dynamics(p, axpy(s, h / 2, k2), input(t + h / 2));
    const VehicleState k4 = dynamics(p, axpy(s, h, k3), input(t + h));
    s.x += h / 6 * (k1.x + 2 * k2.x + 2 * k3.x + k4.x);
    s.y += h / 6 * (k1.y + 2 * k2.y + 2 * k3.y + k4.y);
    s.heading += h / 6 * (k1.heading + 2 * k2.heading + 2 * k3.heading + k4.heading);
    s.speed += h / 6 * (k1.speed + 2 * k2.speed + 2 * k3.speed + k4.speed);
    s.steering +=
        h / 6 * (k1.steering + 2 * k2.steering + 2 * k3.steering + k4.steering);
    t += h;
  }
  s.heading = wrap_angle(s.heading);
  return s;
}

double turning_radius(const VehicleParams& p, double steering) {
  if (steering == 0.0)
    throw std::invalid_argument("straight motion has no turning circle");
  const double beta = slip_angle(p, steering);
  return p.wheelbase / (std::tan(steering) * std::cos(beta));
}

ConvexPolygon footprint(const VehicleParams& p, const VehicleState& s,
                        double inflation) {
  const double hl = p.body_length / 2 + inflation;
  const double hw = p.body_width / 2 + inflation;
  ConvexPolygon box{{{-hl, -hw}, {hl, -hw}, {hl, hw}, {-hl, hw}}};
  return transform(box, {s.x, s.y}, s.heading);
}

}  // namespace mpp
