#pragma once

#include <functional>

#include "mpp/geometry.hpp"

namespace mpp {

struct VehicleParams {
  double wheelbase = 0.22;       // front to rear axle [m]
  double rear_to_cg = 0.11;      // rear axle to center of gravity [m]
  double body_length = 0.26;     // footprint, centered at the CG [m]
  double body_width = 0.13;
};

/// Pose, speed and steering angle of the kinematic single-track model,
/// measured at the center of gravity. heading is kept in [0, 2*pi).
struct VehicleState {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;
  double speed = 0.0;
  double steering = 0.0;
};

struct ControlInput {
  double accel = 0.0;       // dv/dt [m/s^2]
  double steer_rate = 0.0;  // d(steering)/dt [rad/s]
};

double wrap_angle(double a);  // into [0, 2*pi)

/// Slip angle of the CG velocity against the heading. The CG sits between
/// the axles, so its velocity is rotated by beta relative to the body.
double slip_angle(const VehicleParams& p, double steering);

/// Time derivative of the state under input u.
VehicleState dynamics(const VehicleParams& p, const VehicleState& s,
                      const ControlInput& u);

/// Classic RK4 with fixed substeps; input may vary with time (sampled at
/// the RK4 stage times). substeps must give a step no coarser than 0.02 s
/// for the accuracy the planner relies on; callers pass >= 10 per 0.2 s.
VehicleState integrate(const VehicleParams& p, VehicleState s,
                       const std::function<ControlInput(double)>& input,
                       double duration, int substeps);

/// Turning circle radius of the CG at constant speed and steering.
double turning_radius(const VehicleParams& p, double steering);

/// Body rectangle at a pose, optionally inflated on all sides.
ConvexPolygon footprint(const VehicleParams& p, const VehicleState& s,
                        double inflation = 0.0);

}  // namespace mpp
