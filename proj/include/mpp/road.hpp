#pragma once

#include <vector>

#include "mpp/geometry.hpp"

namespace mpp {

struct PathPose {
  Vec2 position;
  double heading = 0.0;  // [0, 2pi)
};

/// Closed lane centerline, sampled at uniform arc-length spacing. Poses
/// between samples are interpolated, so arc positions map continuously
/// onto the plane; s wraps modulo the total length.
class LanePath {
 public:
  /// samples must trace the closed loop in driving order; spacing is the
  /// arc length between consecutive samples (and from the last sample
  /// back to the first). Fewer than 3 samples -> std::invalid_argument.
  LanePath(std::vector<PathPose> samples, double spacing);

  double length() const { return spacing_ * static_cast<double>(samples_.size()); }
  double spacing() const { return spacing_; }
  const std::vector<PathPose>& samples() const { return samples_; }

  PathPose pose_at(double s) const;

  /// Arc position of the closest centerline point to `position` within
  /// [s_from, s_from + window]. Searching only forward keeps the tracked
  /// progress monotone even where the path crosses itself.
  double advance(double s_from, const Vec2& position, double window) const;

 private:
  std::vector<PathPose> samples_;
  double spacing_;
};

/// Circle of the given radius, traversed counterclockwise, starting at
/// angle `phase` (position center + r*(cos, sin)).
LanePath circle_path(const Vec2& center, double radius, double phase = 0.0,
                     double spacing = 0.01);

/// Two tangent circles traced as an eight: the right lobe clockwise, then
/// the left lobe counterclockwise, crossing at `center` heading +y.
LanePath figure_eight_path(const Vec2& center, double radius,
                           double spacing = 0.01);

/// Keep-out fence along both sides of the lane: square posts centered at
/// lateral offset (lane_width/2 + post_half) every `spacing` meters of arc
/// length. post_half >= spacing makes the fence gap-free.
std::vector<ConvexPolygon> corridor_walls(const LanePath& path,
                                          double lane_width, double post_half,
                                          double spacing);

}  // namespace mpp
