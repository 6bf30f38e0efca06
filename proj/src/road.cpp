#include "mpp/road.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "mpp/vehicle.hpp"

namespace mpp {

LanePath::LanePath(std::vector<PathPose> samples, double spacing)
    : samples_(std::move(samples)), spacing_(spacing) {
  if (samples_.size() < 3)
    throw std::invalid_argument("a lane path needs at least 3 samples");
  if (spacing_ <= 0.0)
    throw std::invalid_argument("sample spacing must be positive");
}

PathPose LanePath::pose_at(double s) const {
  const double len = length();
  s = std::fmod(s, len);
  if (s < 0.0) s += len;
  const std::size_t n = samples_.size();
  const double u = s / spacing_;
  const std::size_t i = static_cast<std::size_t>(u) % n;
  const std::size_t j = (i + 1) % n;
  const double t = u - std::floor(u);

  const PathPose& a = samples_[i];
  const PathPose& b = samples_[j];
  PathPose out;
  out.position = {a.position.x + (b.position.x - a.position.x) * t,
                  a.position.y + (b.position.y - a.position.y) * t};
  // Interpolate headings along the shorter arc.
  double dh = b.heading - a.heading;
  if (dh > M_PI) dh -= 2.0 * M_PI;
  if (dh < -M_PI) dh += 2.0 * M_PI;
  out.heading = wrap_angle(a.heading + dh * t);
  return out;
}

double LanePath::advance(double s_from, const Vec2& position,
                         double window) const {
  double best_s = s_from;
  double best_d = std::numeric_limits<double>::infinity();
  // Candidates at sample resolution, then one refinement pass around the
  // winner at a tenth of the spacing.
  for (double s = s_from; s <= s_from + window; s += spacing_) {
    const Vec2 p = pose_at(s).position;
    const double d = (p.x - position.x) * (p.x - position.x) +
                     (p.y - position.y) * (p.y - position.y);
    if (d < best_d) {
      best_d = d;
      best_s = s;
    }
  }
  const double coarse = best_s;
  for (double s = coarse - spacing_; s <= coarse + spacing_;
       s += spacing_ / 10.0) {
    if (s < s_from || s > s_from + window) continue;
    const Vec2 p = pose_at(s).position;
    const double d = (p.x - position.x) * (p.x - position.x) +
                     (p.y - position.y) * (p.y - position.y);
    if (d < best_d) {
      best_d = d;
      best_s = s;
    }
  }
  return best_s;
}

LanePath circle_path(const Vec2& center, double radius, double phase,
                     double spacing) {
  if (radius <= 0.0) throw std::invalid_argument("radius must be positive");
  const double circumference = 2.0 * M_PI * radius;
  const int n = std::max(8, static_cast<int>(std::round(circumference / spacing)));
  const double step = circumference / n;
  std::vector<PathPose> samples;
  samples.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double ang = phase + 2.0 * M_PI * i / n;
    samples.push_back({{center.x + radius * std::cos(ang),
                        center.y + radius * std::sin(ang)},
                       wrap_angle(ang + M_PI / 2.0)});
  }
  return LanePath(std::move(samples), step);
}

LanePath figure_eight_path(const Vec2& center, double radius, double spacing) {
  if (radius <= 0.0) throw std::invalid_argument("radius must be positive");
  const double circumference = 2.0 * M_PI * radius;
  const int n = std::max(8, static_cast<int>(std::round(circumference / spacing)));
  const double step = circumference / n;
  std::vector<PathPose> samples;
  samples.reserve(2 * n);
  // Right lobe, clockwise, starting at the crossing point heading +y.
  for (int i = 0; i < n; ++i) {
    const double ang = M_PI - 2.0 * M_PI * i / n;
    samples.push_back({{center.x + radius + radius * std::cos(ang),
                        center.y + radius * std::sin(ang)},
                       wrap_angle(ang - M_PI / 2.0)});
  }
  // Left lobe, counterclockwise, re-entering the crossing heading +y.
  for (int i = 0; i < n; ++i) {
    const double ang = 2.0 * M_PI * i / n;
    samples.push_back({{center.x - radius + radius * std::cos(ang),
                        center.y + radius * std::sin(ang)},
                       wrap_angle(ang + M_PI / 2.0)});
  }
  return LanePath(std::move(samples), step);
}

std::vector<ConvexPolygon> corridor_walls(const LanePath& path,
                                          double lane_width, double post_half,
                                          double spacing) {
  if (lane_width <= 0.0 || post_half <= 0.0 || spacing <= 0.0)
    throw std::invalid_argument("wall dimensions must be positive");
  std::vector<ConvexPolygon> walls;
  const double offset = lane_width / 2.0 + post_half;
  for (double s = 0.0; s < path.length(); s += spacing) {
    const PathPose pose = path.pose_at(s);
    const Vec2 normal{-std::sin(pose.heading), std::cos(pose.heading)};
    for (const double side : {1.0, -1.0}) {
      const Vec2 c{pose.position.x + side * offset * normal.x,
                   pose.position.y + side * offset * normal.y};
      walls.push_back({{{c.x - post_half, c.y - post_half},
                        {c.x + post_half, c.y - post_half},
                        {c.x + post_half, c.y + post_half},
                        {c.x - post_half, c.y + post_half}}});
    }
  }
  return walls;
}

}  // namespace mpp
