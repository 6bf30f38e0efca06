#pragma once

#include <cmath>
#include <vector>

namespace mpp {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  bool operator==(const Vec2&) const = default;
};

inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline Vec2 rotate(const Vec2& v, double angle);

/// Convex polygon, counter-clockwise vertex order, no duplicate or collinear
/// vertices. Produced by convex_hull; treated as a closed point set.
struct ConvexPolygon {
  std::vector<Vec2> vertices;
};

struct Aabb {
  double min_x = 0.0, min_y = 0.0, max_x = 0.0, max_y = 0.0;
};

Aabb bounding_box(const ConvexPolygon& p);

/// Strict separation test; touching boxes still count as overlapping so the
/// box prune never discards a closed-set contact.
bool boxes_overlap(const Aabb& a, const Aabb& b);

/// Andrew monotone chain. Collinear points are dropped. Degenerate input
/// (all points collinear) yields fewer than 3 vertices.
ConvexPolygon convex_hull(std::vector<Vec2> points);

/// Separating axis test for convex polygons as closed sets: sharing only a
/// boundary point already counts as intersecting.
bool polygons_intersect(const ConvexPolygon& a, const ConvexPolygon& b);

/// True iff a and b do not touch or overlap. Polygons with fewer than 3
/// vertices -> std::invalid_argument.
bool collision_free(const ConvexPolygon& a, const ConvexPolygon& b);

/// Rigid transform: rotate by angle, then translate.
ConvexPolygon transform(const ConvexPolygon& p, const Vec2& translation,
                        double angle);

/// Closed-set membership with tolerance tol >= 0 in the outward direction.
bool point_in_polygon(const ConvexPolygon& p, const Vec2& q, double tol = 1e-9);

inline Vec2 rotate(const Vec2& v, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {v.x * c - v.y * s, v.x * s + v.y * c};
}

}  // namespace mpp
