#include "mpp/geometry.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace mpp {

Aabb bounding_box(const ConvexPolygon& p) {
  Aabb box{std::numeric_limits<double>::max(), std::numeric_limits<double>::max(),
           std::numeric_limits<double>::lowest(),
           std::numeric_limits<double>::lowest()};
  for (const Vec2& v : p.vertices) {
    box.min_x = std::min(box.min_x, v.x);
    box.min_y = std::min(box.min_y, v.y);
    box.max_x = std::max(box.max_x, v.x);
    box.max_y = std::max(box.max_y, v.y);
  }
  return box;
}

bool boxes_overlap(const Aabb& a, const Aabb& b) {
  return !(a.max_x < b.min_x || b.max_x < a.min_x || a.max_y < b.min_y ||
           b.max_y < a.min_y);
}

ConvexPolygon convex_hull(std::vector<Vec2> points) {
  std::sort(points.begin(), points.end(), [](const Vec2& a, const Vec2& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  points.erase(std::unique(points.begin(), points.end()), points.end());
  const std::size_t n = points.size();
  if (n < 3) return {points};

  std::vector<Vec2> hull(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {  // lower chain
    while (k >= 2 &&
           cross(hull[k - 1] - hull[k - 2], points[i] - hull[k - 2]) <= 0)
      --k;
    hull[k++] = points[i];
  }
  for (std::size_t i = n - 1, lower = k + 1; i-- > 0;) {  // upper chain
    while (k >= lower &&
           cross(hull[k - 1] - hull[k - 2], points[i] - hull[k - 2]) <= 0)
      --k;
    hull[k++] = points[i];
  }
  hull.resize(k - 1);
  return {hull};
}

namespace {

// Strictly separating axis normal to one edge of `a`, if any.
bool separated_by_edge_of(const ConvexPolygon& a, const ConvexPolygon& b) {
  const std::size_t n = a.vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 edge = a.vertices[(i + 1) % n] - a.vertices[i];
    const Vec2 axis{-edge.y, edge.x};
    double min_a = std::numeric_limits<double>::max(), max_a = -min_a;
    for (const Vec2& v : a.vertices) {
      const double p = dot(axis, v);
      min_a = std::min(min_a, p);
      max_a = std::max(max_a, p);
    }
    double min_b = std::numeric_limits<double>::max(), max_b = -min_b;
    for (const Vec2& v : b.vertices) {
      const double p = dot(axis, v);
      min_b = std::min(min_b, p);
      max_b = std::max(max_b, p);
    }
    if (max_a < min_b || max_b < min_a) return true;
  }
  return false;
}

}  // namespace

bool polygons_intersect(const ConvexPolygon& a, const ConvexPolygon& b) {
  return !separated_by_edge_of(a, b) && !separated_by_edge_of(b, a);
}

bool collision_free(const ConvexPolygon& a, const ConvexPolygon& b) {
  if (a.vertices.size() < 3 || b.vertices.size() < 3)
    throw std::invalid_argument("degenerate polygon in collision test");
  return !polygons_intersect(a, b);
}

ConvexPolygon transform(const ConvexPolygon& p, const Vec2& translation,
                        double angle) {
  ConvexPolygon out;
  out.vertices.reserve(p.vertices.size());
  for (const Vec2& v : p.vertices)
    out.vertices.push_back(rotate(v, angle) + translation);
  return out;
}

bool point_in_polygon(const ConvexPolygon& p, const Vec2& q, double tol) {
  const std::size_t n = p.vertices.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = p.vertices[i];
    const Vec2& b = p.vertices[(i + 1) % n];
    const Vec2 edge = b - a;
    const double len = std::sqrt(dot(edge, edge));
    if (len == 0.0) continue;
    // q must lie left of (or within tol outside of) every CCW edge.
    if (cross(edge, q - a) < -tol * len) return false;
  }
  return true;
}

}  // namespace mpp
