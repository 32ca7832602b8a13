#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace guidekit {

constexpr double kPi = 3.14159265358979323846;

/// Wrap an angle into [-pi, pi).
inline double wrap_angle(double theta) {
  double t = std::fmod(theta + kPi, 2.0 * kPi);
  if (t < 0.0) t += 2.0 * kPi;
  return t - kPi;
}

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2() = default;
  constexpr Vec2(double px, double py) : x(px), y(py) {}

  constexpr Vec2 operator+(const Vec2& r) const { return {x + r.x, y + r.y}; }
  constexpr Vec2 operator-(const Vec2& r) const { return {x - r.x, y - r.y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  friend constexpr Vec2 operator*(double s, const Vec2& v) { return {v.x * s, v.y * s}; }

  constexpr double dot(const Vec2& r) const { return x * r.x + y * r.y; }
  constexpr double cross(const Vec2& r) const { return x * r.y - y * r.x; }
  double norm() const { return std::hypot(x, y); }
  constexpr double squared_norm() const { return x * x + y * y; }
  /// Left-hand perpendicular (rotate by +90 degrees).
  constexpr Vec2 perp() const { return {-y, x}; }
};

/// Orientation of c relative to the directed line a->b (positive = left).
inline double orient(const Vec2& a, const Vec2& b, const Vec2& c) {
  return (b - a).cross(c - a);
}

struct Aabb {
  Vec2 min;
  Vec2 max;

  bool contains(const Vec2& p) const {
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y;
  }
  bool overlaps(const Aabb& o) const {
    return !(max.x < o.min.x || o.max.x < min.x || max.y < o.min.y || o.max.y < min.y);
  }
  double width() const { return max.x - min.x; }
  double height() const { return max.y - min.y; }
  double diagonal() const { return std::hypot(width(), height()); }
  Vec2 center() const { return {(min.x + max.x) * 0.5, (min.y + max.y) * 0.5}; }
};

/// An SE(2) configuration. theta is wrapped into [-pi, pi) on construction.
struct Pose {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  Pose() = default;
  Pose(double px, double py, double ptheta) : x(px), y(py), theta(wrap_angle(ptheta)) {
    if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(theta))
      throw std::invalid_argument("Pose: non-finite component");
  }

  Vec2 position() const { return {x, y}; }
};

/// Axis-aligned rectangle footprint, described by its half extents.
struct RectRobot {
  double half_length = 0.5;  // along the robot's local x axis
  double half_width = 0.25;  // along the robot's local y axis

  RectRobot() = default;
  RectRobot(double hl, double hw) : half_length(hl), half_width(hw) {
    if (!(hl > 0.0) || !(hw > 0.0))
      throw std::invalid_argument("RectRobot: extents must be positive");
  }
};

/// Corners of the oriented rectangle at the given pose, counter-clockwise.
inline std::array<Vec2, 4> rect_corners(const RectRobot& robot, const Pose& pose) {
  const double c = std::cos(pose.theta), s = std::sin(pose.theta);
  const double L = robot.half_length, W = robot.half_width;
  auto to_world = [&](double lx, double ly) -> Vec2 {
    return {pose.x + c * lx - s * ly, pose.y + s * lx + c * ly};
  };
  return {to_world(L, W), to_world(-L, W), to_world(-L, -W), to_world(L, -W)};
}

namespace detail {

inline bool point_on_segment(const Vec2& p, const Vec2& a, const Vec2& b, double eps) {
  const Vec2 ab = b - a, ap = p - a;
  const double len2 = ab.squared_norm();
  if (len2 == 0.0) return (p - a).norm() <= eps;
  const double t = std::clamp(ap.dot(ab) / len2, 0.0, 1.0);
  const Vec2 closest = a + ab * t;
  return (p - closest).norm() <= eps;
}

/// Segment intersection test, inclusive of endpoints and collinear overlap.
inline bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d,
                               double eps = 1e-12) {
  const double d1 = orient(c, d, a);
  const double d2 = orient(c, d, b);
  const double d3 = orient(a, b, c);
  const double d4 = orient(a, b, d);
  if (((d1 > eps && d2 < -eps) || (d1 < -eps && d2 > eps)) &&
      ((d3 > eps && d4 < -eps) || (d3 < -eps && d4 > eps)))
    return true;
  if (std::abs(d1) <= eps && point_on_segment(a, c, d, eps)) return true;
  if (std::abs(d2) <= eps && point_on_segment(b, c, d, eps)) return true;
  if (std::abs(d3) <= eps && point_on_segment(c, a, b, eps)) return true;
  if (std::abs(d4) <= eps && point_on_segment(d, a, b, eps)) return true;
  return false;
}

}  // namespace detail

/// A simple polygon, stored counter-clockwise. Construction validates that the
/// polygon has at least 3 vertices, no repeated/zero-length edges, nonzero
/// area, and no self-intersections; clockwise input is reversed.
class Polygon {
 public:
  explicit Polygon(std::vector<Vec2> vertices) : verts_(std::move(vertices)) {
    if (verts_.size() < 3) throw std::invalid_argument("Polygon: needs >= 3 vertices");
    for (const Vec2& v : verts_)
      if (!std::isfinite(v.x) || !std::isfinite(v.y))
        throw std::invalid_argument("Polygon: non-finite vertex");
    const size_t n = verts_.size();
    for (size_t i = 0; i < n; ++i) {
      if ((verts_[(i + 1) % n] - verts_[i]).norm() < 1e-12)
        throw std::invalid_argument("Polygon: zero-length edge");
    }
    double a2 = 0.0;
    for (size_t i = 0; i < n; ++i) a2 += verts_[i].cross(verts_[(i + 1) % n]);
    if (std::abs(a2) < 1e-12) throw std::invalid_argument("Polygon: degenerate (zero area)");
    if (a2 < 0.0) std::reverse(verts_.begin(), verts_.end());
    area_ = std::abs(a2) * 0.5;
    check_simple();
    convex_ = compute_convex();
    box_.min = box_.max = verts_[0];
    for (const Vec2& v : verts_) {
      box_.min.x = std::min(box_.min.x, v.x);
      box_.min.y = std::min(box_.min.y, v.y);
      box_.max.x = std::max(box_.max.x, v.x);
      box_.max.y = std::max(box_.max.y, v.y);
    }
  }

  const std::vector<Vec2>& vertices() const { return verts_; }
  bool convex() const { return convex_; }
  double area() const { return area_; }
  const Aabb& bounding_box() const { return box_; }

  /// Boundary-inclusive point containment (general simple polygon).
  bool contains(const Vec2& p, double boundary_eps = 1e-12) const {
    if (p.x < box_.min.x - boundary_eps || p.x > box_.max.x + boundary_eps ||
        p.y < box_.min.y - boundary_eps || p.y > box_.max.y + boundary_eps)
      return false;
    const size_t n = verts_.size();
    for (size_t i = 0; i < n; ++i)
      if (detail::point_on_segment(p, verts_[i], verts_[(i + 1) % n], boundary_eps)) return true;
    bool inside = false;
    for (size_t i = 0; i < n; ++i) {
      const Vec2& a = verts_[i];
      const Vec2& b = verts_[(i + 1) % n];
      if ((a.y > p.y) != (b.y > p.y)) {
        const double xint = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
        if (p.x < xint) inside = !inside;
      }
    }
    return inside;
  }

 private:
  void check_simple() const {
    const size_t n = verts_.size();
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = i + 1; j < n; ++j) {
        // Skip adjacent edges (they share exactly one endpoint).
        if (j == i + 1 || (i == 0 && j == n - 1)) continue;
        if (detail::segments_intersect(verts_[i], verts_[(i + 1) % n], verts_[j],
                                       verts_[(j + 1) % n]))
          throw std::invalid_argument("Polygon: self-intersecting");
      }
    }
  }

  bool compute_convex() const {
    const size_t n = verts_.size();
    for (size_t i = 0; i < n; ++i) {
      if (orient(verts_[i], verts_[(i + 1) % n], verts_[(i + 2) % n]) < -1e-12) return false;
    }
    return true;
  }

  std::vector<Vec2> verts_;
  Aabb box_;
  double area_ = 0.0;
  bool convex_ = false;
};

namespace detail {

/// Separating-axis overlap test on two convex CCW vertex lists. Boundary
/// contact counts as overlap (closed sets; separation must be strict).
inline bool sat_overlap(std::span<const Vec2> a, std::span<const Vec2> b) {
  auto separated_by_edges_of = [](std::span<const Vec2> edges, std::span<const Vec2> pa,
                                  std::span<const Vec2> pb) {
    const size_t n = edges.size();
    for (size_t i = 0; i < n; ++i) {
      const Vec2 axis = (edges[(i + 1) % n] - edges[i]).perp();
      double amin = std::numeric_limits<double>::infinity(), amax = -amin;
      for (const Vec2& v : pa) {
        const double d = axis.dot(v);
        amin = std::min(amin, d);
        amax = std::max(amax, d);
      }
      double bmin = std::numeric_limits<double>::infinity(), bmax = -bmin;
      for (const Vec2& v : pb) {
        const double d = axis.dot(v);
        bmin = std::min(bmin, d);
        bmax = std::max(bmax, d);
      }
      if (amax < bmin || bmax < amin) return true;
    }
    return false;
  };
  if (separated_by_edges_of(a, a, b)) return false;
  if (separated_by_edges_of(b, a, b)) return false;
  return true;
}

}  // namespace detail

/// True iff two convex polygons intersect (interiors or boundaries).
inline bool convex_overlap(const Polygon& a, const Polygon& b) {
  if (!a.convex() || !b.convex())
    throw std::invalid_argument("convex_overlap: input polygon is not convex");
  if (!a.bounding_box().overlaps(b.bounding_box())) return false;
  return detail::sat_overlap(a.vertices(), b.vertices());
}

/// Ear-clipping triangulation. Convex input is returned unchanged; otherwise
/// the polygon is split into triangles.
inline std::vector<Polygon> decompose_convex(const Polygon& poly) {
  if (poly.convex()) return {poly};
  std::vector<Vec2> verts = poly.vertices();
  std::vector<Polygon> out;
  auto is_ear = [&](size_t i) {
    const size_t n = verts.size();
    const Vec2& a = verts[(i + n - 1) % n];
    const Vec2& b = verts[i];
    const Vec2& c = verts[(i + 1) % n];
    if (orient(a, b, c) <= 1e-12) return false;  // reflex or collinear corner
    for (size_t j = 0; j < n; ++j) {
      if (j == (i + n - 1) % n || j == i || j == (i + 1) % n) continue;
      const Vec2& p = verts[j];
      if (orient(a, b, p) >= -1e-12 && orient(b, c, p) >= -1e-12 && orient(c, a, p) >= -1e-12)
        return false;
    }
    return true;
  };
  while (verts.size() > 3) {
    const size_t n = verts.size();
    bool clipped = false;
    for (size_t i = 0; i < n; ++i) {
      if (!is_ear(i)) continue;
      const Vec2 a = verts[(i + n - 1) % n], b = verts[i], c = verts[(i + 1) % n];
      if (std::abs(orient(a, b, c)) > 1e-12) out.emplace_back(std::vector<Vec2>{a, b, c});
      verts.erase(verts.begin() + static_cast<std::ptrdiff_t>(i));
      clipped = true;
      break;
    }
    if (!clipped) throw std::runtime_error("decompose_convex: no ear found (degenerate input)");
  }
  out.emplace_back(std::move(verts));
  return out;
}

/// Hot-path collision test against pre-decomposed convex obstacle pieces.
/// Collision = the oriented rectangle overlaps any piece or exits bounds.
inline bool robot_in_collision(const RectRobot& robot, const Pose& pose,
                               std::span<const Polygon> convex_pieces, const Aabb& bounds) {
  const std::array<Vec2, 4> corners = rect_corners(robot, pose);
  Aabb rbox{corners[0], corners[0]};
  for (const Vec2& c : corners) {
    if (c.x < bounds.min.x || c.x > bounds.max.x || c.y < bounds.min.y || c.y > bounds.max.y)
      return true;
    rbox.min.x = std::min(rbox.min.x, c.x);
    rbox.min.y = std::min(rbox.min.y, c.y);
    rbox.max.x = std::max(rbox.max.x, c.x);
    rbox.max.y = std::max(rbox.max.y, c.y);
  }
  for (const Polygon& piece : convex_pieces) {
    if (!rbox.overlaps(piece.bounding_box())) continue;
    if (detail::sat_overlap(corners, piece.vertices())) return true;
  }
  return false;
}

/// General form: non-convex obstacles are decomposed per call.
inline bool robot_in_collision(const RectRobot& robot, const Pose& pose,
                               const std::vector<Polygon>& obstacles, const Aabb& bounds) {
  std::vector<Polygon> pieces;
  for (const Polygon& obs : obstacles) {
    std::vector<Polygon> dec = decompose_convex(obs);
    pieces.insert(pieces.end(), std::make_move_iterator(dec.begin()),
                  std::make_move_iterator(dec.end()));
  }
  return robot_in_collision(robot, pose, std::span<const Polygon>(pieces), bounds);
}

struct OccupancyGrid {
  Vec2 origin;
  double cell_size = 0.0;
  int width = 0;
  int height = 0;
  std::vector<uint8_t> occupied;

  int index(int ix, int iy) const { return iy * width + ix; }
  bool in_grid(int ix, int iy) const { return ix >= 0 && ix < width && iy >= 0 && iy < height; }
  bool occupied_at(int ix, int iy) const { return occupied[static_cast<size_t>(index(ix, iy))] != 0; }
  Vec2 center(int ix, int iy) const {
    return {origin.x + (ix + 0.5) * cell_size, origin.y + (iy + 0.5) * cell_size};
  }
  double occupied_fraction() const {
    size_t n = 0;
    for (uint8_t c : occupied) n += c;
    return occupied.empty() ? 0.0 : static_cast<double>(n) / static_cast<double>(occupied.size());
  }
};

/// Rasterize obstacles over bounds: a cell is occupied iff its center lies
/// inside some obstacle or outside bounds.
inline OccupancyGrid rasterize(const std::vector<Polygon>& obstacles, const Aabb& bounds,
                               double cell_size) {
  if (!(cell_size > 0.0)) throw std::invalid_argument("rasterize: cell_size must be positive");
  OccupancyGrid grid;
  grid.origin = bounds.min;
  grid.cell_size = cell_size;
  grid.width = std::max(1, static_cast<int>(std::ceil(bounds.width() / cell_size - 1e-9)));
  grid.height = std::max(1, static_cast<int>(std::ceil(bounds.height() / cell_size - 1e-9)));
  grid.occupied.assign(static_cast<size_t>(grid.width) * grid.height, 0);
  for (int iy = 0; iy < grid.height; ++iy) {
    for (int ix = 0; ix < grid.width; ++ix) {
      const Vec2 c = grid.center(ix, iy);
      bool occ = !bounds.contains(c);
      for (const Polygon& obs : obstacles) {
        if (occ) break;
        occ = obs.contains(c);
      }
      grid.occupied[static_cast<size_t>(grid.index(ix, iy))] = occ ? 1 : 0;
    }
  }
  return grid;
}

/// Convenience: axis-aligned rectangular obstacle.
inline Polygon make_box(double xmin, double ymin, double xmax, double ymax) {
  return Polygon({{xmin, ymin}, {xmax, ymin}, {xmax, ymax}, {xmin, ymax}});
}

}  // namespace guidekit
