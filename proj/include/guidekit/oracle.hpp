#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "guidekit/cspace.hpp"
#include "guidekit/geometry.hpp"

namespace guidekit {

struct OracleGridSpec {
  int nx = 128;
  int ny = 128;
  int ntheta = 32;

  bool operator==(const OracleGridSpec&) const = default;
};

/// Grid-Dijkstra cost-to-go field over the discretized C-space: the cost of
/// the shortest 26-connected grid path (8 planar neighbors x {-1,0,+1} theta
/// steps, theta wrapping) from each valid cell to the goal cell, with edge
/// costs taken from the C-space metric between cell centers. Unreachable or
/// invalid cells hold +infinity. Immutable once built.
class OracleField {
 public:
  OracleGridSpec grid;
  Aabb bounds;
  double theta_weight = 0.0;
  Pose goal;
  std::vector<double> cost;  // (ix * ny + iy) * ntheta + itheta

  double dx() const { return bounds.width() / grid.nx; }
  double dy() const { return bounds.height() / grid.ny; }
  double dtheta() const { return 2.0 * kPi / grid.ntheta; }

  int cell_index(const Pose& p) const {
    const int ix = std::clamp(static_cast<int>((p.x - bounds.min.x) / dx()), 0, grid.nx - 1);
    const int iy = std::clamp(static_cast<int>((p.y - bounds.min.y) / dy()), 0, grid.ny - 1);
    int it = static_cast<int>((wrap_angle(p.theta) + kPi) / dtheta());
    it = std::clamp(it, 0, grid.ntheta - 1);
    return (ix * grid.ny + iy) * grid.ntheta + it;
  }

  Pose cell_center(int ix, int iy, int it) const {
    return Pose(bounds.min.x + (ix + 0.5) * dx(), bounds.min.y + (iy + 0.5) * dy(),
                -kPi + (it + 0.5) * dtheta());
  }

  double cost_at(int ix, int iy, int it) const {
    return cost[static_cast<size_t>((ix * grid.ny + iy) * grid.ntheta + it)];
  }

  /// Cost-to-go of the cell containing p (nearest-cell lookup).
  double query(const Pose& p) const { return cost[static_cast<size_t>(cell_index(p))]; }

  /// Largest single-step edge cost; useful as a discretization tolerance.
  double max_step_cost() const {
    return std::hypot(dx(), dy()) + theta_weight * dtheta();
  }
};

inline double oracle_query(const OracleField& field, const Pose& p) { return field.query(p); }

inline OracleField oracle_build(const CSpace& cs, const Pose& goal, const OracleGridSpec& grid) {
  OracleField field;
  field.grid = grid;
  field.bounds = cs.bounds();
  field.theta_weight = cs.theta_weight();
  field.goal = goal;
  const int nx = grid.nx, ny = grid.ny, nt = grid.ntheta;
  const size_t total = static_cast<size_t>(nx) * ny * nt;
  const double inf = std::numeric_limits<double>::infinity();

  std::vector<uint8_t> valid(total, 0);
  for (int ix = 0; ix < nx; ++ix)
    for (int iy = 0; iy < ny; ++iy)
      for (int it = 0; it < nt; ++it) {
        const size_t idx = static_cast<size_t>((ix * ny + iy) * nt + it);
        valid[idx] = cs.is_valid(field.cell_center(ix, iy, it)) ? 1 : 0;
      }

  const int goal_idx = field.cell_index(goal);
  if (!valid[static_cast<size_t>(goal_idx)])
    throw std::runtime_error("oracle_build: goal cell is invalid at this resolution");

  // 26-connected neighborhood: 8 planar x 3 theta plus the 2 pure theta steps.
  struct Offset {
    int di, dj, dk;
    double cost;
  };
  std::vector<Offset> offsets;
  for (int di = -1; di <= 1; ++di)
    for (int dj = -1; dj <= 1; ++dj)
      for (int dk = -1; dk <= 1; ++dk) {
        if (di == 0 && dj == 0 && dk == 0) continue;
        const double c =
            std::hypot(di * field.dx(), dj * field.dy()) + field.theta_weight * std::abs(dk) * field.dtheta();
        offsets.push_back({di, dj, dk, c});
      }

  field.cost.assign(total, inf);
  field.cost[static_cast<size_t>(goal_idx)] = 0.0;
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> queue;
  queue.push({0.0, goal_idx});
  while (!queue.empty()) {
    const auto [d, idx] = queue.top();
    queue.pop();
    if (d > field.cost[static_cast<size_t>(idx)]) continue;
    const int it = idx % nt;
    const int iy = (idx / nt) % ny;
    const int ix = idx / (nt * ny);
    for (const Offset& o : offsets) {
      const int jx = ix + o.di, jy = iy + o.dj;
      if (jx < 0 || jx >= nx || jy < 0 || jy >= ny) continue;
      int jt = it + o.dk;
      if (jt < 0) jt += nt;
      if (jt >= nt) jt -= nt;
      const size_t jdx = static_cast<size_t>((jx * ny + jy) * nt + jt);
      if (!valid[jdx]) continue;
      const double nd = d + o.cost;
      if (nd < field.cost[jdx]) {
        field.cost[jdx] = nd;
        queue.push({nd, static_cast<int>(jdx)});
      }
    }
  }
  return field;
}

// Binary cache layout: magic, version, grid shape, bounds, theta_weight, goal,
// then the row-major cost array as little-endian 64-bit floats with +infinity
// stored as the IEEE infinity.
namespace detail {
constexpr uint32_t kOracleMagic = 0x524F4B47;  // "GKOR"
constexpr uint32_t kOracleVersion = 1;
}  // namespace detail

inline void oracle_save(const OracleField& field, const std::string& path) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write oracle file: " + path);
    auto put_u32 = [&](uint32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); };
    auto put_f64 = [&](double v) { out.write(reinterpret_cast<const char*>(&v), 8); };
    put_u32(detail::kOracleMagic);
    put_u32(detail::kOracleVersion);
    put_u32(static_cast<uint32_t>(field.grid.nx));
    put_u32(static_cast<uint32_t>(field.grid.ny));
    put_u32(static_cast<uint32_t>(field.grid.ntheta));
    put_f64(field.bounds.min.x);
    put_f64(field.bounds.min.y);
    put_f64(field.bounds.max.x);
    put_f64(field.bounds.max.y);
    put_f64(field.theta_weight);
    put_f64(field.goal.x);
    put_f64(field.goal.y);
    put_f64(field.goal.theta);
    out.write(reinterpret_cast<const char*>(field.cost.data()),
              static_cast<std::streamsize>(field.cost.size() * sizeof(double)));
  }
  fs::rename(tmp, target);
}

inline std::optional<OracleField> oracle_load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  auto get_u32 = [&]() {
    uint32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), 4);
    return v;
  };
  auto get_f64 = [&]() {
    double v = 0;
    in.read(reinterpret_cast<char*>(&v), 8);
    return v;
  };
  if (get_u32() != detail::kOracleMagic || get_u32() != detail::kOracleVersion)
    return std::nullopt;
  OracleField field;
  field.grid.nx = static_cast<int>(get_u32());
  field.grid.ny = static_cast<int>(get_u32());
  field.grid.ntheta = static_cast<int>(get_u32());
  field.bounds.min.x = get_f64();
  field.bounds.min.y = get_f64();
  field.bounds.max.x = get_f64();
  field.bounds.max.y = get_f64();
  field.theta_weight = get_f64();
  const double gx = get_f64(), gy = get_f64(), gt = get_f64();
  field.goal = Pose(gx, gy, gt);
  const size_t total = static_cast<size_t>(field.grid.nx) * field.grid.ny * field.grid.ntheta;
  field.cost.resize(total);
  in.read(reinterpret_cast<char*>(field.cost.data()),
          static_cast<std::streamsize>(total * sizeof(double)));
  if (!in) return std::nullopt;
  return field;
}

/// Load the field from the cache directory if present, else build and cache
/// it. The key must uniquely identify (environment, goal, grid, metric).
inline OracleField oracle_build_cached(const CSpace& cs, const Pose& goal,
                                       const OracleGridSpec& grid, uint64_t key,
                                       const std::string& cache_dir) {
  namespace fs = std::filesystem;
  if (cache_dir.empty()) return oracle_build(cs, goal, grid);
  char name[64];
  std::snprintf(name, sizeof(name), "%016llx_%dx%dx%d.oracle",
                static_cast<unsigned long long>(key), grid.nx, grid.ny, grid.ntheta);
  const fs::path path = fs::path(cache_dir) / name;
  if (auto cached = oracle_load(path.string())) {
    if (cached->grid == grid) return std::move(*cached);
  }
  OracleField field = oracle_build(cs, goal, grid);
  oracle_save(field, path.string());
  return field;
}

}  // namespace guidekit
