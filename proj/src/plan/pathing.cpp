#include "objnav/plan/pathing.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace objnav {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

struct OpenNode {
  double f;
  double h;
  std::size_t idx;
  bool operator>(const OpenNode& o) const {
    if (f != o.f) return f > o.f;
    if (h != o.h) return h > o.h;
    return idx > o.idx;
  }
};

double octile(const CellIndex& a, const CellIndex& b) {
  const double dx = std::abs(a.col - b.col);
  const double dy = std::abs(a.row - b.row);
  return std::max(dx, dy) + (kSqrt2 - 1.0) * std::min(dx, dy);
}

// All raycast cells traversable; the cell containing `a` itself is exempt so
// an agent brushing an inflated cell can still leave it.
bool segment_traversable(const OccupancyGrid& occ, const Vec2& a, const Vec2& b) {
  const auto cells = raycast_cells(occ.frame(), a, b);
  for (std::size_t i = 1; i < cells.size(); ++i) {
    if (!occ.is_traversable(cells[i])) return false;
  }
  return true;
}

}  // namespace

std::optional<Path> astar(const OccupancyGrid& occ, const Vec2& from, const Vec2& to,
                          int snap_radius_cells) {
  const GridFrame& f = occ.frame();
  if (!f.contains(from)) throw OutOfBounds("astar start outside grid");
  if (from.x == to.x && from.y == to.y) {
    return Path{{from}, 0.0};
  }

  // Clamp the goal point into the frame, then snap to the nearest
  // traversable cell within the snap radius.
  Vec2 goal_pt = to;
  const double eps = f.resolution() * 1e-6;
  goal_pt.x = std::clamp(goal_pt.x, f.origin().x + eps,
                         f.origin().x + f.width() * f.resolution() - eps);
  goal_pt.y = std::clamp(goal_pt.y, f.origin().y + eps,
                         f.origin().y + f.height() * f.resolution() - eps);
  const CellIndex ideal = f.world_to_grid(goal_pt);

  CellIndex goal{};
  bool goal_ok = false;
  double goal_dist = 0.0;
  for (int dr = -snap_radius_cells; dr <= snap_radius_cells; ++dr) {
    for (int dc = -snap_radius_cells; dc <= snap_radius_cells; ++dc) {
      if (dc * dc + dr * dr > snap_radius_cells * snap_radius_cells) continue;
      const CellIndex c{ideal.col + dc, ideal.row + dr};
      if (!f.in_bounds(c) || !occ.is_traversable(c)) continue;
      const double d = (f.grid_to_world(c) - goal_pt).norm();
      if (!goal_ok || d < goal_dist ||
          (d == goal_dist && f.linear_index(c) < f.linear_index(goal))) {
        goal = c;
        goal_dist = d;
        goal_ok = true;
      }
    }
  }
  if (!goal_ok) return std::nullopt;

  const CellIndex start = f.world_to_grid(from);
  const std::size_t start_idx = f.linear_index(start);
  const std::size_t goal_idx = f.linear_index(goal);

  std::vector<double> g(f.cell_count(), std::numeric_limits<double>::infinity());
  std::vector<std::int32_t> came(f.cell_count(), -1);
  std::vector<bool> closed(f.cell_count(), false);
  std::priority_queue<OpenNode, std::vector<OpenNode>, std::greater<OpenNode>> open;

  g[start_idx] = 0.0;
  open.push({octile(start, goal), octile(start, goal), start_idx});

  bool found = start_idx == goal_idx;
  while (!open.empty() && !found) {
    const OpenNode top = open.top();
    open.pop();
    if (closed[top.idx]) continue;
    closed[top.idx] = true;
    if (top.idx == goal_idx) {
      found = true;
      break;
    }
    const CellIndex c = f.from_linear(top.idx);
    for (int dr = -1; dr <= 1; ++dr) {
      for (int dc = -1; dc <= 1; ++dc) {
        if (dc == 0 && dr == 0) continue;
        const CellIndex nb{c.col + dc, c.row + dr};
        if (!f.in_bounds(nb) || !occ.is_traversable(nb)) continue;
        if (dc != 0 && dr != 0) {
          // no corner cutting through blocked orthogonal neighbors
          if (!occ.is_traversable({c.col + dc, c.row}) ||
              !occ.is_traversable({c.col, c.row + dr})) {
            continue;
          }
        }
        const std::size_t nidx = f.linear_index(nb);
        if (closed[nidx]) continue;
        const double step = (dc != 0 && dr != 0) ? kSqrt2 : 1.0;
        const double cand = g[top.idx] + step;
        if (cand < g[nidx] - 1e-12) {
          g[nidx] = cand;
          came[nidx] = static_cast<std::int32_t>(top.idx);
          const double h = octile(nb, goal);
          open.push({cand + h, h, nidx});
        }
      }
    }
  }
  if (!found) return std::nullopt;

  std::vector<std::size_t> cell_path;
  for (std::int64_t cur = static_cast<std::int64_t>(goal_idx); cur >= 0; cur = came[cur]) {
    cell_path.push_back(static_cast<std::size_t>(cur));
    if (static_cast<std::size_t>(cur) == start_idx) break;
  }
  std::reverse(cell_path.begin(), cell_path.end());

  std::vector<Vec2> raw;
  raw.push_back(from);
  for (std::size_t i = 1; i < cell_path.size(); ++i) {
    raw.push_back(f.grid_to_world(f.from_linear(cell_path[i])));
  }
  if (cell_path.size() == 1 && start_idx == goal_idx) {
    raw.push_back(f.grid_to_world(goal));
  }
  // Aim for the exact requested point when it sits in the snapped goal cell.
  if (f.contains(to) && f.world_to_grid(to) == goal && occ.is_traversable(goal)) {
    raw.back() = to;
  }

  // Line-of-sight shortcutting.
  std::vector<Vec2> simplified;
  simplified.push_back(raw.front());
  std::size_t i = 0;
  while (i + 1 < raw.size()) {
    std::size_t j = raw.size() - 1;
    while (j > i + 1 && !segment_traversable(occ, raw[i], raw[j])) --j;
    simplified.push_back(raw[j]);
    i = j;
  }

  Path path;
  path.waypoints = std::move(simplified);
  for (std::size_t k = 1; k < path.waypoints.size(); ++k) {
    path.total_length += (path.waypoints[k] - path.waypoints[k - 1]).norm();
  }
  return path;
}

AgentState follow_step(const AgentState& agent, const Path& path, std::size_t& cursor,
                       const OccupancyGrid& occ, double dt, const FollowConfig& cfg) {
  AgentState out = agent;
  out.vel = {0.0, 0.0};
  const GridFrame& f = occ.frame();
  const double capture = 0.5 * f.resolution();

  while (cursor < path.waypoints.size() &&
         (path.waypoints[cursor] - agent.pos).norm() <= capture) {
    ++cursor;
  }
  if (cursor >= path.waypoints.size()) return out;

  const Vec2 wp = path.waypoints[cursor];
  const Vec2 delta = wp - agent.pos;
  const double desired = std::atan2(delta.y, delta.x);
  const double err = normalize_angle(desired - agent.heading);
  const double dpsi = std::clamp(err, -cfg.xi_dot_max * dt, cfg.xi_dot_max * dt);
  out.heading = normalize_angle(agent.heading + dpsi);

  const double err_after = std::abs(normalize_angle(desired - out.heading));
  if (err_after >= cfg.heading_gate) return out;

  double advance = std::min(cfg.v_max * dt, delta.norm());
  const Vec2 dir{std::cos(out.heading), std::sin(out.heading)};
  Vec2 target = agent.pos + dir * advance;

  // Clip at the entry of the first non-traversable cell along the motion.
  if (!f.contains(target)) {
    advance = 0.0;
  } else {
    const auto cells = raycast_cells(f, agent.pos, target);
    if (cells.size() > 1) {
      const double len = (target - agent.pos).norm();
      for (std::size_t i = 1; i < cells.size(); ++i) {
        if (occ.is_traversable(cells[i])) continue;
        // slab entry parameter of the blocked cell along the motion segment
        const double res = f.resolution();
        const double cx = f.origin().x + cells[i].col * res;
        const double cy = f.origin().y + cells[i].row * res;
        const double dx = target.x - agent.pos.x, dy = target.y - agent.pos.y;
        double t_entry = 0.0;
        if (dx != 0.0) {
          double t0 = (cx - agent.pos.x) / dx;
          double t1 = (cx + res - agent.pos.x) / dx;
          t_entry = std::max(t_entry, std::min(t0, t1));
        }
        if (dy != 0.0) {
          double t0 = (cy - agent.pos.y) / dy;
          double t1 = (cy + res - agent.pos.y) / dy;
          t_entry = std::max(t_entry, std::min(t0, t1));
        }
        advance = std::max(0.0, std::min(t_entry, 1.0) * len - 1e-6);
        break;
      }
    }
  }

  out.pos = agent.pos + dir * advance;
  out.vel = (out.pos - agent.pos) * (1.0 / dt);
  return out;
}

}  // namespace objnav
