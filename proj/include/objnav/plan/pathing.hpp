#pragma once

#include <optional>
#include <vector>

#include "objnav/map/occupancy.hpp"
#include "objnav/plan/wtrp.hpp"

namespace objnav {

struct Path {
  std::vector<Vec2> waypoints;
  double total_length = 0.0;
};

// Shortest 8-connected grid path (diagonal cost sqrt(2), no corner cutting)
// from `from` to the traversable cell nearest `to` within the snap radius,
// simplified by line-of-sight shortcutting. Empty when unreachable.
std::optional<Path> astar(const OccupancyGrid& occ, const Vec2& from, const Vec2& to,
                          int snap_radius_cells = 3);

struct FollowConfig {
  double v_max = 1.0;
  double xi_dot_max = 1.5707963267948966;
  double heading_gate = 0.5235987755982988;  // 30 degrees
};

// Rotate-then-translate kinematic step along the path. `cursor` indexes the
// waypoint currently targeted and advances as waypoints are captured.
// Translation is clipped so the agent never enters a non-traversable cell.
AgentState follow_step(const AgentState& agent, const Path& path, std::size_t& cursor,
                       const OccupancyGrid& occ, double dt, const FollowConfig& cfg);

}  // namespace objnav
