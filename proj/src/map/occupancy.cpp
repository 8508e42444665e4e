#include "objnav/map/occupancy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace objnav {

namespace {

// Shrinks a segment starting inside the frame so its end lies inside too.
// Returns the scale factor in [0, 1] applied to (to - from).
double clip_to_frame(const GridFrame& f, const Vec2& from, const Vec2& to) {
  const double eps = f.resolution() * 1e-9;
  double lo_x = f.origin().x + eps, hi_x = f.origin().x + f.width() * f.resolution() - eps;
  double lo_y = f.origin().y + eps, hi_y = f.origin().y + f.height() * f.resolution() - eps;
  double t = 1.0;
  const double dx = to.x - from.x, dy = to.y - from.y;
  if (dx > 0.0) t = std::min(t, (hi_x - from.x) / dx);
  if (dx < 0.0) t = std::min(t, (lo_x - from.x) / dx);
  if (dy > 0.0) t = std::min(t, (hi_y - from.y) / dy);
  if (dy < 0.0) t = std::min(t, (lo_y - from.y) / dy);
  return std::max(t, 0.0);
}

}  // namespace

OccupancyGrid::OccupancyGrid(GridFrame frame, OccupancyParams params)
    : frame_(frame), params_(params) {
  inflation_cells_ = static_cast<int>(std::floor(params_.inflation_radius / frame_.resolution() + 1e-9));
  cells_.assign(frame_.cell_count(), OccupancyCell{});
}

const OccupancyCell& OccupancyGrid::cell(const CellIndex& c) const {
  if (!frame_.in_bounds(c)) throw OutOfBounds("occupancy cell out of bounds");
  return cells_[frame_.linear_index(c)];
}

CellState OccupancyGrid::classify(const CellIndex& c) const {
  const OccupancyCell& cc = cell(c);
  if (cc.log_odds >= params_.occupied_threshold) return CellState::Occupied;
  if (cc.inflation_count > 0) return CellState::Inflated;
  if (cc.log_odds <= params_.free_threshold) return CellState::Free;
  return CellState::Unknown;
}

void OccupancyGrid::bump_disc(const CellIndex& c, int delta) {
  const int r = inflation_cells_;
  for (int dr = -r; dr <= r; ++dr) {
    for (int dc = -r; dc <= r; ++dc) {
      CellIndex n{c.col + dc, c.row + dr};
      if (frame_.in_bounds(n)) cells_[frame_.linear_index(n)].inflation_count += delta;
    }
  }
}

void OccupancyGrid::set_log_odds(std::size_t idx, double value) {
  OccupancyCell& cc = cells_[idx];
  const bool was_occupied = cc.log_odds >= params_.occupied_threshold;
  cc.log_odds = std::clamp(value, params_.l_min, params_.l_max);
  const bool now_occupied = cc.log_odds >= params_.occupied_threshold;
  if (was_occupied != now_occupied) bump_disc(frame_.from_linear(idx), now_occupied ? 1 : -1);
}

void OccupancyGrid::apply_update(const CellIndex& c, double delta) {
  if (!frame_.in_bounds(c)) throw OutOfBounds("occupancy update out of bounds");
  const std::size_t idx = frame_.linear_index(c);
  set_log_odds(idx, cells_[idx].log_odds + delta);
}

void OccupancyGrid::integrate_depth_scan(const Pose2& sensor_pose, std::span<const Vec2> hits,
                                         double max_range) {
  const Vec2 p0 = sensor_pose.position();
  if (!frame_.contains(p0)) throw OutOfBounds("sensor pose outside grid");
  for (const Vec2& raw : hits) {
    const Vec2 d = raw - p0;
    const double range = d.norm();
    bool hit = range < max_range;
    Vec2 end = raw;
    if (range > max_range && range > 0.0) {
      end = p0 + d * (max_range / range);
      hit = false;
    }
    const double t = clip_to_frame(frame_, p0, end);
    if (t < 1.0) {
      end = p0 + (end - p0) * t;
      hit = false;  // true endpoint lies outside the map
    }
    const auto cells = raycast_cells(frame_, p0, end);
    for (std::size_t i = 1; i + 1 < cells.size(); ++i) {
      apply_update(cells[i], params_.l_miss);
    }
    apply_update(cells.back(), hit ? params_.l_hit : params_.l_miss);
  }
}

void OccupancyGrid::clear_footprint(const Vec2& center, double radius) {
  if (!frame_.contains(center)) return;
  const int r = static_cast<int>(std::ceil(radius / frame_.resolution()));
  const CellIndex c0 = frame_.world_to_grid(center);
  for (int dr = -r; dr <= r; ++dr) {
    for (int dc = -r; dc <= r; ++dc) {
      CellIndex c{c0.col + dc, c0.row + dr};
      if (!frame_.in_bounds(c)) continue;
      if ((frame_.grid_to_world(c) - center).norm() > radius) continue;
      const std::size_t idx = frame_.linear_index(c);
      if (cells_[idx].log_odds > params_.free_threshold) {
        set_log_odds(idx, params_.free_threshold);
      }
    }
  }
}

void OccupancyGrid::recount_inflation() {
  for (auto& c : cells_) c.inflation_count = 0;
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    if (cells_[i].log_odds >= params_.occupied_threshold) bump_disc(frame_.from_linear(i), 1);
  }
}

void OccupancyGrid::write_dump(std::ostream& os) const {
  char buf[512];
  std::snprintf(buf, sizeof(buf), "objnav-grid v1 occupancy\nframe %.17g %.17g %.17g %d %d\n",
                frame_.origin().x, frame_.origin().y, frame_.resolution(), frame_.width(),
                frame_.height());
  os << buf;
  std::snprintf(buf, sizeof(buf),
                "params %.17g %.17g %.17g %.17g %.17g %.17g %.17g\ncells\n", params_.l_hit,
                params_.l_miss, params_.l_min, params_.l_max, params_.occupied_threshold,
                params_.free_threshold, params_.inflation_radius);
  os << buf;
  for (int row = 0; row < frame_.height(); ++row) {
    for (int col = 0; col < frame_.width(); ++col) {
      const OccupancyCell& c = cells_[frame_.linear_index({col, row})];
      std::snprintf(buf, sizeof(buf), "%s%.17g %d", col == 0 ? "" : " ", c.log_odds,
                    c.inflation_count);
      os << buf;
    }
    os << '\n';
  }
  os << "end\n";
}

OccupancyGrid OccupancyGrid::parse_dump(std::istream& is) {
  std::string tag, version, kind;
  is >> tag >> version >> kind;
  if (tag != "objnav-grid" || version != "v1" || kind != "occupancy")
    throw DataError("not an occupancy grid dump");
  std::string word;
  double ox, oy, res;
  int w, h;
  is >> word >> ox >> oy >> res >> w >> h;
  if (word != "frame" || !is) throw DataError("bad grid dump frame line");
  OccupancyParams p;
  is >> word >> p.l_hit >> p.l_miss >> p.l_min >> p.l_max >> p.occupied_threshold >>
      p.free_threshold >> p.inflation_radius;
  if (word != "params" || !is) throw DataError("bad grid dump params line");
  is >> word;
  if (word != "cells") throw DataError("bad grid dump cells header");
  OccupancyGrid grid(GridFrame(res, {ox, oy}, w, h), p);
  for (std::size_t i = 0; i < grid.cells_.size(); ++i) {
    is >> grid.cells_[i].log_odds >> grid.cells_[i].inflation_count;
  }
  if (!is) throw DataError("truncated grid dump");
  is >> word;
  if (word != "end") throw DataError("missing grid dump terminator");
  return grid;
}

}  // namespace objnav
