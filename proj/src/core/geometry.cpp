#include "objnav/core/geometry.hpp"

#include <algorithm>
#include <limits>

namespace objnav {

double normalize_angle(double a) {
  constexpr double kPi = 3.14159265358979323846;
  constexpr double kTwoPi = 2.0 * kPi;
  a = std::fmod(a, kTwoPi);
  if (a <= -kPi) a += kTwoPi;
  if (a > kPi) a -= kTwoPi;
  return a;
}

double angle_diff(double a, double b) {
  return std::abs(normalize_angle(a - b));
}

GridFrame::GridFrame(double resolution, Vec2 origin, int width, int height)
    : resolution_(resolution), origin_(origin), width_(width), height_(height) {
  if (resolution <= 0.0) throw InvalidObservation("grid resolution must be > 0");
  if (width < 0 || height < 0) throw InvalidObservation("grid dimensions must be >= 0");
}

bool GridFrame::contains(const Vec2& p) const {
  const double dx = p.x - origin_.x;
  const double dy = p.y - origin_.y;
  return dx >= 0.0 && dy >= 0.0 && dx < width_ * resolution_ && dy < height_ * resolution_;
}

CellIndex GridFrame::world_to_grid(const Vec2& p) const {
  if (!contains(p)) throw OutOfBounds("point outside grid frame");
  const int col = static_cast<int>(std::floor((p.x - origin_.x) / resolution_));
  const int row = static_cast<int>(std::floor((p.y - origin_.y) / resolution_));
  // floor can land exactly on width/height for points epsilon-close to the
  // upper frame edge; clamp keeps the contract with contains().
  return {std::min(col, width_ - 1), std::min(row, height_ - 1)};
}

Vec2 GridFrame::grid_to_world(const CellIndex& c) const {
  return {origin_.x + (c.col + 0.5) * resolution_, origin_.y + (c.row + 0.5) * resolution_};
}

std::vector<CellIndex> raycast_cells(const GridFrame& frame, const Vec2& from, const Vec2& to) {
  const CellIndex start = frame.world_to_grid(from);
  const CellIndex end = frame.world_to_grid(to);

  std::vector<CellIndex> cells;
  cells.push_back(start);
  if (start == end) return cells;

  const double dx = to.x - from.x;
  const double dy = to.y - from.y;
  const double res = frame.resolution();
  const double inf = std::numeric_limits<double>::infinity();

  const int step_x = dx > 0.0 ? 1 : (dx < 0.0 ? -1 : 0);
  const int step_y = dy > 0.0 ? 1 : (dy < 0.0 ? -1 : 0);

  // Parametric distance (in t of the segment) to the next cell boundary on
  // each axis, and per-cell increments.
  double t_max_x, t_delta_x, t_max_y, t_delta_y;
  if (step_x != 0) {
    const double bx = frame.origin().x + (start.col + (step_x > 0 ? 1 : 0)) * res;
    t_max_x = (bx - from.x) / dx;
    t_delta_x = res / std::abs(dx);
  } else {
    t_max_x = inf;
    t_delta_x = inf;
  }
  if (step_y != 0) {
    const double by = frame.origin().y + (start.row + (step_y > 0 ? 1 : 0)) * res;
    t_max_y = (by - from.y) / dy;
    t_delta_y = res / std::abs(dy);
  } else {
    t_max_y = inf;
    t_delta_y = inf;
  }

  CellIndex cur = start;
  const std::size_t max_steps = static_cast<std::size_t>(frame.width() + frame.height()) + 4;
  for (std::size_t i = 0; i < max_steps; ++i) {
    if (t_max_x <= t_max_y) {  // tie steps x first
      cur.col += step_x;
      t_max_x += t_delta_x;
    } else {
      cur.row += step_y;
      t_max_y += t_delta_y;
    }
    if (!frame.in_bounds(cur)) break;  // numeric guard; endpoints are in bounds
    cells.push_back(cur);
    if (cur == end) return cells;
  }
  // Drift fallback: terminate on the endpoint cell even if boundary rounding
  // stopped the march one cell short.
  if (cells.back() != end) cells.push_back(end);
  return cells;
}

}  // namespace objnav
