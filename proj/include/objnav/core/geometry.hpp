#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "objnav/core/errors.hpp"

namespace objnav {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double norm() const { return std::hypot(x, y); }
  bool operator==(const Vec2& o) const = default;
};

// Wraps an angle into (-pi, pi].
double normalize_angle(double a);

// Smallest absolute separation between two angles, in [0, pi].
double angle_diff(double a, double b);

struct Pose2 {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;  // radians, kept in (-pi, pi]

  Pose2() = default;
  Pose2(double px, double py, double h) : x(px), y(py), heading(normalize_angle(h)) {}

  Vec2 position() const { return {x, y}; }
  void set_heading(double h) { heading = normalize_angle(h); }
};

struct CellIndex {
  int col = 0;
  int row = 0;
  bool operator==(const CellIndex&) const = default;
};

// Placement of a grid in world coordinates. Cell (0,0) has its lower-left
// corner at `origin`; cells are `resolution` meters square.
class GridFrame {
 public:
  GridFrame() = default;
  GridFrame(double resolution, Vec2 origin, int width, int height);

  double resolution() const { return resolution_; }
  Vec2 origin() const { return origin_; }
  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t cell_count() const { return static_cast<std::size_t>(width_) * height_; }

  bool in_bounds(const CellIndex& c) const {
    return c.col >= 0 && c.row >= 0 && c.col < width_ && c.row < height_;
  }
  bool contains(const Vec2& p) const;

  // Floor rule: boundary points belong to the cell at floor((coord-origin)/res).
  CellIndex world_to_grid(const Vec2& p) const;

  // Center of the cell.
  Vec2 grid_to_world(const CellIndex& c) const;

  std::size_t linear_index(const CellIndex& c) const {
    return static_cast<std::size_t>(c.row) * width_ + c.col;
  }
  CellIndex from_linear(std::size_t i) const {
    return {static_cast<int>(i % width_), static_cast<int>(i / width_)};
  }

  bool operator==(const GridFrame&) const = default;

 private:
  double resolution_ = 1.0;
  Vec2 origin_;
  int width_ = 0;
  int height_ = 0;
};

// Every cell the segment [from, to] traverses, in order, both endpoint cells
// included, no repeats. Exact DDA stepping; a tie at a cell corner steps the
// x axis first.
std::vector<CellIndex> raycast_cells(const GridFrame& frame, const Vec2& from, const Vec2& to);

}  // namespace objnav
