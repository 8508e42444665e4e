#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "objnav/core/geometry.hpp"

namespace objnav {

enum class CellState { Free, Occupied, Unknown, Inflated };

struct OccupancyParams {
  double l_hit = 0.85;
  double l_miss = -0.4;
  double l_min = -10.0;
  double l_max = 10.0;
  double occupied_threshold = 1.5;
  double free_threshold = -1.5;
  double inflation_radius = 0.25;  // meters
};

struct OccupancyCell {
  double log_odds = 0.0;
  int inflation_count = 0;
};

// 2D log-odds occupancy grid. Classification:
//   Occupied  log_odds >= occupied_threshold
//   Inflated  inflation_count > 0 (and not Occupied)
//   Free      log_odds <= free_threshold (and not Inflated)
//   Unknown   otherwise
// Inflation counts are maintained incrementally as cells flip in and out of
// Occupied; recount_inflation() rebuilds them from scratch.
class OccupancyGrid {
 public:
  OccupancyGrid(GridFrame frame, OccupancyParams params = {});

  const GridFrame& frame() const { return frame_; }
  const OccupancyParams& params() const { return params_; }

  const OccupancyCell& cell(const CellIndex& c) const;
  double log_odds(const CellIndex& c) const { return cell(c).log_odds; }
  int inflation_count(const CellIndex& c) const { return cell(c).inflation_count; }

  CellState classify(const CellIndex& c) const;
  bool is_traversable(const CellIndex& c) const { return classify(c) == CellState::Free; }

  // Bayesian scan update. Cells strictly between the sensor and each
  // endpoint get l_miss; the endpoint cell gets l_hit when the ray stopped
  // short of max_range, l_miss otherwise. Out-of-bounds endpoints are
  // clipped to the frame and treated as misses.
  void integrate_depth_scan(const Pose2& sensor_pose, std::span<const Vec2> hits,
                            double max_range);

  // Adds a single log-odds delta to one cell (clamped), keeping inflation
  // bookkeeping consistent. Exposed for tests and footprint clearing.
  void apply_update(const CellIndex& c, double delta);

  // Forces cells around `center` to a free log-odds level. Used by the
  // episode loop to mark the robot's own footprint observed.
  void clear_footprint(const Vec2& center, double radius);

  // Recomputes every inflation count from the occupied set. This is the
  // reference the incremental maintenance is checked against.
  void recount_inflation();

  // Chebyshev disc radius, in cells, used for inflation.
  int inflation_radius_cells() const { return inflation_cells_; }

  void write_dump(std::ostream& os) const;
  static OccupancyGrid parse_dump(std::istream& is);

 private:
  void set_log_odds(std::size_t idx, double value);
  void bump_disc(const CellIndex& c, int delta);

  GridFrame frame_;
  OccupancyParams params_;
  int inflation_cells_;
  std::vector<OccupancyCell> cells_;
};

}  // namespace objnav
