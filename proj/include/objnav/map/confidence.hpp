#pragma once

#include <iosfwd>
#include <map>
#include <span>
#include <vector>

#include "objnav/core/geometry.hpp"

namespace objnav {

struct ConfidenceParams {
  double alpha_c = 0.05;      // observation covariance scale
  double gamma = 0.05;        // similarity decay per meter along free space
  double beta = 4.0;          // free-space variance inflation, >= 1
  double tau_d = 3.0;         // trusted projection distance, meters
  double top_quantile = 0.2;  // fraction of top similarities averaged per cell
  double far_weight = 0.25;   // discount for updates beyond tau_d, in (0,1)
  double variance_floor = 1e-6;
};

struct ConfidenceCell {
  double s = 0.0;
  double sigma2 = 0.0;
  bool observed = false;
};

struct SimilarityPoint {
  Vec2 xy;
  double z = 0.0;
  double similarity = 0.0;  // in [0,1]
};

// One projected per-pixel similarity image: scored 3D points plus the sensor
// origin they were measured from.
struct SimilarityFrame {
  std::vector<SimilarityPoint> points;
  Vec2 sensor_origin;
};

struct CellObservation {
  double s_t = 0.0;  // mean of the top-quantile similarities in the cell
  int n = 0;         // point count
  double dist = 0.0; // cell center to sensor origin
};

struct Gaussian1 {
  double mean = 0.0;
  double var = 0.0;
};

// Per-cell aggregation of a similarity frame, keyed by linear cell index.
std::map<std::size_t, CellObservation> aggregate_cell_observations(
    const SimilarityFrame& frame, const GridFrame& grid, double top_quantile);

// alpha_c * d^2 / n, floored to keep the variance strictly positive.
double observation_variance(int n, double dist, double alpha_c, double floor_value);

// K = var_obs / (var_prior + var_obs); mean = obs + K (prior - obs);
// var = (1 - K) var_obs. Equivalent to the inverse-variance weighted mean.
Gaussian1 kalman_fuse(const Gaussian1& prior, const Gaussian1& obs);

// Task-specific semantic confidence grid.
class ConfidenceGrid {
 public:
  ConfidenceGrid(GridFrame frame, ConfidenceParams params = {});

  const GridFrame& frame() const { return frame_; }
  const ConfidenceParams& params() const { return params_; }
  const ConfidenceCell& cell(const CellIndex& c) const;

  // Full update: direct per-cell fusion (distance-gated by tau_d) followed by
  // raycast decay into the free cells between the sensor and each hit cell.
  void integrate_frame(const SimilarityFrame& frame);

  // Fuses one observation into one cell; first observation initializes.
  void fuse_cell(const CellIndex& c, double s_t, double var_t);

  void reset();

  void write_dump(std::ostream& os) const;
  static ConfidenceGrid parse_dump(std::istream& is);

 private:
  GridFrame frame_;
  ConfidenceParams params_;
  std::vector<ConfidenceCell> cells_;
};

// Per-cell maximum over several task maps (all sharing one frame); cells
// observed in no map stay unobserved.
ConfidenceGrid fuse_multi_target(std::span<const ConfidenceGrid* const> maps);

}  // namespace objnav
