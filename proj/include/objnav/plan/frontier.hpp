#pragma once

#include <optional>
#include <span>
#include <vector>

#include "objnav/map/occupancy.hpp"

namespace objnav {

struct FrontierCluster {
  std::vector<CellIndex> cells;  // sorted by linear index
  Vec2 centroid;
  Pose2 viewpoint;
  double h_k = 0.0;
  std::int64_t id = 0;  // linear index of the smallest member cell
};

struct FrontierParams {
  int min_cluster_size = 3;
  double sensor_range = 3.0;  // viewpoint search radius around the centroid
  double h_max = 3.0;
};

// Free cells with at least one Unknown 8-neighbor, sorted by linear index.
std::vector<CellIndex> extract_frontiers(const OccupancyGrid& occ);

// 8-connected components, ordered by smallest member index; components below
// min_cluster_size are discarded.
std::vector<std::vector<CellIndex>> cluster_frontiers(std::span<const CellIndex> cells,
                                                      const GridFrame& frame,
                                                      int min_cluster_size);

// Best vantage cell: among Free cells within sensor_range of the centroid,
// maximizes the number of cluster cells with an unobstructed line of sight
// (ties: nearer to the centroid, then smaller cell index). Heading points at
// the centroid. Empty when no candidate sees any cluster cell.
std::optional<Pose2> generate_viewpoint(std::span<const CellIndex> cluster,
                                        const OccupancyGrid& occ, double sensor_range);

// Distance from the first observed (Free or Occupied) cell beyond the
// centroid to the centroid, along the viewpoint->centroid ray; h_max when
// nothing observed within h_max.
double compute_h_k(const Pose2& viewpoint, const Vec2& centroid, const OccupancyGrid& occ,
                   double h_max);

// Full pipeline: extract, cluster, generate viewpoints (clusters without one
// are dropped for this cycle), compute h_k.
std::vector<FrontierCluster> build_frontier_clusters(const OccupancyGrid& occ,
                                                     const FrontierParams& params);

}  // namespace objnav
