#pragma once

#include <span>
#include <string>

#include "objnav/run/metrics.hpp"
#include "objnav/run/params.hpp"
#include "objnav/sim/scene.hpp"

namespace objnav {

// Ground-truth occupancy of a scene: wall and object cells occupied,
// everything else free, inflation recounted.
OccupancyGrid ground_truth_grid(const Scene& scene, const OccupancyParams& params);

// Shortest achievable successful path length, meters, on the fully known
// scene: grid-shortest from the start into the success region of each target
// (any cell within success_radius of an instance, with line of sight).
// Simultaneous mode minimizes over category orders; sequential keeps the
// given order. Negative when some target is unreachable.
double optimal_path_length(const Scene& scene, const Pose2& start,
                           std::span<const std::string> targets, EpisodeMode mode,
                           const OccupancyParams& occ_params, double success_radius);

}  // namespace objnav
