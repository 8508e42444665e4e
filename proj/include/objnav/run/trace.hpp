#pragma once

#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "objnav/map/confidence.hpp"
#include "objnav/map/occupancy.hpp"
#include "objnav/plan/frontier.hpp"
#include "objnav/plan/wtrp.hpp"
#include "objnav/run/metrics.hpp"

namespace objnav {

// Line-delimited JSON episode trace consumed by the frame emitter: one
// header record, one snapshot per planning cycle, one end record.
class TraceWriter {
 public:
  TraceWriter(const std::string& path, const EpisodeSpec& spec, const GridFrame& frame);

  void snapshot(int step, const Pose2& pose, const OccupancyGrid& occ,
                const ConfidenceGrid* fused, std::span<const CellIndex> frontier_cells,
                std::span<const Candidate> candidates, std::span<const Candidate> tour,
                const Candidate* goal, std::span<const Vec2> trail_segment);

  void finish(const EpisodeResult& result);

 private:
  std::ofstream os_;
};

}  // namespace objnav
