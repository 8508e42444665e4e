#include "objnav/run/trace.hpp"

#include <sstream>

#include <json.hpp>

namespace objnav {

using nlohmann::ordered_json;

TraceWriter::TraceWriter(const std::string& path, const EpisodeSpec& spec,
                         const GridFrame& frame)
    : os_(path) {
  if (!os_) throw DataError("cannot open trace file for writing: " + path);
  ordered_json header;
  header["type"] = "header";
  header["schema"] = "objnav-trace/1";
  header["scene"] = spec.scene;
  header["episode"] = spec.index;
  header["targets"] = spec.targets;
  header["mode"] = to_string(spec.mode);
  header["frame"] = {frame.origin().x, frame.origin().y, frame.resolution(), frame.width(),
                     frame.height()};
  os_ << header.dump() << "\n";
}

void TraceWriter::snapshot(int step, const Pose2& pose, const OccupancyGrid& occ,
                           const ConfidenceGrid* fused,
                           std::span<const CellIndex> frontier_cells,
                           std::span<const Candidate> candidates,
                           std::span<const Candidate> tour, const Candidate* goal,
                           std::span<const Vec2> trail_segment) {
  ordered_json snap;
  snap["type"] = "snap";
  snap["step"] = step;
  snap["pose"] = {pose.x, pose.y, pose.heading};

  std::ostringstream occ_dump;
  occ.write_dump(occ_dump);
  snap["occupancy"] = occ_dump.str();
  if (fused) {
    std::ostringstream conf_dump;
    fused->write_dump(conf_dump);
    snap["confidence"] = conf_dump.str();
  }

  auto cells = ordered_json::array();
  for (const CellIndex& c : frontier_cells) cells.push_back({c.col, c.row});
  snap["frontiers"] = std::move(cells);

  auto to_json = [](const Candidate& c) {
    ordered_json j;
    j["kind"] = static_cast<int>(c.kind);
    j["id"] = c.id;
    j["x"] = c.pose.x;
    j["y"] = c.pose.y;
    j["heading"] = c.pose.heading;
    j["score"] = c.score;
    return j;
  };
  auto cand_json = ordered_json::array();
  for (const Candidate& c : candidates) cand_json.push_back(to_json(c));
  snap["candidates"] = std::move(cand_json);

  auto tour_json = ordered_json::array();
  for (const Candidate& c : tour) tour_json.push_back(to_json(c));
  snap["tour"] = std::move(tour_json);

  if (goal) snap["goal"] = to_json(*goal);

  auto trail = ordered_json::array();
  for (const Vec2& p : trail_segment) trail.push_back({p.x, p.y});
  snap["trail"] = std::move(trail);

  os_ << snap.dump() << "\n";
}

void TraceWriter::finish(const EpisodeResult& result) {
  ordered_json end;
  end["type"] = "end";
  end["success"] = result.success;
  end["steps"] = result.steps;
  end["path_length"] = result.path_length;
  end["end_reason"] = result.end_reason;
  os_ << end.dump() << "\n";
  os_.flush();
}

}  // namespace objnav
