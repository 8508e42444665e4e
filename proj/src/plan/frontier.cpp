#include "objnav/plan/frontier.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace objnav {

namespace {

constexpr int kNeighbors8[8][2] = {{-1, -1}, {0, -1}, {1, -1}, {-1, 0},
                                   {1, 0},   {-1, 1}, {0, 1},  {1, 1}};

bool line_of_sight_free(const OccupancyGrid& occ, const Vec2& from, const Vec2& to) {
  for (const CellIndex& c : raycast_cells(occ.frame(), from, to)) {
    if (occ.classify(c) == CellState::Occupied) return false;
  }
  return true;
}

}  // namespace

std::vector<CellIndex> extract_frontiers(const OccupancyGrid& occ) {
  const GridFrame& f = occ.frame();
  std::vector<CellIndex> out;
  for (int row = 0; row < f.height(); ++row) {
    for (int col = 0; col < f.width(); ++col) {
      const CellIndex c{col, row};
      if (occ.classify(c) != CellState::Free) continue;
      bool frontier = false;
      for (const auto& d : kNeighbors8) {
        const CellIndex n{col + d[0], row + d[1]};
        if (f.in_bounds(n) && occ.classify(n) == CellState::Unknown) {
          frontier = true;
          break;
        }
      }
      if (frontier) out.push_back(c);
    }
  }
  return out;
}

std::vector<std::vector<CellIndex>> cluster_frontiers(std::span<const CellIndex> cells,
                                                      const GridFrame& frame,
                                                      int min_cluster_size) {
  std::unordered_set<std::size_t> pending;
  for (const CellIndex& c : cells) pending.insert(frame.linear_index(c));

  std::vector<std::vector<CellIndex>> clusters;
  // Seed scan in linear-index order keeps the component ordering (and the
  // per-component smallest member) deterministic.
  for (const CellIndex& seed : cells) {
    const std::size_t seed_idx = frame.linear_index(seed);
    if (!pending.count(seed_idx)) continue;
    std::vector<CellIndex> component;
    std::vector<CellIndex> stack{seed};
    pending.erase(seed_idx);
    while (!stack.empty()) {
      const CellIndex c = stack.back();
      stack.pop_back();
      component.push_back(c);
      for (const auto& d : kNeighbors8) {
        const CellIndex n{c.col + d[0], c.row + d[1]};
        if (!frame.in_bounds(n)) continue;
        const std::size_t idx = frame.linear_index(n);
        if (pending.count(idx)) {
          pending.erase(idx);
          stack.push_back(n);
        }
      }
    }
    if (static_cast<int>(component.size()) >= min_cluster_size) {
      std::sort(component.begin(), component.end(), [&](const CellIndex& a, const CellIndex& b) {
        return frame.linear_index(a) < frame.linear_index(b);
      });
      clusters.push_back(std::move(component));
    }
  }
  std::sort(clusters.begin(), clusters.end(), [&](const auto& a, const auto& b) {
    return frame.linear_index(a.front()) < frame.linear_index(b.front());
  });
  return clusters;
}

std::optional<Pose2> generate_viewpoint(std::span<const CellIndex> cluster,
                                        const OccupancyGrid& occ, double sensor_range) {
  if (cluster.empty()) return std::nullopt;
  const GridFrame& f = occ.frame();

  Vec2 centroid{0.0, 0.0};
  for (const CellIndex& c : cluster) centroid = centroid + f.grid_to_world(c);
  centroid = centroid * (1.0 / cluster.size());

  const int r = static_cast<int>(std::ceil(sensor_range / f.resolution()));
  CellIndex center_cell{
      std::clamp(static_cast<int>(std::floor((centroid.x - f.origin().x) / f.resolution())), 0,
                 f.width() - 1),
      std::clamp(static_cast<int>(std::floor((centroid.y - f.origin().y) / f.resolution())), 0,
                 f.height() - 1)};

  int best_score = 0;
  double best_dist = 0.0;
  std::size_t best_idx = 0;
  bool found = false;

  for (int row = std::max(0, center_cell.row - r);
       row <= std::min(f.height() - 1, center_cell.row + r); ++row) {
    for (int col = std::max(0, center_cell.col - r);
         col <= std::min(f.width() - 1, center_cell.col + r); ++col) {
      const CellIndex cand{col, row};
      if (occ.classify(cand) != CellState::Free) continue;
      const Vec2 pos = f.grid_to_world(cand);
      const double dist = (pos - centroid).norm();
      if (dist > sensor_range) continue;
      int score = 0;
      for (const CellIndex& fc : cluster) {
        if (line_of_sight_free(occ, pos, f.grid_to_world(fc))) ++score;
      }
      if (score == 0) continue;
      const std::size_t idx = f.linear_index(cand);
      const bool better = !found || score > best_score ||
                          (score == best_score &&
                           (dist < best_dist || (dist == best_dist && idx < best_idx)));
      if (better) {
        best_score = score;
        best_dist = dist;
        best_idx = idx;
        found = true;
      }
    }
  }
  if (!found) return std::nullopt;
  const Vec2 vp = f.grid_to_world(f.from_linear(best_idx));
  const double heading = std::atan2(centroid.y - vp.y, centroid.x - vp.x);
  return Pose2{vp.x, vp.y, heading};
}

double compute_h_k(const Pose2& viewpoint, const Vec2& centroid, const OccupancyGrid& occ,
                   double h_max) {
  const GridFrame& f = occ.frame();
  const Vec2 vp = viewpoint.position();
  Vec2 dir = centroid - vp;
  const double len = dir.norm();
  if (len < 1e-12) return h_max;
  dir = dir * (1.0 / len);

  // March from the centroid outward by up to h_max, clipped to the frame.
  Vec2 end = centroid + dir * h_max;
  {
    const double eps = f.resolution() * 1e-9;
    double t = 1.0;
    const double lo_x = f.origin().x + eps, hi_x = f.origin().x + f.width() * f.resolution() - eps;
    const double lo_y = f.origin().y + eps, hi_y = f.origin().y + f.height() * f.resolution() - eps;
    const double dx = end.x - centroid.x, dy = end.y - centroid.y;
    if (dx > 0.0) t = std::min(t, (hi_x - centroid.x) / dx);
    if (dx < 0.0) t = std::min(t, (lo_x - centroid.x) / dx);
    if (dy > 0.0) t = std::min(t, (hi_y - centroid.y) / dy);
    if (dy < 0.0) t = std::min(t, (lo_y - centroid.y) / dy);
    end = centroid + Vec2{dx, dy} * std::max(t, 0.0);
  }
  if (!f.contains(centroid)) return h_max;

  const auto ray = raycast_cells(f, centroid, end);
  for (std::size_t i = 1; i < ray.size(); ++i) {
    const CellState s = occ.classify(ray[i]);
    if (s == CellState::Free || s == CellState::Occupied) {
      const double d = (f.grid_to_world(ray[i]) - centroid).norm();
      return std::clamp(d, f.resolution() * 0.5, h_max);
    }
  }
  return h_max;
}

std::vector<FrontierCluster> build_frontier_clusters(const OccupancyGrid& occ,
                                                     const FrontierParams& params) {
  const auto frontier_cells = extract_frontiers(occ);
  const auto components = cluster_frontiers(frontier_cells, occ.frame(), params.min_cluster_size);
  std::vector<FrontierCluster> out;
  for (const auto& comp : components) {
    auto vp = generate_viewpoint(comp, occ, params.sensor_range);
    if (!vp) continue;  // walled off this cycle
    FrontierCluster cluster;
    cluster.cells = comp;
    Vec2 centroid{0.0, 0.0};
    for (const CellIndex& c : comp) centroid = centroid + occ.frame().grid_to_world(c);
    cluster.centroid = centroid * (1.0 / comp.size());
    cluster.viewpoint = *vp;
    cluster.h_k = compute_h_k(*vp, cluster.centroid, occ, params.h_max);
    cluster.id = static_cast<std::int64_t>(occ.frame().linear_index(comp.front()));
    out.push_back(std::move(cluster));
  }
  return out;
}

}  // namespace objnav
