#include "objnav/run/optimal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

namespace objnav {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSqrt2 = 1.4142135623730951;

// Dijkstra over the 8-connected traversable graph (same corner rule as the
// planner), seeded with per-cell initial costs.
std::vector<double> dijkstra_from(const OccupancyGrid& occ, const std::vector<double>& init) {
  const GridFrame& f = occ.frame();
  std::vector<double> dist = init;
  using Node = std::pair<double, std::size_t>;
  std::priority_queue<Node, std::vector<Node>, std::greater<Node>> open;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (dist[i] < kInf) open.push({dist[i], i});
  }
  while (!open.empty()) {
    const auto [d, idx] = open.top();
    open.pop();
    if (d > dist[idx]) continue;
    const CellIndex c = f.from_linear(idx);
    for (int dr = -1; dr <= 1; ++dr) {
      for (int dc = -1; dc <= 1; ++dc) {
        if (dc == 0 && dr == 0) continue;
        const CellIndex nb{c.col + dc, c.row + dr};
        if (!f.in_bounds(nb) || !occ.is_traversable(nb)) continue;
        if (dc != 0 && dr != 0) {
          if (!occ.is_traversable({c.col + dc, c.row}) ||
              !occ.is_traversable({c.col, c.row + dr})) {
            continue;
          }
        }
        const std::size_t nidx = f.linear_index(nb);
        const double nd = d + ((dc != 0 && dr != 0) ? kSqrt2 : 1.0);
        if (nd < dist[nidx] - 1e-12) {
          dist[nidx] = nd;
          open.push({nd, nidx});
        }
      }
    }
  }
  return dist;
}

}  // namespace

OccupancyGrid ground_truth_grid(const Scene& scene, const OccupancyParams& params) {
  OccupancyGrid occ(scene.frame(), params);
  const GridFrame& f = scene.frame();
  for (int row = 0; row < f.height(); ++row) {
    for (int col = 0; col < f.width(); ++col) {
      const CellIndex c{col, row};
      occ.apply_update(c, scene.blocks_ray(c) ? params.l_max : params.l_min);
    }
  }
  return occ;
}

double optimal_path_length(const Scene& scene, const Pose2& start,
                           std::span<const std::string> targets, EpisodeMode mode,
                           const OccupancyParams& occ_params, double success_radius) {
  const OccupancyGrid occ = ground_truth_grid(scene, occ_params);
  const GridFrame& f = scene.frame();

  // success region per target category
  std::vector<std::vector<std::size_t>> regions(targets.size());
  for (std::size_t t = 0; t < targets.size(); ++t) {
    for (int row = 0; row < f.height(); ++row) {
      for (int col = 0; col < f.width(); ++col) {
        const CellIndex c{col, row};
        if (!occ.is_traversable(c)) continue;
        const Vec2 center = f.grid_to_world(c);
        for (const SceneObject& o : scene.objects()) {
          if (o.category != targets[t]) continue;
          if ((o.xy - center).norm() > success_radius) continue;
          if (!scene.line_of_sight(center, o.xy)) continue;
          regions[t].push_back(f.linear_index(c));
          break;
        }
      }
    }
    if (regions[t].empty()) return -1.0;
  }

  const CellIndex start_cell = f.world_to_grid(start.position());
  std::vector<double> seed(f.cell_count(), kInf);
  seed[f.linear_index(start_cell)] = 0.0;

  auto chain_cost = [&](std::span<const std::size_t> order) {
    std::vector<double> cost = seed;
    for (std::size_t k = 0; k < order.size(); ++k) {
      const std::vector<double> dist = dijkstra_from(occ, cost);
      cost.assign(f.cell_count(), kInf);
      double best = kInf;
      for (std::size_t cell : regions[order[k]]) {
        cost[cell] = dist[cell];
        best = std::min(best, dist[cell]);
      }
      if (best == kInf) return kInf;
      if (k + 1 == order.size()) return best;
    }
    return kInf;
  };

  std::vector<std::size_t> order(targets.size());
  std::iota(order.begin(), order.end(), 0);

  double best = kInf;
  if (mode == EpisodeMode::SimultaneousMulti && targets.size() > 1) {
    do {
      best = std::min(best, chain_cost(order));
    } while (std::next_permutation(order.begin(), order.end()));
  } else {
    best = chain_cost(order);
  }
  if (best == kInf) return -1.0;
  return best * f.resolution();
}

}  // namespace objnav
