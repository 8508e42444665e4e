#include "objnav/map/confidence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>

namespace objnav {

std::map<std::size_t, CellObservation> aggregate_cell_observations(
    const SimilarityFrame& frame, const GridFrame& grid, double top_quantile) {
  if (top_quantile <= 0.0 || top_quantile > 1.0)
    throw InvalidObservation("top_quantile must be in (0,1]");
  std::map<std::size_t, std::vector<double>> buckets;
  for (const SimilarityPoint& p : frame.points) {
    if (!grid.contains(p.xy)) continue;
    buckets[grid.linear_index(grid.world_to_grid(p.xy))].push_back(p.similarity);
  }
  std::map<std::size_t, CellObservation> out;
  for (auto& [idx, sims] : buckets) {
    std::sort(sims.begin(), sims.end(), std::greater<double>());
    const int n = static_cast<int>(sims.size());
    const int k = static_cast<int>(std::ceil(top_quantile * n));
    double sum = 0.0;
    for (int i = 0; i < k; ++i) sum += sims[i];
    CellObservation obs;
    obs.s_t = sum / k;
    obs.n = n;
    obs.dist = (grid.grid_to_world(grid.from_linear(idx)) - frame.sensor_origin).norm();
    out.emplace(idx, obs);
  }
  return out;
}

double observation_variance(int n, double dist, double alpha_c, double floor_value) {
  if (n < 1) throw InvalidObservation("observation needs at least one point");
  return std::max(alpha_c * dist * dist / n, floor_value);
}

Gaussian1 kalman_fuse(const Gaussian1& prior, const Gaussian1& obs) {
  if (!(prior.var > 0.0) || !(obs.var > 0.0))
    throw InvalidObservation("kalman fusion requires positive variances");
  const double k = obs.var / (prior.var + obs.var);
  Gaussian1 out;
  out.mean = obs.mean + k * (prior.mean - obs.mean);
  out.var = (1.0 - k) * obs.var;
  return out;
}

ConfidenceGrid::ConfidenceGrid(GridFrame frame, ConfidenceParams params)
    : frame_(frame), params_(params) {
  cells_.assign(frame_.cell_count(), ConfidenceCell{});
}

const ConfidenceCell& ConfidenceGrid::cell(const CellIndex& c) const {
  if (!frame_.in_bounds(c)) throw OutOfBounds("confidence cell out of bounds");
  return cells_[frame_.linear_index(c)];
}

void ConfidenceGrid::fuse_cell(const CellIndex& c, double s_t, double var_t) {
  if (!frame_.in_bounds(c)) throw OutOfBounds("confidence update out of bounds");
  ConfidenceCell& cc = cells_[frame_.linear_index(c)];
  if (!cc.observed) {
    cc.s = s_t;
    cc.sigma2 = var_t;
    cc.observed = true;
  } else {
    const Gaussian1 fused = kalman_fuse({cc.s, cc.sigma2}, {s_t, var_t});
    cc.s = fused.mean;
    cc.sigma2 = fused.var;
  }
  cc.s = std::clamp(cc.s, 0.0, 1.0);
}

void ConfidenceGrid::integrate_frame(const SimilarityFrame& frame) {
  const auto observations = aggregate_cell_observations(frame, frame_, params_.top_quantile);

  // Direct fusion of hit cells; beyond tau_d the update still lands but with
  // an inflated variance.
  std::map<std::size_t, double> effective_var;
  for (const auto& [idx, obs] : observations) {
    double var_t = observation_variance(obs.n, obs.dist, params_.alpha_c, params_.variance_floor);
    if (obs.dist > params_.tau_d) var_t /= params_.far_weight;
    effective_var[idx] = var_t;
    fuse_cell(frame_.from_linear(idx), obs.s_t, var_t);
  }

  // Raycast decay into the free cells crossed on the way to each hit cell.
  for (const auto& [idx, obs] : observations) {
    const CellIndex hit = frame_.from_linear(idx);
    const Vec2 hit_center = frame_.grid_to_world(hit);
    if (!frame_.contains(frame.sensor_origin)) continue;
    const double var_free = params_.beta * effective_var[idx];
    const auto ray = raycast_cells(frame_, frame.sensor_origin, hit_center);
    for (std::size_t i = 0; i + 1 < ray.size(); ++i) {
      const double d = (frame_.grid_to_world(ray[i]) - hit_center).norm();
      const double s_free = std::max(obs.s_t - params_.gamma * d, 0.0);
      fuse_cell(ray[i], s_free, var_free);
    }
  }
}

void ConfidenceGrid::reset() { cells_.assign(frame_.cell_count(), ConfidenceCell{}); }

void ConfidenceGrid::write_dump(std::ostream& os) const {
  char buf[512];
  std::snprintf(buf, sizeof(buf), "objnav-grid v1 confidence\nframe %.17g %.17g %.17g %d %d\n",
                frame_.origin().x, frame_.origin().y, frame_.resolution(), frame_.width(),
                frame_.height());
  os << buf;
  std::snprintf(buf, sizeof(buf),
                "params %.17g %.17g %.17g %.17g %.17g %.17g %.17g\ncells\n", params_.alpha_c,
                params_.gamma, params_.beta, params_.tau_d, params_.top_quantile,
                params_.far_weight, params_.variance_floor);
  os << buf;
  for (int row = 0; row < frame_.height(); ++row) {
    for (int col = 0; col < frame_.width(); ++col) {
      const ConfidenceCell& c = cells_[frame_.linear_index({col, row})];
      std::snprintf(buf, sizeof(buf), "%s%.17g %.17g %d", col == 0 ? "" : " ", c.s, c.sigma2,
                    c.observed ? 1 : 0);
      os << buf;
    }
    os << '\n';
  }
  os << "end\n";
}

ConfidenceGrid ConfidenceGrid::parse_dump(std::istream& is) {
  std::string tag, version, kind;
  is >> tag >> version >> kind;
  if (tag != "objnav-grid" || version != "v1" || kind != "confidence")
    throw DataError("not a confidence grid dump");
  std::string word;
  double ox, oy, res;
  int w, h;
  is >> word >> ox >> oy >> res >> w >> h;
  if (word != "frame" || !is) throw DataError("bad grid dump frame line");
  ConfidenceParams p;
  is >> word >> p.alpha_c >> p.gamma >> p.beta >> p.tau_d >> p.top_quantile >> p.far_weight >>
      p.variance_floor;
  if (word != "params" || !is) throw DataError("bad grid dump params line");
  is >> word;
  if (word != "cells") throw DataError("bad grid dump cells header");
  ConfidenceGrid grid(GridFrame(res, {ox, oy}, w, h), p);
  for (std::size_t i = 0; i < grid.cells_.size(); ++i) {
    int obs = 0;
    is >> grid.cells_[i].s >> grid.cells_[i].sigma2 >> obs;
    grid.cells_[i].observed = obs != 0;
  }
  if (!is) throw DataError("truncated grid dump");
  is >> word;
  if (word != "end") throw DataError("missing grid dump terminator");
  return grid;
}

ConfidenceGrid fuse_multi_target(std::span<const ConfidenceGrid* const> maps) {
  if (maps.empty()) throw InvalidObservation("fuse_multi_target needs at least one map");
  const GridFrame& frame = maps.front()->frame();
  for (const ConfidenceGrid* m : maps) {
    if (!(m->frame() == frame)) throw FrameMismatch("confidence maps on different frames");
  }
  ConfidenceGrid out(frame, maps.front()->params());
  for (int row = 0; row < frame.height(); ++row) {
    for (int col = 0; col < frame.width(); ++col) {
      const CellIndex c{col, row};
      bool any = false;
      double best_s = 0.0, best_var = 0.0;
      for (const ConfidenceGrid* m : maps) {
        const ConfidenceCell& mc = m->cell(c);
        if (!mc.observed) continue;
        if (!any || mc.s > best_s) {
          best_s = mc.s;
          best_var = mc.sigma2;
        }
        any = true;
      }
      if (any) {
        out.fuse_cell(c, best_s, std::max(best_var, out.params().variance_floor));
      }
    }
  }
  return out;
}

}  // namespace objnav
