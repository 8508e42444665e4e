#include "objnav/sim/sensors.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "objnav/kernels/vecops.hpp"

namespace objnav {

namespace {

struct GeomHit {
  double angle = 0.0;
  double range = 0.0;  // exact entry distance, or max_range when no hit
  bool hit = false;
  CellIndex cell;
  Vec2 mid;  // strictly inside the hit cell
};

// Clip a segment starting inside the frame; returns the scaled endpoint.
Vec2 clip_segment(const GridFrame& f, const Vec2& from, const Vec2& to, double* scale) {
  const double eps = f.resolution() * 1e-9;
  const double lo_x = f.origin().x + eps, hi_x = f.origin().x + f.width() * f.resolution() - eps;
  const double lo_y = f.origin().y + eps, hi_y = f.origin().y + f.height() * f.resolution() - eps;
  double t = 1.0;
  const double dx = to.x - from.x, dy = to.y - from.y;
  if (dx > 0.0) t = std::min(t, (hi_x - from.x) / dx);
  if (dx < 0.0) t = std::min(t, (lo_x - from.x) / dx);
  if (dy > 0.0) t = std::min(t, (hi_y - from.y) / dy);
  if (dy < 0.0) t = std::min(t, (lo_y - from.y) / dy);
  t = std::max(t, 0.0);
  if (scale) *scale = t;
  return from + Vec2{dx, dy} * t;
}

std::vector<GeomHit> march_rays(const Scene& scene, const Pose2& pose,
                                const SensorModel& sensor) {
  const GridFrame& f = scene.frame();
  if (!f.contains(pose.position())) throw InvalidPose("sensor pose outside scene");
  if (scene.is_wall(f.world_to_grid(pose.position()))) throw InvalidPose("sensor pose in a wall");

  std::vector<GeomHit> out;
  out.reserve(sensor.n_rays);
  for (int i = 0; i < sensor.n_rays; ++i) {
    GeomHit g;
    g.angle = normalize_angle(pose.heading - sensor.fov / 2.0 +
                              sensor.fov * (i + 0.5) / sensor.n_rays);
    const Vec2 dir{std::cos(g.angle), std::sin(g.angle)};
    double clip_scale = 1.0;
    const Vec2 end = clip_segment(f, pose.position(), pose.position() + dir * sensor.max_range,
                                  &clip_scale);
    const double seg_len = sensor.max_range * clip_scale;
    g.range = sensor.max_range;

    const auto cells = raycast_cells(f, pose.position(), end);
    for (std::size_t c = 1; c < cells.size(); ++c) {
      if (!scene.blocks_ray(cells[c])) continue;
      // slab entry/exit of the blocked cell along the segment
      const double res = f.resolution();
      const double cx = f.origin().x + cells[c].col * res;
      const double cy = f.origin().y + cells[c].row * res;
      const double dx = end.x - pose.x, dy = end.y - pose.y;
      double t_entry = 0.0, t_exit = 1.0;
      if (dx != 0.0) {
        const double t0 = (cx - pose.x) / dx, t1 = (cx + res - pose.x) / dx;
        t_entry = std::max(t_entry, std::min(t0, t1));
        t_exit = std::min(t_exit, std::max(t0, t1));
      }
      if (dy != 0.0) {
        const double t0 = (cy - pose.y) / dy, t1 = (cy + res - pose.y) / dy;
        t_entry = std::max(t_entry, std::min(t0, t1));
        t_exit = std::min(t_exit, std::max(t0, t1));
      }
      g.hit = true;
      g.cell = cells[c];
      g.range = t_entry * seg_len;
      const double t_mid = 0.5 * (t_entry + t_exit);
      g.mid = pose.position() + Vec2{dx, dy} * t_mid;
      break;
    }
    out.push_back(g);
  }
  return out;
}

double surface_similarity(const Scene& scene, const std::string& query, const CellIndex& cell,
                          double z) {
  for (int idx : scene.objects_at(cell)) {
    const SceneObject& o = scene.objects()[idx];
    if (o.detectable && z >= o.z0 && z <= o.z1) {
      return scene.object_affinity(query, o.category);
    }
  }
  const std::string& region = scene.region_name(cell);
  return region.empty() ? 0.0 : scene.region_affinity(query, region);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::vector<DepthRay> render_depth_scan(const Scene& scene, const Pose2& pose,
                                        const SensorModel& sensor, std::uint64_t seed,
                                        std::uint64_t step) {
  Rng rng = Rng::for_stream(seed, step, 1);
  const auto geom = march_rays(scene, pose, sensor);
  std::vector<DepthRay> out;
  out.reserve(geom.size());
  for (const GeomHit& g : geom) {
    DepthRay r;
    r.angle = g.angle;
    r.hit = g.hit;
    r.cell = g.cell;
    r.point = g.mid;
    const double noise = rng.next_gaussian() * sensor.depth_noise;
    r.range = std::clamp(g.range + noise, 0.0, sensor.max_range);
    out.push_back(r);
  }
  return out;
}

std::vector<Vec2> scan_endpoints(const Pose2& pose, std::span<const DepthRay> rays) {
  std::vector<Vec2> out;
  out.reserve(rays.size());
  for (const DepthRay& r : rays) {
    out.push_back(pose.position() + Vec2{std::cos(r.angle), std::sin(r.angle)} * r.range);
  }
  return out;
}

SimilarityFrame render_similarity_frame(const Scene& scene, const Pose2& pose,
                                        const SensorModel& sensor, const std::string& query,
                                        std::uint64_t seed, std::uint64_t step) {
  Rng rng = Rng::for_stream(seed, step, 2 ^ fnv1a(query));
  const auto geom = march_rays(scene, pose, sensor);
  SimilarityFrame frame;
  frame.sensor_origin = pose.position();
  for (const GeomHit& g : geom) {
    if (!g.hit) continue;
    for (int j = 0; j < sensor.v_samples; ++j) {
      const double z = (j + 0.5) / sensor.v_samples * scene.wall_height();
      const double base = surface_similarity(scene, query, g.cell, z);
      const double noise = rng.next_gaussian() * sensor.sim_noise;
      frame.points.push_back({g.mid, z, std::clamp(base + noise, 0.0, 1.0)});
    }
  }
  return frame;
}

PatchRender render_patch_features(const Scene& scene, const Pose2& pose,
                                  const SensorModel& sensor, std::uint64_t seed,
                                  std::uint64_t step) {
  const int width = sensor.n_rays;
  const int height = sensor.image_rows;
  const int r = sensor.patch_upsample;
  if (width % r != 0 || height % r != 0)
    throw InvalidObservation("image dimensions must be multiples of the upsample factor");

  Rng rng = Rng::for_stream(seed, step, 3);
  const auto geom = march_rays(scene, pose, sensor);
  const EmbeddingTable& table = scene.embeddings();

  PatchRender out;
  out.upsample = r;
  out.patches = PatchGrid(width / r, height / r, table.dim());

  // Surface name per pixel; misses and unlabeled cells read as the void
  // surface.
  std::vector<std::string> surface(static_cast<std::size_t>(width) * height);
  for (int x = 0; x < width; ++x) {
    const GeomHit& g = geom[x];
    for (int y = 0; y < height; ++y) {
      std::string name = "__void__";
      if (g.hit) {
        const double z = (y + 0.5) / height * scene.wall_height();
        const std::string s = scene.surface_at(g.cell, z);
        if (!s.empty()) name = s;
        out.pixels.push_back({static_cast<double>(x), static_cast<double>(y),
                              {g.mid.x, g.mid.y, z}});
      }
      surface[static_cast<std::size_t>(y) * width + x] = std::move(name);
    }
  }

  for (int v = 0; v < out.patches.height; ++v) {
    for (int u = 0; u < out.patches.width; ++u) {
      std::map<std::string, int> counts;
      for (int y = v * r; y < (v + 1) * r; ++y) {
        for (int x = u * r; x < (u + 1) * r; ++x) {
          counts[surface[static_cast<std::size_t>(y) * width + x]] += 1;
        }
      }
      const std::string* dominant = nullptr;
      int best = -1;
      for (const auto& [name, count] : counts) {
        if (count > best) {  // map order already breaks ties lexicographically
          best = count;
          dominant = &name;
        }
      }
      auto patch = out.patches.at(u, v);
      const auto base = table.get(*dominant);
      for (int d = 0; d < table.dim(); ++d) {
        patch[d] = base[d] + rng.next_gaussian() * sensor.embed_noise;
      }
      if (!vecops::normalize(patch)) {
        std::copy(base.begin(), base.end(), patch.begin());
      }
    }
  }
  return out;
}

std::vector<Detection> detect_objects(const Scene& scene, const Pose2& pose,
                                      const SensorModel& sensor,
                                      std::span<const std::string> categories,
                                      std::uint64_t seed, std::uint64_t step,
                                      DecoyLedger& decoys) {
  Rng rng = Rng::for_stream(seed, step, 4);
  std::vector<Detection> out;
  for (const SceneObject& o : scene.objects()) {
    if (!o.detectable) continue;
    const std::string& reported = o.is_decoy() ? o.decoy_category : o.category;
    if (std::find(categories.begin(), categories.end(), reported) == categories.end()) continue;

    const Vec2 delta = o.xy - pose.position();
    const double dist = delta.norm();
    if (dist > sensor.detect_range) continue;
    const double bearing = normalize_angle(std::atan2(delta.y, delta.x) - pose.heading);
    if (std::abs(bearing) > sensor.fov / 2.0) continue;
    if (!scene.line_of_sight(pose.position(), o.xy)) continue;

    Detection det;
    det.category = reported;
    det.pose = Pose2{o.xy.x, o.xy.y, std::atan2(delta.y, delta.x)};
    if (o.is_decoy()) {
      const int n = decoys.reports[o.id]++;
      det.confidence = std::clamp(n == 0 ? o.decoy_first : o.decoy_rest, 0.0, 1.0);
    } else {
      const double noise = rng.next_gaussian() * sensor.detect_noise;
      det.confidence = std::clamp(sensor.detect_c0 - sensor.detect_cd * dist -
                                      sensor.detect_ca * std::abs(bearing) / sensor.fov + noise,
                                  0.0, 1.0);
    }
    out.push_back(std::move(det));
  }
  return out;
}

bool check_success(const Scene& scene, const Vec2& pos, const std::string& category,
                   double success_radius) {
  for (const SceneObject& o : scene.objects()) {
    if (o.category != category) continue;
    if ((o.xy - pos).norm() > success_radius) continue;
    if (scene.line_of_sight(pos, o.xy)) return true;
  }
  return false;
}

}  // namespace objnav
