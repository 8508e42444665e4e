#include "objnav/map/feature_map.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "objnav/kernels/vecops.hpp"

namespace objnav {

std::array<BilinearWeight, 4> bilinear_weights(double x, double y, int upsample, int patch_w,
                                               int patch_h) {
  const double xf = x / upsample;
  const double yf = y / upsample;
  const int u0 = static_cast<int>(std::floor(xf));
  const int v0 = static_cast<int>(std::floor(yf));
  std::array<BilinearWeight, 4> out;
  int i = 0;
  for (int dv = 0; dv <= 1; ++dv) {
    for (int du = 0; du <= 1; ++du) {
      const int u = u0 + du;
      const int v = v0 + dv;
      const double w = (1.0 - std::abs(xf - u)) * (1.0 - std::abs(yf - v));
      out[i++] = {std::clamp(u, 0, patch_w - 1), std::clamp(v, 0, patch_h - 1), w};
    }
  }
  return out;
}

std::uint64_t morton_index(const VoxelKey& k) {
  auto spread = [](std::uint64_t v) {
    v &= 0x1fffff;  // 21 bits
    v = (v | (v << 32)) & 0x1f00000000ffffULL;
    v = (v | (v << 16)) & 0x1f0000ff0000ffULL;
    v = (v | (v << 8)) & 0x100f00f00f00f00fULL;
    v = (v | (v << 4)) & 0x10c30c30c30c30c3ULL;
    v = (v | (v << 2)) & 0x1249249249249249ULL;
    return v;
  };
  const std::uint64_t bias = 1u << 20;
  const std::uint64_t bx = spread(static_cast<std::uint32_t>(k.x + bias));
  const std::uint64_t by = spread(static_cast<std::uint32_t>(k.y + bias));
  const std::uint64_t bz = spread(static_cast<std::uint32_t>(k.z + bias));
  return bx | (by << 1) | (bz << 2);
}

FeatureVoxelMap::FeatureVoxelMap(double voxel_size, int dim, double alpha_c,
                                 double variance_floor)
    : voxel_size_(voxel_size), dim_(dim), alpha_c_(alpha_c), variance_floor_(variance_floor) {
  if (voxel_size <= 0.0) throw InvalidObservation("voxel size must be > 0");
  if (dim <= 0) throw InvalidObservation("embedding dim must be > 0");
}

VoxelKey FeatureVoxelMap::key_for(const Vec3& p) const {
  return {static_cast<int32_t>(std::floor(p.x / voxel_size_)),
          static_cast<int32_t>(std::floor(p.y / voxel_size_)),
          static_cast<int32_t>(std::floor(p.z / voxel_size_))};
}

Vec3 FeatureVoxelMap::center(const VoxelKey& k) const {
  return {(k.x + 0.5) * voxel_size_, (k.y + 0.5) * voxel_size_, (k.z + 0.5) * voxel_size_};
}

const VoxelRecord* FeatureVoxelMap::find(const VoxelKey& k) const {
  auto it = voxels_.find(k);
  return it == voxels_.end() ? nullptr : &it->second;
}

void FeatureVoxelMap::accumulate_projection(VoxelAccumulator& acc,
                                            std::span<const DepthPixel> pixels,
                                            const FeatureVoxelMap& map, int upsample, int patch_w,
                                            int patch_h) {
  for (const DepthPixel& px : pixels) {
    auto& entry = acc.entries[map.key_for(px.world)];
    entry.count += 1;
    for (const BilinearWeight& bw : bilinear_weights(px.px, px.py, upsample, patch_w, patch_h)) {
      entry.weights[{bw.u, bw.v}] += bw.w;
    }
  }
}

std::optional<std::vector<double>> FeatureVoxelMap::finalize_voxel_feature(
    const VoxelAccumulator::Entry& entry, const PatchGrid& patches) {
  if (entry.weights.empty()) return std::nullopt;
  double weight_sum = 0.0;
  std::vector<double> acc(patches.dim, 0.0);
  for (const auto& [uv, w] : entry.weights) {
    vecops::axpy(w, patches.at(uv.first, uv.second), acc);
    weight_sum += w;
  }
  if (weight_sum <= 0.0) return std::nullopt;
  vecops::scale(acc, 1.0 / weight_sum);
  if (!vecops::normalize(acc)) return std::nullopt;
  return acc;
}

void FeatureVoxelMap::fuse_voxel(const VoxelKey& k, std::span<const double> f_t,
                                 double dist_to_sensor, int n, std::int64_t step) {
  if (static_cast<int>(f_t.size()) != dim_) throw InvalidObservation("feature dim mismatch");
  const double var_t = std::max(alpha_c_ * dist_to_sensor * dist_to_sensor / std::max(n, 1),
                                variance_floor_);
  auto it = voxels_.find(k);
  if (it == voxels_.end()) {
    VoxelRecord rec;
    rec.feature.assign(f_t.begin(), f_t.end());
    rec.sigma2 = var_t;
    rec.last_update = step;
    voxels_.emplace(k, std::move(rec));
    return;
  }
  VoxelRecord& rec = it->second;
  const double kgain = var_t / (rec.sigma2 + var_t);
  std::vector<double> fused(dim_);
  vecops::blend(f_t, rec.feature, kgain, fused);
  if (vecops::normalize(fused)) {
    rec.feature = std::move(fused);
  }
  rec.sigma2 = (1.0 - kgain) * var_t;
  rec.last_update = step;
}

void FeatureVoxelMap::integrate_frame(const PatchGrid& patches,
                                      std::span<const DepthPixel> pixels, const Vec3& sensor,
                                      int upsample, std::int64_t step) {
  VoxelAccumulator acc;
  accumulate_projection(acc, pixels, *this, upsample, patches.width, patches.height);
  for (const auto& [key, entry] : acc.entries) {
    auto feature = finalize_voxel_feature(entry, patches);
    if (!feature) continue;
    const Vec3 c = center(key);
    const double dist = std::sqrt((c.x - sensor.x) * (c.x - sensor.x) +
                                  (c.y - sensor.y) * (c.y - sensor.y) +
                                  (c.z - sensor.z) * (c.z - sensor.z));
    fuse_voxel(key, *feature, dist, entry.count, step);
  }
}

void FeatureVoxelMap::prune_height_band(double z_floor, double z_ceiling) {
  if (!(z_floor < z_ceiling)) throw InvalidObservation("z_floor must be below z_ceiling");
  for (auto it = voxels_.begin(); it != voxels_.end();) {
    const double z = center(it->first).z;
    if (z <= z_floor || z >= z_ceiling) {
      it = voxels_.erase(it);
    } else {
      ++it;
    }
  }
}

std::vector<std::pair<VoxelKey, double>> FeatureVoxelMap::query_similarity(
    std::span<const double> query) const {
  if (static_cast<int>(query.size()) != dim_) throw InvalidObservation("query dim mismatch");
  std::vector<std::pair<VoxelKey, double>> out;
  out.reserve(voxels_.size());
  for (const auto& [key, rec] : voxels_) {
    out.emplace_back(key, vecops::dot(query, rec.feature));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return morton_index(a.first) < morton_index(b.first);
  });
  return out;
}

void FeatureVoxelMap::write_dump(std::ostream& os) const {
  std::vector<const decltype(voxels_)::value_type*> rows;
  rows.reserve(voxels_.size());
  for (const auto& kv : voxels_) rows.push_back(&kv);
  std::sort(rows.begin(), rows.end(), [](const auto* a, const auto* b) {
    return morton_index(a->first) < morton_index(b->first);
  });
  char buf[128];
  std::snprintf(buf, sizeof(buf), "objnav-voxels v1 %zu %d %.17g\n", voxels_.size(), dim_,
                voxel_size_);
  os << buf;
  for (const auto* kv : rows) {
    std::snprintf(buf, sizeof(buf), "%d %d %d %.17g", kv->first.x, kv->first.y, kv->first.z,
                  kv->second.sigma2);
    os << buf;
    for (double v : kv->second.feature) {
      std::snprintf(buf, sizeof(buf), " %.17g", v);
      os << buf;
    }
    os << '\n';
  }
  os << "end\n";
}

}  // namespace objnav
