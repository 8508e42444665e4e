#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "objnav/core/geometry.hpp"

namespace objnav {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;
};

// Patch-level embedding image, (width x height) patches of `dim` components.
struct PatchGrid {
  int width = 0;
  int height = 0;
  int dim = 0;
  std::vector<double> data;  // row-major patches, contiguous embeddings

  PatchGrid() = default;
  PatchGrid(int w, int h, int d) : width(w), height(h), dim(d), data(std::size_t(w) * h * d, 0.0) {}

  std::span<const double> at(int u, int v) const {
    return {data.data() + (std::size_t(v) * width + u) * dim, std::size_t(dim)};
  }
  std::span<double> at(int u, int v) {
    return {data.data() + (std::size_t(v) * width + u) * dim, std::size_t(dim)};
  }
};

struct BilinearWeight {
  int u = 0;
  int v = 0;
  double w = 0.0;
};

// The four patch indices a pixel interpolates from, with weights summing to
// one. Indices falling off the patch grid are clipped to the border patch.
std::array<BilinearWeight, 4> bilinear_weights(double x, double y, int upsample, int patch_w,
                                               int patch_h);

struct VoxelKey {
  int32_t x = 0, y = 0, z = 0;
  bool operator==(const VoxelKey&) const = default;
  bool operator<(const VoxelKey& o) const {
    if (x != o.x) return x < o.x;
    if (y != o.y) return y < o.y;
    return z < o.z;
  }
};

// Interleaved-bit index used for deterministic voxel ordering.
std::uint64_t morton_index(const VoxelKey& k);

struct VoxelKeyHash {
  std::size_t operator()(const VoxelKey& k) const {
    std::size_t seed = 0;
    for (std::int64_t v : {std::int64_t(k.x), std::int64_t(k.y), std::int64_t(k.z)}) {
      seed ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
    }
    return seed;
  }
};

struct VoxelRecord {
  std::vector<double> feature;  // unit norm
  double sigma2 = 0.0;
  std::int64_t last_update = 0;
};

// One pixel of an aligned feature/depth frame: pixel coordinates plus the 3D
// point its depth projects to.
struct DepthPixel {
  double px = 0.0;
  double py = 0.0;
  Vec3 world;
};

// Per-frame scratch: for every voxel, the accumulated bilinear weight per
// patch index and the number of contributing pixels.
struct VoxelAccumulator {
  struct Entry {
    std::map<std::pair<int, int>, double> weights;
    int count = 0;
  };
  std::map<VoxelKey, Entry> entries;
};

// Sparse voxel store of fused unit-norm embeddings.
class FeatureVoxelMap {
 public:
  FeatureVoxelMap(double voxel_size, int dim, double alpha_c = 0.05,
                  double variance_floor = 1e-6);

  double voxel_size() const { return voxel_size_; }
  int dim() const { return dim_; }
  std::size_t size() const { return voxels_.size(); }

  VoxelKey key_for(const Vec3& p) const;
  Vec3 center(const VoxelKey& k) const;
  const VoxelRecord* find(const VoxelKey& k) const;

  // Adds each pixel's four bilinear weights into its voxel's accumulator.
  static void accumulate_projection(VoxelAccumulator& acc, std::span<const DepthPixel> pixels,
                                    const FeatureVoxelMap& map, int upsample, int patch_w,
                                    int patch_h);

  // Weighted average of patch embeddings, normalized. Empty optional when the
  // weighted sum is numerically zero (degenerate voxel, skipped).
  static std::optional<std::vector<double>> finalize_voxel_feature(
      const VoxelAccumulator::Entry& entry, const PatchGrid& patches);

  // Kalman-fuses one observed feature into the stored record; first
  // observation initializes the voxel.
  void fuse_voxel(const VoxelKey& k, std::span<const double> f_t, double dist_to_sensor, int n,
                  std::int64_t step);

  // accumulate + finalize + fuse for a whole frame.
  void integrate_frame(const PatchGrid& patches, std::span<const DepthPixel> pixels,
                       const Vec3& sensor, int upsample, std::int64_t step);

  // Removes voxels at or outside the (z_floor, z_ceiling) band.
  void prune_height_band(double z_floor, double z_ceiling);

  // Cosine similarity of a unit-norm query against every stored voxel,
  // sorted by similarity descending (ties by Morton index ascending).
  std::vector<std::pair<VoxelKey, double>> query_similarity(std::span<const double> query) const;

  void write_dump(std::ostream& os) const;

 private:
  double voxel_size_;
  int dim_;
  double alpha_c_;
  double variance_floor_;
  std::unordered_map<VoxelKey, VoxelRecord, VoxelKeyHash> voxels_;
};

}  // namespace objnav
