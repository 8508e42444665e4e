#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "objnav/map/confidence.hpp"
#include "objnav/map/feature_map.hpp"
#include "objnav/policy/candidate_policy.hpp"
#include "objnav/sim/scene.hpp"

namespace objnav {

struct SensorModel {
  double fov = 2.0;          // radians
  int n_rays = 48;
  double max_range = 3.5;    // meters
  double depth_noise = 0.0;  // meters, sigma
  double sim_noise = 0.02;   // similarity units, sigma
  double embed_noise = 0.05; // per-component sigma before renormalization
  double detect_range = 2.5;
  double detect_noise = 0.02;
  double detect_c0 = 0.95;   // base confidence
  double detect_cd = 0.05;   // per-meter falloff
  double detect_ca = 0.1;    // bearing penalty across the fov
  int v_samples = 8;         // vertical samples per similarity ray
  int image_rows = 16;       // feature image height, pixels
  int patch_upsample = 8;    // r
  double sensor_z = 1.0;     // camera height for 3D distances
};

struct DepthRay {
  double angle = 0.0;   // absolute, radians
  double range = 0.0;   // noisy, clamped to [0, max_range]
  bool hit = false;     // terminated on a surface within max_range
  CellIndex cell;       // hit cell (valid when hit)
  Vec2 point;           // point strictly inside the hit cell (valid when hit)
};

// Exact DDA march per ray (the sensor's own cell is transparent), Gaussian
// range noise on top. Deterministic for a (seed, step) pair.
std::vector<DepthRay> render_depth_scan(const Scene& scene, const Pose2& pose,
                                        const SensorModel& sensor, std::uint64_t seed,
                                        std::uint64_t step);

// World endpoints for occupancy integration.
std::vector<Vec2> scan_endpoints(const Pose2& pose, std::span<const DepthRay> rays);

// Oracle stand-in for the per-pixel similarity image: every geometric hit is
// sampled at v_samples heights, each scored by the affinity tables plus noise.
SimilarityFrame render_similarity_frame(const Scene& scene, const Pose2& pose,
                                        const SensorModel& sensor, const std::string& query,
                                        std::uint64_t seed, std::uint64_t step);

struct PatchRender {
  PatchGrid patches;
  std::vector<DepthPixel> pixels;  // hit pixels with their 3D points
  int upsample = 1;
};

// Oracle stand-in for patch-level VLM features: each patch carries the noisy
// embedding of the dominant surface in its pixel footprint.
PatchRender render_patch_features(const Scene& scene, const Pose2& pose,
                                  const SensorModel& sensor, std::uint64_t seed,
                                  std::uint64_t step);

// Per-episode decoy bookkeeping (first report vs later reports).
struct DecoyLedger {
  std::map<std::string, int> reports;  // object id -> times reported
};

// Oracle open-vocabulary detector: visible objects of the requested
// categories with a distance/bearing confidence model; decoys report their
// scripted confidences.
std::vector<Detection> detect_objects(const Scene& scene, const Pose2& pose,
                                      const SensorModel& sensor,
                                      std::span<const std::string> categories,
                                      std::uint64_t seed, std::uint64_t step,
                                      DecoyLedger& decoys);

// True success: an object of the category within the radius, with line of
// sight.
bool check_success(const Scene& scene, const Vec2& pos, const std::string& category,
                   double success_radius);

}  // namespace objnav
