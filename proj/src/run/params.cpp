#include "objnav/run/params.hpp"

#include <cmath>

#include "objnav/core/errors.hpp"

namespace objnav {

void RunParams::set(const std::string& name, double value) {
  auto as_int = [&] { return static_cast<int>(std::llround(value)); };
  if (name == "sensor.fov") sensor.fov = value;
  else if (name == "sensor.n_rays") sensor.n_rays = as_int();
  else if (name == "sensor.max_range") sensor.max_range = value;
  else if (name == "sensor.depth_noise") sensor.depth_noise = value;
  else if (name == "sensor.sim_noise") sensor.sim_noise = value;
  else if (name == "sensor.embed_noise") sensor.embed_noise = value;
  else if (name == "sensor.detect_range") sensor.detect_range = value;
  else if (name == "sensor.detect_noise") sensor.detect_noise = value;
  else if (name == "sensor.detect_c0") sensor.detect_c0 = value;
  else if (name == "sensor.detect_cd") sensor.detect_cd = value;
  else if (name == "sensor.detect_ca") sensor.detect_ca = value;
  else if (name == "sensor.v_samples") sensor.v_samples = as_int();
  else if (name == "sensor.image_rows") sensor.image_rows = as_int();
  else if (name == "sensor.patch_upsample") sensor.patch_upsample = as_int();
  else if (name == "sensor.sensor_z") sensor.sensor_z = value;
  else if (name == "occupancy.l_hit") occupancy.l_hit = value;
  else if (name == "occupancy.l_miss") occupancy.l_miss = value;
  else if (name == "occupancy.occupied_threshold") occupancy.occupied_threshold = value;
  else if (name == "occupancy.free_threshold") occupancy.free_threshold = value;
  else if (name == "occupancy.inflation_radius") occupancy.inflation_radius = value;
  else if (name == "confidence.alpha_c") confidence.alpha_c = value;
  else if (name == "confidence.gamma") confidence.gamma = value;
  else if (name == "confidence.beta") confidence.beta = value;
  else if (name == "confidence.tau_d") confidence.tau_d = value;
  else if (name == "confidence.top_quantile") confidence.top_quantile = value;
  else if (name == "confidence.far_weight") confidence.far_weight = value;
  else if (name == "policy.tau_h") policy.tau_h = value;
  else if (name == "policy.tau_l") policy.tau_l = value;
  else if (name == "policy.recheck_window") policy.recheck_window = as_int();
  else if (name == "policy.feature_match_high") policy.feature_match_high = value;
  else if (name == "policy.feature_match_low") policy.feature_match_low = value;
  else if (name == "policy.feature_match_top_k") policy.feature_match_top_k = as_int();
  else if (name == "policy.unobserved_prior") policy.unobserved_prior = value;
  else if (name == "cost.v_max") cost.v_max = value;
  else if (name == "cost.xi_dot_max") cost.xi_dot_max = value;
  else if (name == "cost.w_c") cost.w_c = value;
  else if (name == "cost.w_f") cost.w_f = value;
  else if (name == "cost.h_max") { cost.h_max = value; frontier.h_max = value; }
  else if (name == "cost.alpha_s") cost.alpha_s = value;
  else if (name == "cost.mu") cost.mu = value;
  else if (name == "cost.nu") cost.nu = value;
  else if (name == "frontier.min_cluster_size") frontier.min_cluster_size = as_int();
  else if (name == "run.replan_period") replan_period = value;
  else if (name == "run.exact_limit") exact_limit = as_int();
  else if (name == "run.plan_every") plan_every = as_int();
  else if (name == "run.feature_every") feature_every = as_int();
  else if (name == "run.query_every") query_every = as_int();
  else if (name == "run.goal_radius") goal_radius = value;
  else if (name == "run.success_radius") success_radius = value;
  else if (name == "run.footprint_radius") footprint_radius = value;
  else if (name == "run.voxel_size") voxel_size = value;
  else if (name == "run.z_floor") z_floor = value;
  else if (name == "run.z_ceiling") z_ceiling = value;
  else throw DataError("unknown run parameter: " + name);
}

}  // namespace objnav
