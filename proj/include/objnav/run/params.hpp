#pragma once

#include "objnav/map/confidence.hpp"
#include "objnav/map/occupancy.hpp"
#include "objnav/plan/frontier.hpp"
#include "objnav/plan/wtrp.hpp"
#include "objnav/policy/candidate_policy.hpp"
#include "objnav/sim/sensors.hpp"

namespace objnav {

// Everything an episode needs besides the scene and the spec. Suites may
// override individual fields by dotted name.
struct RunParams {
  SensorModel sensor;
  OccupancyParams occupancy;
  ConfidenceParams confidence;
  PolicyParams policy;
  CostParams cost;
  FrontierParams frontier;

  double replan_period = 8.0;  // seconds of simulated time
  int exact_limit = 12;
  int plan_every = 5;      // steps per planning cycle
  int feature_every = 2;   // steps per 3D feature integration
  int query_every = 5;     // steps per feature map query
  double goal_radius = 0.6;
  double success_radius = 1.0;
  double footprint_radius = 0.3;
  double voxel_size = 0.2;
  double z_floor = 0.05;
  double z_ceiling = 1.95;

  // Dotted-name setter for suite overrides, e.g. "sensor.max_range".
  void set(const std::string& name, double value);
};

}  // namespace objnav
