#include "objnav/run/episode.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <optional>

#include "objnav/plan/pathing.hpp"

namespace objnav {

namespace {

struct TargetTask {
  std::string category;
  std::unique_ptr<ConfidenceGrid> confidence;
  bool found = false;
};

// Greedy baseline order: score descending, then nearer, then smaller id.
std::vector<Candidate> greedy_order(const AgentState& agent,
                                    std::span<const Candidate> candidates) {
  std::vector<Candidate> out(candidates.begin(), candidates.end());
  std::sort(out.begin(), out.end(), [&](const Candidate& a, const Candidate& b) {
    if (a.score != b.score) return a.score > b.score;
    const double da = (a.pose.position() - agent.pos).norm();
    const double db = (b.pose.position() - agent.pos).norm();
    if (da != db) return da < db;
    return a.id < b.id;
  });
  return out;
}

}  // namespace

EpisodeResult run_episode(const Scene& scene, const EpisodeSpec& spec, PolicyKind policy,
                          const RunParams& run, TraceWriter* trace) {
  if (spec.targets.empty()) throw SpecError("episode has no targets");
  if (spec.mode == EpisodeMode::Single && spec.targets.size() != 1)
    throw SpecError("single mode requires exactly one target");
  if (spec.dt <= 0.0) throw SpecError("dt must be positive");

  const GridFrame& frame = scene.frame();
  RunParams params = run;
  params.frontier.sensor_range = params.sensor.max_range;
  params.frontier.h_max = params.cost.h_max;

  OccupancyGrid occ(frame, params.occupancy);
  FeatureVoxelMap feature_map(params.voxel_size, scene.embedding_dim(), params.confidence.alpha_c,
                              params.confidence.variance_floor);
  CandidatePolicy cand_policy(params.policy);
  const TourObjective tour_objective = policy == PolicyKind::TspExplore
                                           ? TourObjective::TotalTime
                                           : TourObjective::WeightedLatency;
  GoalPlanner planner(params.cost, params.replan_period, params.exact_limit, spec.seed,
                      tour_objective);
  DecoyLedger decoys;

  // Target bookkeeping: all tasks active at once in single/simultaneous mode,
  // one at a time in sequential mode. The feature map always persists.
  std::vector<TargetTask> tasks;
  for (const std::string& t : spec.targets) {
    tasks.push_back({t, nullptr, false});
  }
  std::size_t sequential_cursor = 0;
  auto task_active = [&](std::size_t i) {
    if (tasks[i].found) return false;
    if (spec.mode == EpisodeMode::SequentialMulti) return i == sequential_cursor;
    return true;
  };
  auto ensure_confidence = [&](std::size_t i) {
    if (!tasks[i].confidence)
      tasks[i].confidence = std::make_unique<ConfidenceGrid>(frame, params.confidence);
  };

  AgentState agent{spec.start.position(), {0.0, 0.0}, spec.start.heading};
  double path_length = 0.0;
  std::optional<Path> path;
  std::size_t path_cursor = 0;
  std::optional<Candidate> goal;
  std::vector<Candidate> tour;
  bool goal_reached_event = false;
  int last_replan_step = 0;
  int unpathable_cycles = 0;
  int drops_accum = 0;
  std::vector<Vec2> trail_segment;

  EpisodeResult result;
  result.index = spec.index;
  result.found.assign(spec.targets.size(), 0);
  result.end_reason = "step_limit";

  int step = 0;
  for (; step < spec.step_limit; ++step) {
    const Pose2 pose{agent.pos.x, agent.pos.y, agent.heading};

    // --- sense and map ---
    const auto rays = render_depth_scan(scene, pose, params.sensor, spec.seed, step);
    const auto endpoints = scan_endpoints(pose, rays);
    occ.integrate_depth_scan(pose, endpoints, params.sensor.max_range);
    occ.clear_footprint(agent.pos, params.footprint_radius);

    std::vector<std::string> active_categories;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      if (!task_active(i)) continue;
      active_categories.push_back(tasks[i].category);
      ensure_confidence(i);
      tasks[i].confidence->integrate_frame(
          render_similarity_frame(scene, pose, params.sensor, tasks[i].category, spec.seed, step));
    }

    if (step % params.feature_every == 0) {
      const PatchRender pr = render_patch_features(scene, pose, params.sensor, spec.seed, step);
      feature_map.integrate_frame(pr.patches, pr.pixels,
                                  {agent.pos.x, agent.pos.y, params.sensor.sensor_z},
                                  pr.upsample, step);
      feature_map.prune_height_band(params.z_floor, params.z_ceiling);
    }

    // --- detector and feature-map targets ---
    const auto detections = detect_objects(scene, pose, params.sensor, active_categories,
                                           spec.seed, step, decoys);
    for (const Detection& d : detections) cand_policy.ingest_detection(d);
    cand_policy.recheck_targets(detections);

    if (step % params.query_every == 0 && feature_map.size() > 0) {
      for (const std::string& category : active_categories) {
        const auto matches = feature_map.query_similarity(scene.embeddings().get(category));
        std::vector<FeatureMatch> fm;
        for (const auto& [key, sim] : matches) {
          if (sim < params.policy.feature_match_low) break;
          const Vec3 c = feature_map.center(key);
          fm.push_back({{c.x, c.y}, sim, category});
          if (static_cast<int>(fm.size()) >= params.policy.feature_match_top_k + 1) break;
        }
        cand_policy.ingest_feature_matches(fm);
      }
    }

    // --- plan ---
    const bool plan_due = (step % params.plan_every == 0) || goal_reached_event || !path;
    if (plan_due) {
      const auto clusters = build_frontier_clusters(occ, params.frontier);
      std::vector<Candidate> viewpoints;
      std::vector<CellIndex> frontier_cells;
      for (const FrontierCluster& cl : clusters) {
        Candidate c;
        c.kind = CandidateKind::FrontierViewpoint;
        c.pose = cl.viewpoint;
        c.id = cl.id;
        c.h_k = cl.h_k;
        viewpoints.push_back(c);
        frontier_cells.insert(frontier_cells.end(), cl.cells.begin(), cl.cells.end());
      }

      // fused confidence across active tasks scores the viewpoints
      std::vector<const ConfidenceGrid*> active_maps;
      for (std::size_t i = 0; i < tasks.size(); ++i) {
        if (task_active(i) && tasks[i].confidence) active_maps.push_back(tasks[i].confidence.get());
      }
      std::optional<ConfidenceGrid> fused;
      if (!active_maps.empty()) {
        fused = fuse_multi_target(std::span<const ConfidenceGrid* const>(active_maps));
      }

      const Assembled assembled =
          cand_policy.assemble(viewpoints, fused ? &*fused : nullptr);
      if (assembled.no_candidates()) {
        result.end_reason = "no_candidates";
        break;
      }

      // preference order for this cycle
      std::vector<Candidate> order;
      bool replanned = false;
      if (assembled.goal) {
        order.push_back(*assembled.goal);
        tour.assign(1, *assembled.goal);
      } else if (policy == PolicyKind::Greedy) {
        order = greedy_order(agent, assembled.candidates);
        tour = order;
        replanned = true;
      } else {
        const double elapsed = (step - last_replan_step) * spec.dt;
        const GoalPlanner::Plan plan =
            planner.plan_cycle(agent, assembled.candidates, elapsed, goal_reached_event);
        order = plan.tour;
        tour = plan.tour;
        replanned = plan.replanned;
      }
      if (replanned) last_replan_step = step;
      goal_reached_event = false;

      // first pathable node wins
      std::optional<Candidate> chosen;
      std::optional<Path> chosen_path;
      for (const Candidate& c : order) {
        auto p = astar(occ, agent.pos, c.pose.position());
        if (p) {
          chosen = c;
          chosen_path = std::move(p);
          break;
        }
      }
      if (chosen) {
        goal = chosen;
        path = std::move(chosen_path);
        path_cursor = 0;
        unpathable_cycles = 0;
      } else {
        path.reset();
        goal.reset();
        if (++unpathable_cycles >= 10) {
          result.end_reason = "no_candidates";
          break;
        }
      }

      if (trace) {
        trace->snapshot(step, pose, occ, fused ? &*fused : nullptr, frontier_cells,
                        assembled.goal ? std::span<const Candidate>{}
                                       : std::span<const Candidate>(assembled.candidates),
                        tour, goal ? &*goal : nullptr, trail_segment);
        trail_segment.clear();
      }
    }

    // --- move ---
    if (path) {
      const AgentState next = follow_step(agent, *path, path_cursor, occ, spec.dt,
                                          {params.cost.v_max, params.cost.xi_dot_max});
      path_length += (next.pos - agent.pos).norm();
      agent = next;
      if (trace) trail_segment.push_back(agent.pos);
      if (path_cursor >= path->waypoints.size()) path.reset();
    }

    // --- success checks ---
    bool advanced = false;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      if (!task_active(i)) continue;
      if (check_success(scene, agent.pos, tasks[i].category, params.success_radius)) {
        tasks[i].found = true;
        result.found[i] = 1;
        cand_policy.drop_targets_for(tasks[i].category);
        advanced = true;
      }
    }
    if (advanced && spec.mode == EpisodeMode::SequentialMulti) {
      while (sequential_cursor < tasks.size() && tasks[sequential_cursor].found) {
        ++sequential_cursor;
      }
      // fresh task: reset the task-specific state, keep occupancy + features
      drops_accum += cand_policy.recheck_drop_count();
      cand_policy.reset();
      planner.reset();
      goal.reset();
      path.reset();
      decoys = DecoyLedger{};
    }
    if (std::all_of(tasks.begin(), tasks.end(), [](const TargetTask& t) { return t.found; })) {
      result.success = true;
      result.end_reason = "success";
      ++step;
      break;
    }

    // --- goal arrival bookkeeping ---
    if (goal && (goal->pose.position() - agent.pos).norm() <= params.goal_radius) {
      goal_reached_event = true;
      if (goal->kind != CandidateKind::FrontierViewpoint) {
        bool category_found = false;
        for (const TargetTask& t : tasks) {
          if (t.category == goal->category && t.found) category_found = true;
        }
        if (!category_found) cand_policy.mark_goal_visited(goal->id);
      }
      goal.reset();
      path.reset();
    }
  }

  result.steps = std::min(step, spec.step_limit);
  result.path_length = path_length;
  result.recheck_drops = drops_accum + cand_policy.recheck_drop_count();
  if (trace) trace->finish(result);
  return result;
}

}  // namespace objnav
