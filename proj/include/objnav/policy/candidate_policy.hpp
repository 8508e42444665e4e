#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "objnav/map/confidence.hpp"
#include "objnav/plan/wtrp.hpp"

namespace objnav {

struct PolicyParams {
  double tau_h = 0.8;
  double tau_l = 0.4;
  int recheck_window = 3;
  double feature_match_high = 0.9;
  double feature_match_low = 0.7;
  int feature_match_top_k = 3;
  double unobserved_prior = 0.1;   // viewpoint score on never-observed cells
  double associate_radius = 0.5;   // meters, nearest-pose data association
};

struct Detection {
  std::string category;
  double confidence = 0.0;
  Pose2 pose;
};

struct FeatureMatch {
  Vec2 ground_xy;       // voxel center projected to the plane
  double similarity = 0.0;
  std::string category;
};

enum class TargetStatus { PendingGoal, CandidateOnly, Dropped };

struct TrackedTarget {
  Candidate candidate;
  TargetStatus status = TargetStatus::CandidateOnly;
  int misses = 0;
};

// Either an immediate navigation goal or the candidate set handed to the
// global planner; both empty means exploration is exhausted.
struct Assembled {
  std::optional<Candidate> goal;
  std::vector<Candidate> candidates;
  bool no_candidates() const { return !goal && candidates.empty(); }
};

// Tracks detector and feature-map targets across frames, applies the
// confidence thresholds, and merges everything with frontier viewpoints.
class CandidatePolicy {
 public:
  explicit CandidatePolicy(PolicyParams params = {}) : params_(params) {}

  const PolicyParams& params() const { return params_; }

  // confidence > tau_h: pending goal; within [tau_l, tau_h]: candidate;
  // below tau_l: ignored. Observations associate to existing targets of the
  // same category within associate_radius.
  void ingest_detection(const Detection& det);

  // Miss-counter update for pending goals visible in this frame; targets out
  // of view are untouched. Reaching recheck_window consecutive sub-tau_h
  // observations drops the target.
  void recheck_targets(std::span<const Detection> current);

  // Matches must be sorted by similarity descending. At most one goal and
  // top-k candidates are taken per query.
  void ingest_feature_matches(std::span<const FeatureMatch> matches);

  // Viewpoints get their score from the fused confidence map (or the
  // unobserved prior); tracked mid-band targets join them. A pending goal
  // preempts everything.
  Assembled assemble(std::span<const Candidate> viewpoints, const ConfidenceGrid* fused) const;

  // The agent arrived at a tracked goal and the target was not there.
  void mark_goal_visited(std::int64_t id);

  // A target category was found; its tracks are retired.
  void drop_targets_for(const std::string& category);

  void reset();

  int recheck_drop_count() const { return recheck_drops_; }
  const std::vector<TrackedTarget>& targets() const { return targets_; }

 private:
  TrackedTarget* associate(CandidateKind kind, const std::string& category, const Vec2& pos);

  PolicyParams params_;
  std::vector<TrackedTarget> targets_;
  std::int64_t next_id_ = 1;
  int recheck_drops_ = 0;
};

}  // namespace objnav
