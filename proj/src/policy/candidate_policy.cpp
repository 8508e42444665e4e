#include "objnav/policy/candidate_policy.hpp"

#include <algorithm>

namespace objnav {

TrackedTarget* CandidatePolicy::associate(CandidateKind kind, const std::string& category,
                                          const Vec2& pos) {
  TrackedTarget* best = nullptr;
  double best_dist = params_.associate_radius;
  for (TrackedTarget& t : targets_) {
    if (t.candidate.kind != kind || t.candidate.category != category) continue;
    const double d = (t.candidate.pose.position() - pos).norm();
    if (d <= best_dist) {
      best_dist = d;
      best = &t;
    }
  }
  return best;
}

void CandidatePolicy::ingest_detection(const Detection& det) {
  if (det.confidence < 0.0 || det.confidence > 1.0)
    throw InvalidObservation("detection confidence outside [0,1]");

  TrackedTarget* existing =
      associate(CandidateKind::Detection, det.category, det.pose.position());
  if (existing && existing->status == TargetStatus::Dropped) return;  // stays retired

  if (existing) {
    existing->candidate.pose = det.pose;
    existing->candidate.score = det.confidence;
    if (det.confidence > params_.tau_h) {
      existing->status = TargetStatus::PendingGoal;
      existing->misses = 0;
    }
    return;
  }

  if (det.confidence < params_.tau_l) return;
  TrackedTarget t;
  t.candidate.kind = CandidateKind::Detection;
  t.candidate.pose = det.pose;
  t.candidate.score = det.confidence;
  t.candidate.id = next_id_++;
  t.candidate.category = det.category;
  t.status = det.confidence > params_.tau_h ? TargetStatus::PendingGoal
                                            : TargetStatus::CandidateOnly;
  targets_.push_back(std::move(t));
}

void CandidatePolicy::recheck_targets(std::span<const Detection> current) {
  for (TrackedTarget& t : targets_) {
    if (t.status != TargetStatus::PendingGoal) continue;
    // visible this frame? nearest same-category detection within radius
    const Detection* obs = nullptr;
    double best = params_.associate_radius;
    for (const Detection& d : current) {
      if (d.category != t.candidate.category) continue;
      const double dist = (d.pose.position() - t.candidate.pose.position()).norm();
      if (dist <= best) {
        best = dist;
        obs = &d;
      }
    }
    if (!obs) continue;  // out of view, untouched
    if (obs->confidence >= params_.tau_h) {
      t.misses = 0;
    } else if (++t.misses >= params_.recheck_window) {
      t.status = TargetStatus::Dropped;
      ++recheck_drops_;
    }
  }
}

void CandidatePolicy::ingest_feature_matches(std::span<const FeatureMatch> matches) {
  bool goal_taken = false;
  int candidates_taken = 0;
  for (const FeatureMatch& m : matches) {
    if (m.similarity < params_.feature_match_low) break;  // sorted descending
    if (candidates_taken >= params_.feature_match_top_k && goal_taken) break;

    TrackedTarget* existing = associate(CandidateKind::FeatureMatch, m.category, m.ground_xy);
    if (existing && existing->status == TargetStatus::Dropped) continue;

    const bool as_goal = !goal_taken && m.similarity >= params_.feature_match_high;
    if (!as_goal && candidates_taken >= params_.feature_match_top_k) continue;

    if (existing) {
      existing->candidate.score = m.similarity;
      existing->candidate.pose = Pose2{m.ground_xy.x, m.ground_xy.y,
                                       existing->candidate.pose.heading};
      if (as_goal) {
        existing->status = TargetStatus::PendingGoal;
        existing->misses = 0;
      }
    } else {
      TrackedTarget t;
      t.candidate.kind = CandidateKind::FeatureMatch;
      t.candidate.pose = Pose2{m.ground_xy.x, m.ground_xy.y, 0.0};
      t.candidate.score = m.similarity;
      t.candidate.id = next_id_++;
      t.candidate.category = m.category;
      t.status = as_goal ? TargetStatus::PendingGoal : TargetStatus::CandidateOnly;
      targets_.push_back(std::move(t));
    }
    if (as_goal) {
      goal_taken = true;
    } else {
      ++candidates_taken;
    }
  }
}

Assembled CandidatePolicy::assemble(std::span<const Candidate> viewpoints,
                                    const ConfidenceGrid* fused) const {
  Assembled out;

  const TrackedTarget* best_goal = nullptr;
  for (const TrackedTarget& t : targets_) {
    if (t.status != TargetStatus::PendingGoal) continue;
    if (!best_goal || t.candidate.score > best_goal->candidate.score ||
        (t.candidate.score == best_goal->candidate.score &&
         t.candidate.id < best_goal->candidate.id)) {
      best_goal = &t;
    }
  }
  if (best_goal) {
    out.goal = best_goal->candidate;
    return out;
  }

  for (const Candidate& vp : viewpoints) {
    Candidate scored = vp;
    scored.score = params_.unobserved_prior;
    if (fused && fused->frame().contains(vp.pose.position())) {
      const ConfidenceCell& cc = fused->cell(fused->frame().world_to_grid(vp.pose.position()));
      if (cc.observed) scored.score = std::clamp(cc.s, 0.0, 1.0);
    }
    out.candidates.push_back(scored);
  }
  for (const TrackedTarget& t : targets_) {
    if (t.status == TargetStatus::CandidateOnly) out.candidates.push_back(t.candidate);
  }
  return out;
}

void CandidatePolicy::mark_goal_visited(std::int64_t id) {
  for (TrackedTarget& t : targets_) {
    if (t.candidate.id == id && t.status != TargetStatus::Dropped) {
      t.status = TargetStatus::Dropped;
    }
  }
}

void CandidatePolicy::drop_targets_for(const std::string& category) {
  for (TrackedTarget& t : targets_) {
    if (t.candidate.category == category) t.status = TargetStatus::Dropped;
  }
}

void CandidatePolicy::reset() {
  targets_.clear();
  recheck_drops_ = 0;
}

}  // namespace objnav
