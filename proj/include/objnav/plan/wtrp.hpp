#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "objnav/core/geometry.hpp"

namespace objnav {

enum class CandidateKind { FrontierViewpoint, Detection, FeatureMatch };

// A scored goal point offered to the global planner.
struct Candidate {
  CandidateKind kind = CandidateKind::FrontierViewpoint;
  Pose2 pose;
  double score = 0.0;  // in [0,1]
  std::int64_t id = 0;
  double h_k = 0.0;          // FrontierViewpoint only
  std::string category;      // Detection / FeatureMatch bookkeeping
};

struct AgentState {
  Vec2 pos;
  Vec2 vel;
  double heading = 0.0;
};

struct CostParams {
  double v_max = 1.0;           // m/s
  double xi_dot_max = 1.5707963267948966;  // rad/s
  double w_c = 0.3;             // motion-consistency weight
  double w_f = 0.5;             // enclosure weight
  double h_max = 3.0;           // meters
  double alpha_s = 1.0;         // weight mapping scale
  double mu = 3.0;              // weight mapping exponent slope
  double nu = 0.0;              // weight mapping exponent offset
};

// Node 0 is the agent; candidates are nodes 1..n. The candidate block is
// symmetric and every return-to-agent cost is zero.
struct WtrpInstance {
  int n = 0;
  std::vector<double> weights;     // size n, candidate weights
  std::vector<double> cost;        // (n+1)^2 row-major
  std::vector<std::string> ids;    // optional, size n when present

  double at(int r, int c) const { return cost[static_cast<std::size_t>(r) * (n + 1) + c]; }
  double& at(int r, int c) { return cost[static_cast<std::size_t>(r) * (n + 1) + c]; }
};

struct Tour {
  std::vector<int> order;  // permutation of 1..n
  double objective = 0.0;
};

// W = alpha_s * exp(mu * s + nu)
double node_weight(double score, const CostParams& params);

// max(distance / v_max, heading gap / xi_dot_max)
double pair_time(const Pose2& a, const Pose2& b, const CostParams& params);

WtrpInstance build_cost_matrix(const AgentState& agent, std::span<const Candidate> candidates,
                               const CostParams& params);

// Weighted sum of arrival times along 0 -> order[0] -> ... (the solver
// objective). Throws InvalidTour unless order is a permutation of 1..n.
double weighted_latency(const WtrpInstance& inst, std::span<const int> order);

// Plain total travel time of the open tour (the TSP-style objective).
double tour_time(const WtrpInstance& inst, std::span<const int> order);

enum class TourObjective { WeightedLatency, TotalTime };

// Subset DP over (visited set, last node); globally optimal.
Tour solve_exact(const WtrpInstance& inst, int exact_limit = 12,
                 TourObjective objective = TourObjective::WeightedLatency);

// Ratio-ordered best insertion + 2-opt/or-opt descent, multi-start.
// Deterministic for a fixed seed.
Tour solve_heuristic(const WtrpInstance& inst, std::uint64_t seed,
                     TourObjective objective = TourObjective::WeightedLatency);

// Exhaustive permutation minimum; the cross-check oracle. n <= 9.
Tour solve_brute_force(const WtrpInstance& inst,
                       TourObjective objective = TourObjective::WeightedLatency);

// exact when n fits, heuristic otherwise
Tour solve_auto(const WtrpInstance& inst, int exact_limit, std::uint64_t seed,
                TourObjective objective = TourObjective::WeightedLatency);

WtrpInstance read_instance(std::istream& is);
void write_instance(std::ostream& os, const WtrpInstance& inst);

// Mid-term goal selection with the replan rule: recompute when the previous
// first node was reached, when the candidate set changed, or when the replan
// timer expires; otherwise keep handing out the current tour head.
class GoalPlanner {
 public:
  GoalPlanner(CostParams params, double replan_period, int exact_limit, std::uint64_t seed,
              TourObjective objective = TourObjective::WeightedLatency)
      : params_(params), replan_period_(replan_period), exact_limit_(exact_limit), seed_(seed),
        objective_(objective) {}

  struct Plan {
    Candidate goal;
    std::vector<Candidate> tour;  // tour order, starting with goal
    bool replanned = false;
  };

  // candidates must be non-empty.
  Plan plan_cycle(const AgentState& agent, std::span<const Candidate> candidates,
                  double elapsed_since_plan, bool first_node_reached);

  void reset();

 private:
  CostParams params_;
  double replan_period_;
  int exact_limit_;
  std::uint64_t seed_;
  TourObjective objective_;
  std::vector<Candidate> tour_;
  std::set<std::pair<int, std::int64_t>> last_ids_;
};

}  // namespace objnav
