#include "objnav/plan/wtrp.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>

namespace objnav {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void validate_order(const WtrpInstance& inst, std::span<const int> order) {
  if (static_cast<int>(order.size()) != inst.n) throw InvalidTour("tour length mismatch");
  std::vector<bool> seen(inst.n + 1, false);
  for (int node : order) {
    if (node < 1 || node > inst.n || seen[node]) throw InvalidTour("not a permutation of 1..n");
    seen[node] = true;
  }
}

// Objective of a (possibly partial) sequence of distinct nodes.
double sequence_objective(const WtrpInstance& inst, std::span<const int> order,
                          TourObjective objective) {
  double t = 0.0;
  double obj = 0.0;
  int prev = 0;
  for (int node : order) {
    t += inst.at(prev, node);
    if (objective == TourObjective::WeightedLatency) {
      obj += inst.weights[node - 1] * t;
    }
    prev = node;
  }
  return objective == TourObjective::WeightedLatency ? obj : t;
}

// Best-insertion construction for a fixed insertion order of nodes.
std::vector<int> construct_insertion(const WtrpInstance& inst, std::span<const int> node_order,
                                     TourObjective objective) {
  std::vector<int> tour;
  tour.reserve(inst.n);
  std::vector<int> trial;
  for (int node : node_order) {
    double best = kInf;
    std::size_t best_pos = 0;
    for (std::size_t pos = 0; pos <= tour.size(); ++pos) {
      trial = tour;
      trial.insert(trial.begin() + pos, node);
      const double v = sequence_objective(inst, trial, objective);
      if (v < best) {
        best = v;
        best_pos = pos;
      }
    }
    tour.insert(tour.begin() + best_pos, node);
  }
  return tour;
}

// 2-opt (segment reversal) and or-opt (relocate runs of 1..3 nodes),
// first-improvement, repeated to a local optimum.
void local_search(const WtrpInstance& inst, std::vector<int>& tour, TourObjective objective) {
  const int m = static_cast<int>(tour.size());
  if (m < 2) return;
  double cur = sequence_objective(inst, tour, objective);
  bool improved = true;
  std::vector<int> trial;
  while (improved) {
    improved = false;
    for (int i = 0; i < m - 1 && !improved; ++i) {
      for (int j = i + 1; j < m && !improved; ++j) {
        trial = tour;
        std::reverse(trial.begin() + i, trial.begin() + j + 1);
        const double v = sequence_objective(inst, trial, objective);
        if (v < cur - 1e-12) {
          tour = trial;
          cur = v;
          improved = true;
        }
      }
    }
    if (improved) continue;
    for (int len = 1; len <= 3 && !improved; ++len) {
      for (int i = 0; i + len <= m && !improved; ++i) {
        for (int j = 0; j + len <= m && !improved; ++j) {
          if (j == i) continue;
          trial = tour;
          std::vector<int> seg(trial.begin() + i, trial.begin() + i + len);
          trial.erase(trial.begin() + i, trial.begin() + i + len);
          trial.insert(trial.begin() + j, seg.begin(), seg.end());
          const double v = sequence_objective(inst, trial, objective);
          if (v < cur - 1e-12) {
            tour = trial;
            cur = v;
            improved = true;
          }
        }
      }
    }
  }
}

void validate_instance(const WtrpInstance& inst) {
  if (inst.n < 1) throw InvalidObservation("instance needs at least one candidate");
  if (static_cast<int>(inst.weights.size()) != inst.n)
    throw InvalidObservation("weight count mismatch");
  if (inst.cost.size() != static_cast<std::size_t>(inst.n + 1) * (inst.n + 1))
    throw InvalidObservation("cost matrix size mismatch");
}

}  // namespace

double node_weight(double score, const CostParams& params) {
  return params.alpha_s * std::exp(params.mu * score + params.nu);
}

double pair_time(const Pose2& a, const Pose2& b, const CostParams& params) {
  const double d = (b.position() - a.position()).norm();
  return std::max(d / params.v_max, angle_diff(a.heading, b.heading) / params.xi_dot_max);
}

WtrpInstance build_cost_matrix(const AgentState& agent, std::span<const Candidate> candidates,
                               const CostParams& params) {
  if (candidates.empty()) throw InvalidObservation("no candidates");
  const int n = static_cast<int>(candidates.size());
  WtrpInstance inst;
  inst.n = n;
  inst.weights.resize(n);
  inst.cost.assign(static_cast<std::size_t>(n + 1) * (n + 1), 0.0);
  inst.ids.resize(n);

  const Pose2 agent_pose{agent.pos.x, agent.pos.y, agent.heading};
  const double speed = agent.vel.norm();
  for (int k = 0; k < n; ++k) {
    const Candidate& cand = candidates[k];
    inst.weights[k] = node_weight(cand.score, params);
    inst.ids[k] = std::to_string(static_cast<int>(cand.kind)) + ":" + std::to_string(cand.id);

    double consistency = 0.0;
    const Vec2 to_cand = cand.pose.position() - agent.pos;
    const double dist = to_cand.norm();
    if (speed > 1e-9 && dist > 1e-9) {
      const double c = std::clamp(to_cand.dot(agent.vel) / (dist * speed), -1.0, 1.0);
      consistency = std::acos(c);
    }
    double enclosure = 0.0;
    if (cand.kind == CandidateKind::FrontierViewpoint && params.h_max > 0.0) {
      enclosure = cand.h_k / params.h_max;
    }
    inst.at(0, k + 1) = pair_time(agent_pose, cand.pose, params) + params.w_c * consistency +
                        params.w_f * enclosure;
    inst.at(k + 1, 0) = 0.0;
  }
  for (int r = 0; r < n; ++r) {
    for (int s = r + 1; s < n; ++s) {
      const double t = pair_time(candidates[r].pose, candidates[s].pose, params);
      inst.at(r + 1, s + 1) = t;
      inst.at(s + 1, r + 1) = t;
    }
  }
  return inst;
}

double weighted_latency(const WtrpInstance& inst, std::span<const int> order) {
  validate_order(inst, order);
  return sequence_objective(inst, order, TourObjective::WeightedLatency);
}

double tour_time(const WtrpInstance& inst, std::span<const int> order) {
  validate_order(inst, order);
  return sequence_objective(inst, order, TourObjective::TotalTime);
}

Tour solve_exact(const WtrpInstance& inst, int exact_limit, TourObjective objective) {
  validate_instance(inst);
  const int n = inst.n;
  if (n > exact_limit) throw SizeExceeded("instance too large for exact solver");

  // DP on (visited mask, last node). Each edge contributes its time scaled by
  // the total weight still waiting (TotalTime uses weight 1 on the final sum
  // only, which reduces to plain shortest-path DP).
  const std::size_t masks = std::size_t(1) << n;
  std::vector<double> g(masks * n, kInf);
  std::vector<int> parent(masks * n, -1);

  double w_total = 0.0;
  for (double w : inst.weights) w_total += w;
  std::vector<double> mask_weight(masks, 0.0);
  if (objective == TourObjective::WeightedLatency) {
    for (std::size_t mask = 1; mask < masks; ++mask) {
      const int low = std::countr_zero(mask);
      mask_weight[mask] = mask_weight[mask & (mask - 1)] + inst.weights[low];
    }
  }
  auto pending_weight = [&](std::size_t mask) {
    return objective == TourObjective::WeightedLatency ? (w_total - mask_weight[mask]) : 1.0;
  };

  for (int s = 0; s < n; ++s) {
    g[(std::size_t(1) << s) * n + s] = inst.at(0, s + 1) * pending_weight(0);
  }
  for (std::size_t mask = 1; mask < masks; ++mask) {
    for (int last = 0; last < n; ++last) {
      const double base = g[mask * n + last];
      if (base == kInf || !(mask & (std::size_t(1) << last))) continue;
      const double w_pending = pending_weight(mask);
      for (int s = 0; s < n; ++s) {
        if (mask & (std::size_t(1) << s)) continue;
        const std::size_t next = mask | (std::size_t(1) << s);
        const double v = base + inst.at(last + 1, s + 1) * w_pending;
        if (v < g[next * n + s]) {
          g[next * n + s] = v;
          parent[next * n + s] = last;
        }
      }
    }
  }

  const std::size_t full = masks - 1;
  int best_last = 0;
  double best = kInf;
  for (int last = 0; last < n; ++last) {
    if (g[full * n + last] < best) {
      best = g[full * n + last];
      best_last = last;
    }
  }
  std::vector<int> order(n);
  std::size_t mask = full;
  int last = best_last;
  for (int i = n - 1; i >= 0; --i) {
    order[i] = last + 1;
    const int p = parent[mask * n + last];
    mask &= ~(std::size_t(1) << last);
    last = p;
  }
  Tour tour;
  tour.order = std::move(order);
  tour.objective = sequence_objective(inst, tour.order, objective);
  return tour;
}

Tour solve_heuristic(const WtrpInstance& inst, std::uint64_t seed, TourObjective objective) {
  validate_instance(inst);
  const int n = inst.n;

  // Ratio construction order: weight per unit first-arrival time, descending.
  std::vector<int> ratio_order(n);
  std::iota(ratio_order.begin(), ratio_order.end(), 1);
  std::sort(ratio_order.begin(), ratio_order.end(), [&](int a, int b) {
    const double ra = inst.weights[a - 1] / std::max(inst.at(0, a), 1e-9);
    const double rb = inst.weights[b - 1] / std::max(inst.at(0, b), 1e-9);
    if (ra != rb) return ra > rb;
    return a < b;
  });

  constexpr int kStarts = 4;
  Tour best;
  best.objective = kInf;
  std::uint64_t rng = seed;
  for (int start = 0; start < kStarts; ++start) {
    std::vector<int> insertion = ratio_order;
    if (start > 0) {
      for (int i = n - 1; i > 0; --i) {
        const int j = static_cast<int>(splitmix64(rng) % (i + 1));
        std::swap(insertion[i], insertion[j]);
      }
    }
    std::vector<int> tour = construct_insertion(inst, insertion, objective);
    local_search(inst, tour, objective);
    const double obj = sequence_objective(inst, tour, objective);
    if (obj < best.objective) {
      best.objective = obj;
      best.order = tour;
    }
  }
  return best;
}

Tour solve_brute_force(const WtrpInstance& inst, TourObjective objective) {
  validate_instance(inst);
  if (inst.n > 9) throw SizeExceeded("brute force limited to n <= 9");
  std::vector<int> perm(inst.n);
  std::iota(perm.begin(), perm.end(), 1);
  Tour best;
  best.objective = kInf;
  do {
    const double obj = sequence_objective(inst, perm, objective);
    if (obj < best.objective) {
      best.objective = obj;
      best.order = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

Tour solve_auto(const WtrpInstance& inst, int exact_limit, std::uint64_t seed,
                TourObjective objective) {
  if (inst.n <= exact_limit) return solve_exact(inst, exact_limit, objective);
  return solve_heuristic(inst, seed, objective);
}

WtrpInstance read_instance(std::istream& is) {
  std::string tag, version;
  is >> tag >> version;
  if (tag != "wtrp-instance" || version != "v1") throw DataError("not a wtrp instance file");
  WtrpInstance inst;
  std::string word;
  while (is >> word) {
    if (word == "n") {
      is >> inst.n;
    } else if (word == "weights") {
      inst.weights.resize(inst.n);
      for (double& w : inst.weights) is >> w;
    } else if (word == "matrix") {
      inst.cost.resize(static_cast<std::size_t>(inst.n + 1) * (inst.n + 1));
      for (double& v : inst.cost) is >> v;
    } else if (word == "ids") {
      inst.ids.resize(inst.n);
      for (std::string& id : inst.ids) is >> id;
    } else if (word == "end") {
      break;
    } else {
      throw DataError("unknown instance field: " + word);
    }
    if (!is) throw DataError("truncated wtrp instance");
  }
  validate_instance(inst);
  return inst;
}

void write_instance(std::ostream& os, const WtrpInstance& inst) {
  char buf[64];
  os << "wtrp-instance v1\nn " << inst.n << "\nweights";
  for (double w : inst.weights) {
    std::snprintf(buf, sizeof(buf), " %.17g", w);
    os << buf;
  }
  os << "\nmatrix\n";
  for (int r = 0; r <= inst.n; ++r) {
    for (int c = 0; c <= inst.n; ++c) {
      std::snprintf(buf, sizeof(buf), "%s%.17g", c == 0 ? "" : " ", inst.at(r, c));
      os << buf;
    }
    os << '\n';
  }
  if (!inst.ids.empty()) {
    os << "ids";
    for (const std::string& id : inst.ids) os << ' ' << id;
    os << '\n';
  }
  os << "end\n";
}

GoalPlanner::Plan GoalPlanner::plan_cycle(const AgentState& agent,
                                          std::span<const Candidate> candidates,
                                          double elapsed_since_plan, bool first_node_reached) {
  if (candidates.empty()) throw InvalidObservation("plan_cycle needs candidates");

  std::set<std::pair<int, std::int64_t>> ids;
  for (const Candidate& c : candidates) ids.emplace(static_cast<int>(c.kind), c.id);

  const bool need = tour_.empty() || first_node_reached || ids != last_ids_ ||
                    elapsed_since_plan >= replan_period_;
  if (!need) {
    return {tour_.front(), tour_, false};
  }

  const WtrpInstance inst = build_cost_matrix(agent, candidates, params_);
  const Tour tour = solve_auto(inst, exact_limit_, seed_++, objective_);
  tour_.clear();
  tour_.reserve(tour.order.size());
  for (int node : tour.order) tour_.push_back(candidates[node - 1]);
  last_ids_ = std::move(ids);
  return {tour_.front(), tour_, true};
}

void GoalPlanner::reset() {
  tour_.clear();
  last_ids_.clear();
}

}  // namespace objnav
