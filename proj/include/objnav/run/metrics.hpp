#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "objnav/core/geometry.hpp"

namespace objnav {

enum class EpisodeMode { Single, SimultaneousMulti, SequentialMulti };
enum class PolicyKind { Wtrp, Greedy, TspExplore };

std::string to_string(EpisodeMode mode);
EpisodeMode episode_mode_from_string(const std::string& s);
std::string to_string(PolicyKind policy);
PolicyKind policy_from_string(const std::string& s);

struct EpisodeSpec {
  int index = 0;
  std::string scene;  // path, relative to the suite file
  Pose2 start;
  std::vector<std::string> targets;
  EpisodeMode mode = EpisodeMode::Single;
  std::uint64_t seed = 1;
  int step_limit = 1500;
  double dt = 0.1;
  double optimal_length = 0.0;  // precomputed on the fully known scene
};

struct EpisodeResult {
  int index = 0;
  bool success = false;
  std::vector<std::uint8_t> found;  // per-target progress flags
  double path_length = 0.0;
  int steps = 0;
  std::string end_reason;  // success | step_limit | no_candidates
  int recheck_drops = 0;
  std::string trace_ref;
};

struct MetricsSummary {
  double sr = 0.0;   // percent
  double spl = 0.0;
  double pr = 0.0;
  double ppl = 0.0;
};

// SR = mean(s); SPL = mean(s * l / max(p, l)); PR = mean(found/total);
// PPL = mean(r * l / max(p, l)). All in percent.
MetricsSummary compute_metrics(std::span<const EpisodeResult> results,
                               std::span<const EpisodeSpec> specs);

}  // namespace objnav
