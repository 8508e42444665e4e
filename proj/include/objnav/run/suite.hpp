#pragma once

#include <map>
#include <string>
#include <vector>

#include "objnav/run/metrics.hpp"
#include "objnav/run/params.hpp"

namespace objnav {

struct Suite {
  std::string name;
  std::string base_dir;  // directory of the suite file; scene paths resolve here
  RunParams params;
  std::vector<EpisodeSpec> episodes;
};

Suite load_suite(const std::string& path);
void save_suite(const Suite& suite, const std::string& path);

struct SuiteRun {
  MetricsSummary metrics;
  std::vector<EpisodeResult> results;
};

// Runs every episode (optionally across threads; the output is identical for
// any parallelism) and, when out_dir is non-empty, writes results.jsonl,
// summary.json and optional per-episode traces there.
SuiteRun run_suite(const Suite& suite, PolicyKind policy, int parallelism,
                   const std::string& out_dir, bool traces, std::uint64_t seed_offset);

}  // namespace objnav
