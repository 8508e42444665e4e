#include "objnav/run/metrics.hpp"

#include <algorithm>

#include "objnav/core/errors.hpp"

namespace objnav {

std::string to_string(EpisodeMode mode) {
  switch (mode) {
    case EpisodeMode::Single: return "single";
    case EpisodeMode::SimultaneousMulti: return "simultaneous";
    case EpisodeMode::SequentialMulti: return "sequential";
  }
  return "single";
}

EpisodeMode episode_mode_from_string(const std::string& s) {
  if (s == "single") return EpisodeMode::Single;
  if (s == "simultaneous") return EpisodeMode::SimultaneousMulti;
  if (s == "sequential") return EpisodeMode::SequentialMulti;
  throw DataError("unknown episode mode: " + s);
}

std::string to_string(PolicyKind policy) {
  switch (policy) {
    case PolicyKind::Wtrp: return "wtrp";
    case PolicyKind::Greedy: return "greedy";
    case PolicyKind::TspExplore: return "tsp-explore";
  }
  return "wtrp";
}

PolicyKind policy_from_string(const std::string& s) {
  if (s == "wtrp") return PolicyKind::Wtrp;
  if (s == "greedy") return PolicyKind::Greedy;
  if (s == "tsp-explore") return PolicyKind::TspExplore;
  throw DataError("unknown policy: " + s);
}

MetricsSummary compute_metrics(std::span<const EpisodeResult> results,
                               std::span<const EpisodeSpec> specs) {
  if (results.empty()) throw DataError("empty suite");
  if (results.size() != specs.size()) throw DataError("results and specs misaligned");

  double sr = 0.0, spl = 0.0, pr = 0.0, ppl = 0.0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const EpisodeResult& res = results[i];
    const EpisodeSpec& spec = specs[i];
    const double l = spec.optimal_length;
    const double denom = std::max(res.path_length, l);
    const double ratio = denom > 0.0 ? l / denom : 1.0;
    const double s = res.success ? 1.0 : 0.0;
    double progress = 0.0;
    for (std::uint8_t f : res.found) progress += f ? 1.0 : 0.0;
    progress /= std::max<std::size_t>(res.found.size(), 1);

    sr += s;
    spl += s * ratio;
    pr += progress;
    ppl += progress * ratio;
  }
  const double n = static_cast<double>(results.size());
  return {100.0 * sr / n, 100.0 * spl / n, 100.0 * pr / n, 100.0 * ppl / n};
}

}  // namespace objnav
