#pragma once

#include "objnav/run/metrics.hpp"
#include "objnav/run/params.hpp"
#include "objnav/run/trace.hpp"
#include "objnav/sim/scene.hpp"

namespace objnav {

// Closed-loop episode: sense, map, generate candidates, plan with the chosen
// policy, follow, check success. Fully deterministic for a fixed spec.
EpisodeResult run_episode(const Scene& scene, const EpisodeSpec& spec, PolicyKind policy,
                          const RunParams& params, TraceWriter* trace = nullptr);

}  // namespace objnav
