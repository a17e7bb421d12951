#pragma once

#include <cstdint>
#include <memory>

#include "nptasmc/engine.hpp"
#include "nptasmc/monitor.hpp"
#include "nptasmc/property.hpp"
#include "nptasmc/stats.hpp"

namespace nptasmc {

// Outcome source backed by the simulation engine: sample i is the monitored
// verdict of the run generated from substream(seed, i*stride + offset).
// stride/offset keep paired sources on disjoint streams.
Source model_source(const NetworkModel& model, const PwctlQuery& query, uint64_t seed,
                    uint64_t stride = 1, uint64_t offset = 0,
                    std::shared_ptr<RunDiagnostics> diagnostics = nullptr);

// Wraps a source so that samples are computed in parallel blocks of
// `block` indices by `jobs` workers. Results are identical to the wrapped
// source for every index, so consumers see the same sequence regardless of
// the worker count.
Source parallel_source(Source inner, unsigned jobs, uint64_t block = 1024);

} // namespace nptasmc
