#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "nptasmc/model.hpp"
#include "nptasmc/rng.hpp"

namespace nptasmc {

inline constexpr double kInfiniteDelay = std::numeric_limits<double>::infinity();

// Per-component delay distribution in a state. `blocked` marks a component
// that can never emit from here (no enabled output within its invariant).
struct DelayDistribution {
    enum class Kind : uint8_t { Uniform, Exponential, Blocked };

    Kind kind = Kind::Blocked;
    double lo = 0;    // uniform support
    double hi = 0;
    double shift = 0; // exponential offset: earliest enabling delay
    double rate = 0;

    static DelayDistribution uniform(double lo, double hi);
    static DelayDistribution exponential(double shift, double rate);
    static DelayDistribution blocked();

    bool operator==(const DelayDistribution&) const = default;
};

DelayDistribution delay_distribution(const NetworkModel& model, const NetworkState& state,
                                     uint32_t component);

// +infinity for a blocked component.
double sample_delay(const DelayDistribution& dist, RngStream& rng);

struct SampledOutput {
    uint32_t action = 0;
    uint32_t edge = 0;
    uint32_t branch = 0;
};

// Uniform choice over enabled output actions, then a weight-proportional
// choice among the edge's branches. Throws NoEnabledOutput.
SampledOutput sample_output(const NetworkModel& model, const NetworkState& state,
                            uint32_t component, RngStream& rng, double eps = 0.0);

struct RunStep {
    double delay = 0;
    std::optional<uint32_t> action;  // empty for the final truncation step
    std::optional<uint32_t> emitter; // component index
    NetworkState post;
};

enum class Truncation : uint8_t {
    BoundHit, // observer reached the cost bound
    Blocked,  // every component blocked and the observer rate is zero
};

struct Run {
    NetworkState initial;
    std::vector<RunStep> steps;
    Truncation truncation = Truncation::BoundHit;
    uint32_t observer = kTimeClock;
    double bound = 0;
};

struct RunDiagnostics {
    uint64_t steps = 0;
    uint64_t blocked_component_observations = 0;
    uint64_t delay_ties = 0;
};

// Test instrumentation: called once per race with every component's sampled
// delay and the chosen winner.
using RaceProbe =
    std::function<void(const std::vector<double>& delays, uint32_t winner, double delay)>;

struct RunOptions {
    uint64_t max_steps = 1'000'000;
    RunDiagnostics* diagnostics = nullptr;
    RaceProbe race_probe;
};

// Generates one random run up to `bound` on the observer clock: every
// component samples a delay from its distribution, the minimum-delay
// component broadcasts its chosen output, and all others follow their
// enabled input edge (or stay put). Ties are broken uniformly at random.
Run random_run(const NetworkModel& model, uint32_t observer, double bound, RngStream& rng,
               const RunOptions& options = {});

} // namespace nptasmc
