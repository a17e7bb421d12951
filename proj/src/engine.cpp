#include "nptasmc/engine.hpp"

#include <algorithm>
#include <cmath>

namespace nptasmc {

namespace {

// Absolute slack for re-evaluating clock guards at a sampled emission time:
// advancing to a computed boundary can undershoot it by rounding.
constexpr double kGuardSlack = 1e-9;

// Delay after which a lower-bound atom starts to hold, from the component's
// local view.
double atom_enable_delay(double value, int64_t rate, double bound) {
    if (value >= bound) {
        return 0.0;
    }
    if (rate <= 0) {
        return kInfiniteDelay;
    }
    return (bound - value) / static_cast<double>(rate);
}

} // namespace

DelayDistribution DelayDistribution::uniform(double lo, double hi) {
    DelayDistribution d;
    d.kind = Kind::Uniform;
    d.lo = lo;
    d.hi = hi;
    return d;
}

DelayDistribution DelayDistribution::exponential(double shift, double rate) {
    DelayDistribution d;
    d.kind = Kind::Exponential;
    d.shift = shift;
    d.rate = rate;
    return d;
}

DelayDistribution DelayDistribution::blocked() {
    return DelayDistribution{};
}

DelayDistribution delay_distribution(const NetworkModel& model, const NetworkState& state,
                                     uint32_t component) {
    const Component& comp = model.components[component];
    const Location& loc = comp.locations[state.locations[component]];

    auto local_rate = [&](uint32_t clock) -> int64_t {
        for (uint32_t i = 0; i < comp.clocks.size(); ++i) {
            if (comp.clocks[i] == clock) {
                return loc.rates[i];
            }
        }
        return 1;
    };

    // Infimum delay enabling any output edge. Integer atoms are constant
    // during delays: an edge with a false one is simply out of the race.
    double enable = kInfiniteDelay;
    for (uint32_t edge_idx : loc.output_edges) {
        const Edge& edge = comp.edges[edge_idx];
        double edge_enable = 0.0;
        for (const GuardAtom& atom : edge.guard.atoms) {
            if (!atom.on_clock) {
                if (!eval_guard({{atom}}, state)) {
                    edge_enable = kInfiniteDelay;
                    break;
                }
                continue;
            }
            edge_enable = std::max(edge_enable,
                                   atom_enable_delay(state.clocks[atom.var], local_rate(atom.var),
                                                     static_cast<double>(atom.bound)));
            if (edge_enable == kInfiniteDelay) {
                break;
            }
        }
        enable = std::min(enable, edge_enable);
    }
    if (enable == kInfiniteDelay) {
        return DelayDistribution::blocked();
    }

    // Supremum delay allowed by the invariant.
    double limit = kInfiniteDelay;
    for (const GuardAtom& atom : loc.invariant.atoms) {
        if (!atom.on_clock) {
            if (!eval_guard({{atom}}, state)) {
                return DelayDistribution::blocked();
            }
            continue;
        }
        const int64_t rate = local_rate(atom.var);
        const double value = state.clocks[atom.var];
        const double bound = static_cast<double>(atom.bound);
        if (rate <= 0) {
            if (value > bound) {
                return DelayDistribution::blocked();
            }
            continue;
        }
        limit = std::min(limit, (bound - value) / static_cast<double>(rate));
    }

    if (limit == kInfiniteDelay) {
        if (!loc.exp_rate) {
            throw model_error(Errc::UnsupportedStructure,
                              "location '" + comp.name + "." + loc.name +
                                  "' has an unbounded delay window but no exprate");
        }
        return DelayDistribution::exponential(enable, *loc.exp_rate);
    }
    if (enable > limit) {
        return DelayDistribution::blocked();
    }
    return DelayDistribution::uniform(enable, limit);
}

double sample_delay(const DelayDistribution& dist, RngStream& rng) {
    switch (dist.kind) {
    case DelayDistribution::Kind::Uniform:
        if (dist.lo == dist.hi) {
            return dist.lo;
        }
        return rng.uniform(dist.lo, dist.hi);
    case DelayDistribution::Kind::Exponential:
        return dist.shift + rng.exponential(dist.rate);
    case DelayDistribution::Kind::Blocked:
        return kInfiniteDelay;
    }
    return kInfiniteDelay;
}

SampledOutput sample_output(const NetworkModel& model, const NetworkState& state,
                            uint32_t component, RngStream& rng, double eps) {
    const std::vector<EnabledOutput> enabled = enabled_outputs(model, state, component, eps);
    if (enabled.empty()) {
        throw model_error(Errc::NoEnabledOutput,
                          "component '" + model.components[component].name +
                              "' has no enabled output to emit");
    }
    const size_t choice = enabled.size() == 1 ? 0 : rng.pick(enabled.size());
    const EnabledOutput& out = enabled[choice];
    const Edge& edge = model.components[component].edges[out.edge];
    uint32_t branch = 0;
    if (edge.branches.size() > 1) {
        uint64_t total = 0;
        for (const Branch& b : edge.branches) {
            total += b.weight;
        }
        uint64_t draw = rng.pick(total);
        for (uint32_t i = 0; i < edge.branches.size(); ++i) {
            if (draw < edge.branches[i].weight) {
                branch = i;
                break;
            }
            draw -= edge.branches[i].weight;
        }
    }
    return {out.action, out.edge, branch};
}

namespace {

// Weighted branch pick for a receiving edge.
uint32_t pick_branch(const Edge& edge, RngStream& rng) {
    if (edge.branches.size() == 1) {
        return 0;
    }
    uint64_t total = 0;
    for (const Branch& b : edge.branches) {
        total += b.weight;
    }
    uint64_t draw = rng.pick(total);
    for (uint32_t i = 0; i < edge.branches.size(); ++i) {
        if (draw < edge.branches[i].weight) {
            return i;
        }
        draw -= edge.branches[i].weight;
    }
    return 0;
}

// The broadcast: every non-emitting component follows its enabled input
// edge, or stays put when none is enabled.
void deliver_input(const NetworkModel& model, NetworkState& state, uint32_t component,
                   uint32_t action, RngStream& rng) {
    const Component& comp = model.components[component];
    const Location& loc = comp.locations[state.locations[component]];
    const Edge* chosen = nullptr;
    for (uint32_t edge_idx : loc.input_edges) {
        const Edge& edge = comp.edges[edge_idx];
        if (edge.action != action || !eval_guard(edge.guard, state)) {
            continue;
        }
        if (chosen != nullptr) {
            throw model_error(Errc::DeterminismViolation,
                              "two enabled input edges for '" + model.actions[action] + "' in " +
                                  comp.name + "." + loc.name);
        }
        chosen = &edge;
    }
    if (chosen == nullptr) {
        return; // stutter: the implicit self-loop
    }
    apply_branch(model, state, component, *chosen, chosen->branches[pick_branch(*chosen, rng)]);
}

} // namespace

Run random_run(const NetworkModel& model, uint32_t observer, double bound, RngStream& rng,
               const RunOptions& options) {
    if (observer >= model.clock_names.size()) {
        throw model_error(Errc::UnknownClock, "observer clock index out of range");
    }
    if (!(bound > 0)) {
        throw model_error(Errc::InvalidParams, "cost bound must be positive");
    }

    Run run;
    run.observer = observer;
    run.bound = bound;
    run.initial = model.initial_state();
    run.truncation = Truncation::BoundHit;

    NetworkState state = run.initial;
    const size_t n = model.components.size();
    std::vector<double> delays(n);
    std::vector<uint32_t> winners;
    RunDiagnostics local;

    while (state.clocks[observer] < bound) {
        if (local.steps >= options.max_steps) {
            throw model_error(Errc::StepLimitExceeded,
                              "run exceeded " + std::to_string(options.max_steps) + " steps");
        }
        ++local.steps;

        const RateVector rates = model.rates_for(state.locations);
        const double observer_rate = static_cast<double>(rates[observer]);

        double min_delay = kInfiniteDelay;
        for (uint32_t j = 0; j < n; ++j) {
            const DelayDistribution dist = delay_distribution(model, state, j);
            if (dist.kind == DelayDistribution::Kind::Blocked) {
                ++local.blocked_component_observations;
            }
            delays[j] = sample_delay(dist, rng);
            min_delay = std::min(min_delay, delays[j]);
        }

        if (min_delay == kInfiniteDelay || state.clocks[observer] + min_delay * observer_rate >= bound) {
            if (min_delay == kInfiniteDelay && observer_rate <= 0) {
                run.truncation = Truncation::Blocked;
                break;
            }
            const double remaining = (bound - state.clocks[observer]) / observer_rate;
            state.clocks = advance(state.clocks, rates, remaining);
            run.steps.push_back({remaining, std::nullopt, std::nullopt, state});
            break;
        }

        winners.clear();
        for (uint32_t j = 0; j < n; ++j) {
            if (delays[j] == min_delay) {
                winners.push_back(j);
            }
        }
        uint32_t winner = winners.front();
        if (winners.size() > 1) {
            ++local.delay_ties;
            winner = winners[rng.pick(winners.size())];
        }
        if (options.race_probe) {
            options.race_probe(delays, winner, min_delay);
        }

        state.clocks = advance(state.clocks, rates, min_delay);
        const SampledOutput out = sample_output(model, state, winner, rng, kGuardSlack);
        const Edge& edge = model.components[winner].edges[out.edge];
        apply_branch(model, state, winner, edge, edge.branches[out.branch]);
        for (uint32_t j = 0; j < n; ++j) {
            if (j != winner) {
                deliver_input(model, state, j, out.action, rng);
            }
        }
        run.steps.push_back({min_delay, out.action, winner, state});
    }

    if (options.diagnostics) {
        options.diagnostics->steps += local.steps;
        options.diagnostics->blocked_component_observations += local.blocked_component_observations;
        options.diagnostics->delay_ties += local.delay_ties;
    }
    return run;
}

} // namespace nptasmc
