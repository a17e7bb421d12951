#include "nptasmc/source.hpp"

#include <atomic>
#include <mutex>
#include <thread>
#include <vector>

namespace nptasmc {

Source model_source(const NetworkModel& model, const PwctlQuery& query, uint64_t seed,
                    uint64_t stride, uint64_t offset,
                    std::shared_ptr<RunDiagnostics> diagnostics) {
    return [&model, query, seed, stride, offset,
            diagnostics = std::move(diagnostics)](uint64_t index) -> std::optional<Sample> {
        RngStream rng = substream(seed, index * stride + offset);
        RunDiagnostics local;
        RunOptions options;
        options.diagnostics = &local;
        const Run run = random_run(model, query.observer, query.bound, rng, options);
        if (diagnostics) {
            std::atomic_ref(diagnostics->steps).fetch_add(local.steps, std::memory_order_relaxed);
            std::atomic_ref(diagnostics->blocked_component_observations)
                .fetch_add(local.blocked_component_observations, std::memory_order_relaxed);
            std::atomic_ref(diagnostics->delay_ties)
                .fetch_add(local.delay_ties, std::memory_order_relaxed);
        }
        const Outcome outcome = query.is_diamond
                                    ? check_diamond(model, run, query.phi, query.observer,
                                                    query.bound)
                                    : check_box(model, run, query.phi, query.observer, query.bound);
        Sample sample;
        sample.value = outcome.satisfied;
        sample.invert = !query.is_diamond;
        const double inf = std::numeric_limits<double>::infinity();
        sample.event_cost = outcome.hit_cost.value_or(inf);
        sample.event_time = outcome.hit_time.value_or(inf);
        return sample;
    };
}

Source parallel_source(Source inner, unsigned jobs, uint64_t block) {
    if (jobs <= 1) {
        return inner;
    }
    struct State {
        std::mutex mutex;
        uint64_t base = 0;
        bool filled = false;
        std::vector<std::optional<Sample>> cache;
        Source inner;
        unsigned jobs;
        uint64_t block;
    };
    auto state = std::make_shared<State>();
    state->inner = std::move(inner);
    state->jobs = jobs;
    state->block = block;

    return [state](uint64_t index) -> std::optional<Sample> {
        std::scoped_lock lock(state->mutex);
        const uint64_t base = index - index % state->block;
        if (!state->filled || state->base != base) {
            state->cache.assign(state->block, std::nullopt);
            std::vector<std::thread> workers;
            workers.reserve(state->jobs);
            for (unsigned w = 0; w < state->jobs; ++w) {
                workers.emplace_back([state, base, w] {
                    for (uint64_t i = w; i < state->block; i += state->jobs) {
                        state->cache[i] = state->inner(base + i);
                    }
                });
            }
            for (std::thread& worker : workers) {
                worker.join();
            }
            state->base = base;
            state->filled = true;
        }
        return state->cache[index - base];
    };
}

} // namespace nptasmc
