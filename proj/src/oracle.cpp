#include "nptasmc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "nptasmc/engine.hpp"

namespace nptasmc {

namespace {

constexpr double kEps = 1e-9;
constexpr double kInf = std::numeric_limits<double>::infinity();

double density(const DelayDistribution& dist, double t) {
    switch (dist.kind) {
    case DelayDistribution::Kind::Uniform:
        return (t >= dist.lo && t <= dist.hi) ? 1.0 / (dist.hi - dist.lo) : 0.0;
    case DelayDistribution::Kind::Exponential:
        return t >= dist.shift ? dist.rate * std::exp(-dist.rate * (t - dist.shift)) : 0.0;
    case DelayDistribution::Kind::Blocked:
        return 0.0;
    }
    return 0.0;
}

// P(delay > t); blocked components never cap the race.
double survival(const DelayDistribution& dist, double t) {
    switch (dist.kind) {
    case DelayDistribution::Kind::Uniform:
        if (t <= dist.lo) {
            return 1.0;
        }
        if (t >= dist.hi) {
            return 0.0;
        }
        return (dist.hi - t) / (dist.hi - dist.lo);
    case DelayDistribution::Kind::Exponential:
        return t <= dist.shift ? 1.0 : std::exp(-dist.rate * (t - dist.shift));
    case DelayDistribution::Kind::Blocked:
        return 1.0;
    }
    return 1.0;
}

double support_min(const DelayDistribution& dist) {
    return dist.kind == DelayDistribution::Kind::Uniform ? dist.lo : dist.shift;
}

bool is_dirac(const DelayDistribution& dist) {
    return dist.kind == DelayDistribution::Kind::Uniform && dist.lo == dist.hi;
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double m, double b,
                        double fa, double fm, double fb, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return adaptive_simpson(f, a, lm, m, fa, flm, fm, left, tol * 0.5, depth - 1) +
           adaptive_simpson(f, m, rm, b, fm, frm, fb, right, tol * 0.5, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    if (!(b > a)) {
        return 0.0;
    }
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, m, b, fa, fm, fb, whole, tol, 40);
}

class RaceIntegrator {
  public:
    RaceIntegrator(const NetworkModel& model, const StateProperty& phi, uint32_t observer,
                   double bound, const OracleParams& params)
        : model_(model), phi_(phi), observer_(observer), bound_(bound), params_(params) {}

    double run(const NetworkState& initial, double tol) {
        return probability(initial, params_.max_depth, tol);
    }

    double truncation_error() const { return truncation_error_; }

  private:
    // Probability that phi is hit within the cost bound from this state.
    double probability(const NetworkState& state, int depth, double tol) {
        if (state.clocks[observer_] > bound_ + kEps) {
            return 0.0;
        }
        if (eval_property(phi_, state)) {
            return 1.0;
        }

        const size_t n = model_.components.size();
        std::vector<DelayDistribution> dists(n);
        std::vector<uint32_t> racers;
        for (uint32_t j = 0; j < n; ++j) {
            dists[j] = delay_distribution(model_, state, j);
            if (dists[j].kind != DelayDistribution::Kind::Blocked) {
                racers.push_back(j);
            }
        }
        if (racers.empty()) {
            return 0.0; // no further events; phi is constant during delays
        }
        if (depth <= 0) {
            throw model_error(Errc::DepthExceeded,
                              "network behavior does not settle within the event depth bound");
        }

        const RateVector rates = model_.rates_for(state.locations);
        const double obs_rate = static_cast<double>(rates[observer_]);

        // Point masses: a degenerate window fires at an exact instant.
        double dirac_cut = kInf;
        for (uint32_t j : racers) {
            if (!is_dirac(dists[j])) {
                continue;
            }
            for (uint32_t k : racers) {
                if (k != j && is_dirac(dists[k]) && dists[k].lo == dists[j].lo) {
                    throw model_error(Errc::UnsupportedStructure,
                                      "two components fire deterministically at the same instant");
                }
            }
            dirac_cut = std::min(dirac_cut, dists[j].lo);
        }

        // Common upper limit: beyond the earliest uniform deadline or point
        // mass some survival factor is zero; beyond the observer crossing
        // the recursion yields zero.
        double limit = dirac_cut;
        for (uint32_t j : racers) {
            if (dists[j].kind == DelayDistribution::Kind::Uniform) {
                limit = std::min(limit, dists[j].hi);
            }
        }
        if (obs_rate > 0) {
            limit = std::min(limit, (bound_ - state.clocks[observer_]) / obs_rate);
        }
        if (limit == kInf) {
            // Pure exponential race: cut the tail once the leftover
            // probability mass is negligible.
            double total_rate = 0.0;
            double max_shift = 0.0;
            for (uint32_t j : racers) {
                total_rate += dists[j].rate;
                max_shift = std::max(max_shift, dists[j].shift);
            }
            const double mass = std::max(params_.tolerance * 0.1, 1e-300);
            limit = max_shift + std::log(1.0 / mass) / total_rate;
            truncation_error_ += mass;
        }
        if (limit < 0) {
            return 0.0;
        }

        const double child_tol = tol * 0.5;
        double total = 0.0;

        for (uint32_t winner : racers) {
            if (is_dirac(dists[winner])) {
                const double t = dists[winner].lo;
                if (t > limit + kEps) {
                    continue;
                }
                double mass = 1.0;
                for (uint32_t j : racers) {
                    if (j != winner) {
                        mass *= survival(dists[j], t);
                    }
                }
                if (mass > 0) {
                    total += mass * emission_value(state, rates, winner, t, depth, child_tol);
                }
                continue;
            }

            const double lo = std::max(0.0, support_min(dists[winner]));
            double hi = limit;
            if (dists[winner].kind == DelayDistribution::Kind::Uniform) {
                hi = std::min(hi, dists[winner].hi);
            }
            if (!(hi > lo)) {
                continue;
            }

            // Integrand kinks: support edges of every racer and the guard
            // enabling times of the winner's output edges.
            std::vector<double> cuts{lo, hi};
            for (uint32_t j : racers) {
                for (double c : {support_min(dists[j]),
                                 dists[j].kind == DelayDistribution::Kind::Uniform ? dists[j].hi
                                                                                   : kInf}) {
                    if (c > lo && c < hi) {
                        cuts.push_back(c);
                    }
                }
            }
            for (double c : edge_enable_times(state, winner)) {
                if (c > lo && c < hi) {
                    cuts.push_back(c);
                }
            }
            std::sort(cuts.begin(), cuts.end());
            cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

            auto integrand = [&](double t) {
                double value = density(dists[winner], t);
                if (value <= 0) {
                    return 0.0;
                }
                for (uint32_t j : racers) {
                    if (j != winner) {
                        value *= survival(dists[j], t);
                    }
                }
                if (value <= 0) {
                    return 0.0;
                }
                return value * emission_value(state, rates, winner, t, depth, child_tol);
            };
            const double piece_tol = (tol * 0.5) / static_cast<double>(cuts.size() - 1);
            for (size_t i = 0; i + 1 < cuts.size(); ++i) {
                total += integrate(integrand, cuts[i], cuts[i + 1], piece_tol);
            }
        }
        return total;
    }

    // Expected continuation value when `winner` emits after exactly t.
    double emission_value(const NetworkState& state, const RateVector& rates, uint32_t winner,
                          double t, int depth, double tol) {
        NetworkState advanced = state;
        advanced.clocks = advance(state.clocks, rates, t);
        const std::vector<EnabledOutput> enabled =
            enabled_outputs(model_, advanced, winner, kEps);
        if (enabled.empty()) {
            return 0.0; // boundary of the enabling window
        }
        const double action_p = 1.0 / static_cast<double>(enabled.size());
        double value = 0.0;
        for (const EnabledOutput& out : enabled) {
            const Edge& edge = model_.components[winner].edges[out.edge];
            uint64_t weight_sum = 0;
            for (const Branch& branch : edge.branches) {
                weight_sum += branch.weight;
            }
            for (const Branch& branch : edge.branches) {
                NetworkState succ = advanced;
                apply_branch(model_, succ, winner, edge, branch);
                deliver_inputs(succ, winner, edge.action);
                const double branch_p =
                    static_cast<double>(branch.weight) / static_cast<double>(weight_sum);
                value += action_p * branch_p * probability(succ, depth - 1, tol);
            }
        }
        return value;
    }

    void deliver_inputs(NetworkState& state, uint32_t emitter, uint32_t action) {
        for (uint32_t j = 0; j < model_.components.size(); ++j) {
            if (j == emitter) {
                continue;
            }
            const Component& comp = model_.components[j];
            const Location& loc = comp.locations[state.locations[j]];
            const Edge* chosen = nullptr;
            for (uint32_t edge_idx : loc.input_edges) {
                const Edge& edge = comp.edges[edge_idx];
                if (edge.action != action || !eval_guard(edge.guard, state)) {
                    continue;
                }
                if (chosen != nullptr) {
                    throw model_error(Errc::DeterminismViolation,
                                      "two enabled input edges for '" + model_.actions[action] +
                                          "' in " + comp.name + "." + loc.name);
                }
                chosen = &edge;
            }
            if (chosen == nullptr) {
                continue;
            }
            if (chosen->branches.size() > 1) {
                throw model_error(Errc::UnsupportedStructure,
                                  "probabilistic input branching is outside the integrator");
            }
            apply_branch(model_, state, j, *chosen, chosen->branches.front());
        }
    }

    std::vector<double> edge_enable_times(const NetworkState& state, uint32_t component) const {
        const Component& comp = model_.components[component];
        const Location& loc = comp.locations[state.locations[component]];
        auto local_rate = [&](uint32_t clock) -> int64_t {
            for (uint32_t i = 0; i < comp.clocks.size(); ++i) {
                if (comp.clocks[i] == clock) {
                    return loc.rates[i];
                }
            }
            return 1;
        };
        std::vector<double> times;
        for (uint32_t edge_idx : loc.output_edges) {
            double enable = 0.0;
            for (const GuardAtom& atom : comp.edges[edge_idx].guard.atoms) {
                if (!atom.on_clock) {
                    continue;
                }
                const double value = state.clocks[atom.var];
                const double target = static_cast<double>(atom.bound);
                const int64_t rate = local_rate(atom.var);
                if (value >= target) {
                    continue;
                }
                enable = rate > 0 ? std::max(enable, (target - value) / static_cast<double>(rate))
                                  : kInf;
            }
            if (std::isfinite(enable) && enable > 0) {
                times.push_back(enable);
            }
        }
        return times;
    }

    const NetworkModel& model_;
    const StateProperty& phi_;
    uint32_t observer_;
    double bound_;
    OracleParams params_;
    double truncation_error_ = 0.0;
};

} // namespace

OracleResult exact_probability(const NetworkModel& model, const PwctlQuery& query,
                               const OracleParams& params) {
    if (!(params.tolerance > 0)) {
        throw model_error(Errc::InvalidParams, "tolerance must be positive");
    }
    if (!clock_free(query.phi)) {
        throw model_error(Errc::UnsupportedStructure,
                          "the integrator supports state properties without clock atoms");
    }
    const StateProperty target =
        query.is_diamond ? query.phi : StateProperty::negate(query.phi);
    RaceIntegrator integrator(model, target, query.observer, query.bound, params);
    const double p = integrator.run(model.initial_state(), params.tolerance);
    OracleResult result;
    result.probability = query.is_diamond ? p : 1.0 - p;
    result.error_bound = params.tolerance + integrator.truncation_error();
    return result;
}

} // namespace nptasmc
