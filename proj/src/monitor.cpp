#include "nptasmc/monitor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace nptasmc {

namespace {

constexpr double kEps = 1e-9;

bool rel_holds(double lhs, Rel rel, double rhs) {
    switch (rel) {
    case Rel::Lt: return lhs < rhs + kEps;
    case Rel::Le: return lhs <= rhs + kEps;
    case Rel::Gt: return lhs > rhs - kEps;
    case Rel::Ge: return lhs >= rhs - kEps;
    case Rel::Eq: return std::abs(lhs - rhs) <= kEps;
    }
    return false;
}

// Truth of phi at offset t into a delay whose start state and rates are
// given. Locations and integers are constant within the delay.
bool eval_at(const StateProperty& phi, const NetworkState& state, const RateVector& rates,
             double t) {
    switch (phi.node) {
    case StateProperty::Node::True:
        return true;
    case StateProperty::Node::LocationAtom:
        return state.locations[phi.component] == phi.location;
    case StateProperty::Node::ClockAtom: {
        const double value =
            state.clocks[phi.cmp.var] + static_cast<double>(rates[phi.cmp.var]) * t;
        return rel_holds(value, phi.cmp.rel, static_cast<double>(phi.cmp.bound));
    }
    case StateProperty::Node::IntAtom: {
        const int64_t value = state.ints[phi.cmp.var];
        switch (phi.cmp.rel) {
        case Rel::Lt: return value < phi.cmp.bound;
        case Rel::Le: return value <= phi.cmp.bound;
        case Rel::Gt: return value > phi.cmp.bound;
        case Rel::Ge: return value >= phi.cmp.bound;
        case Rel::Eq: return value == phi.cmp.bound;
        }
        return false;
    }
    case StateProperty::Node::Not:
        return !eval_at(phi.children.front(), state, rates, t);
    case StateProperty::Node::And:
        for (const StateProperty& child : phi.children) {
            if (!eval_at(child, state, rates, t)) {
                return false;
            }
        }
        return true;
    case StateProperty::Node::Or:
        for (const StateProperty& child : phi.children) {
            if (eval_at(child, state, rates, t)) {
                return true;
            }
        }
        return false;
    }
    return false;
}

// Times within (0, limit) at which some clock atom of phi changes truth.
void collect_crossings(const StateProperty& phi, const NetworkState& state,
                       const RateVector& rates, double limit, std::vector<double>& out) {
    if (phi.node == StateProperty::Node::ClockAtom) {
        const int64_t rate = rates[phi.cmp.var];
        if (rate > 0) {
            const double t =
                (static_cast<double>(phi.cmp.bound) - state.clocks[phi.cmp.var]) /
                static_cast<double>(rate);
            if (t > 0 && t < limit) {
                out.push_back(t);
            }
        }
        return;
    }
    for (const StateProperty& child : phi.children) {
        collect_crossings(child, state, rates, limit, out);
    }
}

// First time offset in [0, duration] at which phi holds with the observer
// still within its bound. Atom truth is constant between crossings, so it
// suffices to probe every crossing and the midpoints between them; a
// satisfaction that starts on an open interval reports the interval's
// infimum.
std::optional<double> scan_segment(const StateProperty& phi, const NetworkState& state,
                                   const RateVector& rates, double duration, uint32_t observer,
                                   double bound) {
    const double obs_value = state.clocks[observer];
    const double obs_rate = static_cast<double>(rates[observer]);
    if (obs_value > bound + kEps) {
        return std::nullopt;
    }
    double limit = duration;
    if (obs_rate > 0) {
        limit = std::min(limit, (bound - obs_value) / obs_rate);
    }
    if (limit < 0) {
        limit = 0;
    }

    std::vector<double> points;
    points.push_back(0.0);
    collect_crossings(phi, state, rates, limit, points);
    if (std::isfinite(limit)) {
        points.push_back(limit);
    }
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());

    for (size_t i = 0; i < points.size(); ++i) {
        if (eval_at(phi, state, rates, points[i])) {
            return points[i];
        }
        if (i + 1 < points.size()) {
            const double mid = std::midpoint(points[i], points[i + 1]);
            if (eval_at(phi, state, rates, mid)) {
                return points[i];
            }
        }
    }
    if (!std::isfinite(limit) && eval_at(phi, state, rates, points.back() + 1.0)) {
        return points.back();
    }
    return std::nullopt;
}

Outcome hit_outcome(const NetworkState& state, const RateVector& rates, uint32_t observer,
                    double elapsed, double t) {
    Outcome out;
    out.satisfied = true;
    out.hit_cost = state.clocks[observer] + static_cast<double>(rates[observer]) * t;
    out.hit_time = elapsed + t;
    return out;
}

} // namespace

Outcome check_diamond(const NetworkModel& model, const Run& run, const StateProperty& phi,
                      uint32_t observer, double bound) {
    if (observer != run.observer) {
        throw model_error(Errc::ObserverMismatch,
                          "run was generated for a different observer clock");
    }
    if (bound > run.bound + kEps) {
        throw model_error(Errc::ObserverMismatch,
                          "run was truncated below the requested cost bound");
    }

    double elapsed = 0.0;
    const NetworkState* state = &run.initial;
    for (const RunStep& step : run.steps) {
        const RateVector rates = model.rates_for(state->locations);
        if (state->clocks[observer] > bound + kEps) {
            break;
        }
        if (auto t = scan_segment(phi, *state, rates, step.delay, observer, bound)) {
            return hit_outcome(*state, rates, observer, elapsed, *t);
        }
        elapsed += step.delay;
        state = &step.post;
    }

    // The final state begins no further delay unless the run was cut off
    // with every component blocked, in which case time still diverges there.
    const RateVector rates = model.rates_for(state->locations);
    const double tail =
        run.truncation == Truncation::Blocked ? std::numeric_limits<double>::infinity() : 0.0;
    if (state->clocks[observer] <= bound + kEps) {
        if (auto t = scan_segment(phi, *state, rates, tail, observer, bound)) {
            return hit_outcome(*state, rates, observer, elapsed, *t);
        }
    }
    return {};
}

Outcome check_box(const NetworkModel& model, const Run& run, const StateProperty& phi,
                  uint32_t observer, double bound) {
    Outcome violation = check_diamond(model, run, StateProperty::negate(phi), observer, bound);
    Outcome out;
    out.satisfied = !violation.satisfied;
    out.hit_cost = violation.hit_cost;
    out.hit_time = violation.hit_time;
    return out;
}

} // namespace nptasmc
