#include "nptasmc/stats.hpp"

#include <cmath>
#include <limits>

#include "nptasmc/rng.hpp"

namespace nptasmc {

Sample Sample::miss() {
    const double inf = std::numeric_limits<double>::infinity();
    return {false, inf, inf, false};
}

Source constant_source(bool value) {
    return [value](uint64_t) -> std::optional<Sample> {
        return value ? Sample::hit(0.0) : Sample::miss();
    };
}

Source bernoulli_source(double p, uint64_t seed) {
    return [p, seed](uint64_t index) -> std::optional<Sample> {
        RngStream rng = substream(seed, index);
        return rng.uniform01() < p ? Sample::hit(0.0) : Sample::miss();
    };
}

Source capped(Source inner, uint64_t cap) {
    return [inner = std::move(inner), cap](uint64_t index) -> std::optional<Sample> {
        if (index >= cap) {
            return std::nullopt;
        }
        return inner(index);
    };
}

void SprtParams::check() const {
    const double lo = p1();
    const double hi = p0();
    if (!(0.0 < lo && lo < hi && hi < 1.0)) {
        throw model_error(Errc::InvalidParams,
                          "hypothesis thresholds need 0 < theta-delta1 < theta+delta0 < 1");
    }
    if (!(alpha > 0 && alpha < 1 && beta > 0 && beta < 1)) {
        throw model_error(Errc::InvalidParams, "error bounds alpha, beta must lie in (0,1)");
    }
}

SprtResult sprt(const Source& source, const SprtParams& params, uint64_t max_samples) {
    params.check();
    const double succ = std::log(params.p1() / params.p0());
    const double fail = std::log((1.0 - params.p1()) / (1.0 - params.p0()));
    const double accept_h0 = std::log(params.beta / (1.0 - params.alpha));
    const double accept_h1 = std::log((1.0 - params.beta) / params.alpha);

    double ratio = 0.0;
    SprtResult result;
    while (result.samples < max_samples) {
        const std::optional<Sample> sample = source(result.samples);
        if (!sample) {
            break;
        }
        ++result.samples;
        ratio += sample->value ? succ : fail;
        if (ratio <= accept_h0) {
            result.decision = Hypothesis::H0;
            return result;
        }
        if (ratio >= accept_h1) {
            result.decision = Hypothesis::H1;
            return result;
        }
    }
    result.decision = Hypothesis::Undecided;
    return result;
}

void EstimateParams::check() const {
    if (!(delta > 0 && delta <= 1 && epsilon > 0 && epsilon < 1)) {
        throw model_error(Errc::InvalidParams,
                          "estimation needs delta in (0,1] and epsilon in (0,1)");
    }
}

uint64_t required_samples(const EstimateParams& params) {
    params.check();
    const double n = 4.0 * std::log(1.0 / params.delta) / (params.epsilon * params.epsilon);
    return static_cast<uint64_t>(std::ceil(n));
}

EstimateResult estimate(const Source& source, const EstimateParams& params) {
    const uint64_t n = required_samples(params);
    uint64_t hits = 0;
    for (uint64_t i = 0; i < n; ++i) {
        const std::optional<Sample> sample = source(i);
        if (!sample) {
            throw model_error(Errc::SourceExhausted,
                              "outcome source ended after " + std::to_string(i) + " of " +
                                  std::to_string(n) + " samples");
        }
        hits += sample->value ? 1 : 0;
    }
    EstimateResult result;
    result.samples = n;
    result.p_hat = n == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(n);
    result.lo = result.p_hat - params.epsilon;
    result.hi = result.p_hat + params.epsilon;
    return result;
}

void CompareParams::check() const {
    if (!(0.0 < u0 && u0 < u1)) {
        throw model_error(Errc::InvalidParams, "comparison needs 0 < u0 < u1");
    }
    if (!(alpha > 0 && alpha < 1 && beta > 0 && beta < 1)) {
        throw model_error(Errc::InvalidParams, "error bounds alpha, beta must lie in (0,1)");
    }
    if (!(0.0 < p1_eq && p1_eq < p0_eq && p0_eq < 1.0)) {
        throw model_error(Errc::InvalidParams, "equality precheck needs 0 < p1eq < p0eq < 1");
    }
}

double CompareParams::boundary_a() const {
    return std::log(beta / (1.0 - alpha)) / (std::log(u1) - std::log(u0));
}

double CompareParams::boundary_r() const {
    return std::log((1.0 - beta) / alpha) / (std::log(u1) - std::log(u0));
}

double CompareParams::boundary_c() const {
    return std::log((1.0 + u1) / (1.0 + u0)) / (std::log(u1) - std::log(u0));
}

TwoPhaseComparator::TwoPhaseComparator(const CompareParams& params) {
    params.check();
    llr_eq_success_ = std::log(params.p1_eq / params.p0_eq);
    llr_eq_failure_ = std::log((1.0 - params.p1_eq) / (1.0 - params.p0_eq));
    llr_win_success_ = std::log(params.w1() / params.w0());
    llr_win_failure_ = std::log((1.0 - params.w1()) / (1.0 - params.w0()));
    accept_low_ = std::log(params.beta / (1.0 - params.alpha));
    accept_high_ = std::log((1.0 - params.beta) / params.alpha);
}

std::optional<CompareOutcome> TwoPhaseComparator::update(bool x1, bool x2) {
    ++total_;
    if (precheck_active_) {
        q_ += (x1 == x2) ? llr_eq_success_ : llr_eq_failure_;
        if (q_ <= accept_low_) {
            // Outcomes are overwhelmingly equal; no informative pairs will
            // accumulate at a useful rate.
            return CompareOutcome::Indifferent;
        }
        if (q_ >= accept_high_) {
            precheck_active_ = false;
        }
    }
    if (x1 != x2) {
        ++informative_;
        llr_ += (!x1 && x2) ? llr_win_success_ : llr_win_failure_;
        if (llr_ >= accept_high_) {
            return CompareOutcome::Process2Superior;
        }
        if (llr_ <= accept_low_) {
            return CompareOutcome::Process1Superior;
        }
    }
    return std::nullopt;
}

CompareVerdict compare(const Source& source1, const Source& source2, const CompareParams& params,
                       uint64_t max_pairs) {
    TwoPhaseComparator comparator(params);
    for (uint64_t k = 0; k < max_pairs; ++k) {
        const std::optional<Sample> s1 = source1(k);
        const std::optional<Sample> s2 = source2(k);
        if (!s1 || !s2) {
            break;
        }
        if (auto verdict = comparator.update(s1->value, s2->value)) {
            return {*verdict, comparator.informative_pairs(), comparator.total_pairs()};
        }
    }
    return {CompareOutcome::Undecided, comparator.informative_pairs(), comparator.total_pairs()};
}

ParamCompareResult compare_param(const Source& source1, const Source& source2, double bound,
                                 uint32_t num_bounds, const CompareParams& params,
                                 uint64_t max_pairs) {
    if (num_bounds == 0) {
        throw model_error(Errc::InvalidParams, "parametrised comparison needs at least one bound");
    }
    ParamCompareResult result;
    result.results.assign(num_bounds, -1.0);
    result.pairs_per_index.assign(num_bounds, 0);
    result.bounds.resize(num_bounds);
    std::vector<TwoPhaseComparator> comparators(num_bounds, TwoPhaseComparator(params));
    for (uint32_t i = 0; i < num_bounds; ++i) {
        result.bounds[i] =
            bound * static_cast<double>(i + 1) / static_cast<double>(num_bounds);
    }

    uint32_t undecided = num_bounds;
    for (uint64_t k = 0; k < max_pairs && undecided > 0; ++k) {
        const std::optional<Sample> s1 = source1(k);
        const std::optional<Sample> s2 = source2(k);
        if (!s1 || !s2) {
            break;
        }
        result.pairs = k + 1;
        for (uint32_t i = 0; i < num_bounds; ++i) {
            if (result.results[i] >= 0) {
                continue;
            }
            const bool y1 = s1->at(result.bounds[i]);
            const bool y2 = s2->at(result.bounds[i]);
            if (auto verdict = comparators[i].update(y1, y2)) {
                result.pairs_per_index[i] = comparators[i].total_pairs();
                switch (*verdict) {
                case CompareOutcome::Process2Superior: result.results[i] = 1.0; break;
                case CompareOutcome::Process1Superior: result.results[i] = 0.0; break;
                default: result.results[i] = 0.5; break;
                }
                --undecided;
            }
        }
    }
    for (uint32_t i = 0; i < num_bounds; ++i) {
        if (result.results[i] < 0) {
            result.pairs_per_index[i] = comparators[i].total_pairs();
        }
    }
    return result;
}

} // namespace nptasmc
