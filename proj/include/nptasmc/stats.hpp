#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "nptasmc/diagnostics.hpp"

namespace nptasmc {

// One Bernoulli observation. event_cost carries the observer value of the
// decisive event (+infinity when there is none): the first satisfaction for
// an eventuality, the first violation of the body for an invariance. The
// parametrised comparison re-evaluates the outcome at nested bounds from it.
struct Sample {
    bool value = false;
    double event_cost = 0;
    double event_time = 0;
    // Invariance queries hold at bound b iff the violation lies beyond b.
    bool invert = false;

    static Sample hit(double cost, double time = 0) { return {true, cost, time, false}; }
    static Sample miss();

    // Outcome re-evaluated at a nested bound.
    bool at(double bound) const {
        const bool event_within = event_cost <= bound + 1e-9;
        return invert ? !event_within : event_within;
    }
};

// Deterministic indexed source: the sample for index i must not depend on
// which other indices were evaluated. Returns nullopt when a configured cap
// is exhausted.
using Source = std::function<std::optional<Sample>(uint64_t)>;

Source constant_source(bool value);
Source bernoulli_source(double p, uint64_t seed);
Source capped(Source inner, uint64_t cap);

// --- sequential hypothesis test ---

struct SprtParams {
    double theta = 0.5;
    double delta0 = 0.05; // p0 = theta + delta0
    double delta1 = 0.05; // p1 = theta - delta1
    double alpha = 0.05;  // false positive bound
    double beta = 0.05;   // false negative bound

    double p0() const { return theta + delta0; }
    double p1() const { return theta - delta1; }
    void check() const; // throws InvalidParams
};

enum class Hypothesis : uint8_t { H0, H1, Undecided };

struct SprtResult {
    Hypothesis decision = Hypothesis::Undecided;
    uint64_t samples = 0;
};

inline constexpr uint64_t kDefaultSampleCap = 10'000'000;

// Wald's sequential probability ratio test of H0: p >= p0 against
// H1: p <= p1 in log-likelihood-ratio form. Runs until a boundary is
// crossed or the cap / source is exhausted (-> Undecided).
SprtResult sprt(const Source& source, const SprtParams& params,
                uint64_t max_samples = kDefaultSampleCap);

// --- probability estimation ---

struct EstimateParams {
    double delta = 0.05;   // confidence parameter
    double epsilon = 0.05; // approximation half-width
    void check() const;
};

// ceil(4 ln(1/delta) / epsilon^2): number of runs for an
// [p-eps, p+eps] interval with confidence 1-delta.
uint64_t required_samples(const EstimateParams& params);

struct EstimateResult {
    double p_hat = 0;
    uint64_t samples = 0;
    double lo = 0;
    double hi = 0;
};

// Consumes exactly required_samples() outcomes. Throws SourceExhausted when
// the source ends early.
EstimateResult estimate(const Source& source, const EstimateParams& params);

// --- probability comparison ---

struct CompareParams {
    double u0 = 0.5; // favor process 1 when the superiority ratio u <= u0
    double u1 = 2.0; // favor process 2 when u >= u1
    double alpha = 0.05;
    double beta = 0.05;
    double p0_eq = 0.95; // equality precheck: "outcomes mostly equal" hypothesis
    double p1_eq = 0.85;
    void check() const;

    // Informative-pair success probabilities under the two hypotheses.
    double w0() const { return u0 / (1.0 + u0); }
    double w1() const { return u1 / (1.0 + u1); }
    // Linear-boundary constants of the equivalent count form.
    double boundary_a() const;
    double boundary_r() const;
    double boundary_c() const;
};

enum class CompareOutcome : uint8_t {
    Process1Superior,
    Process2Superior,
    Indifferent,
    Undecided,
};

struct CompareVerdict {
    CompareOutcome value = CompareOutcome::Undecided;
    uint64_t informative_pairs = 0;
    uint64_t total_pairs = 0;
};

// Incremental two-phase comparison shared by compare() and compare_param().
// Phase 1 tests whether the paired outcomes are mostly equal (-> indifferent)
// before phase 2 runs an SPRT on the informative pairs only.
class TwoPhaseComparator {
  public:
    explicit TwoPhaseComparator(const CompareParams& params);

    // Feeds one pair; returns the verdict once decided.
    std::optional<CompareOutcome> update(bool x1, bool x2);

    uint64_t informative_pairs() const { return informative_; }
    uint64_t total_pairs() const { return total_; }
    bool precheck_active() const { return precheck_active_; }

  private:
    double llr_eq_success_, llr_eq_failure_;
    double llr_win_success_, llr_win_failure_;
    double accept_low_, accept_high_;
    double q_ = 0;   // precheck log-likelihood ratio
    double llr_ = 0; // phase-2 log-likelihood ratio
    bool precheck_active_ = true;
    uint64_t informative_ = 0;
    uint64_t total_ = 0;
};

// Compares P(psi2) against P(psi1) on independent run pairs without
// estimating either probability.
CompareVerdict compare(const Source& source1, const Source& source2, const CompareParams& params,
                       uint64_t max_pairs = kDefaultSampleCap);

struct ParamCompareResult {
    // 1 = process 2 superior, 0 = process 1 superior, 0.5 = indifferent,
    // -1 = undecided (cap hit).
    std::vector<double> results;
    std::vector<double> bounds; // i * c / N for i = 1..N
    uint64_t pairs = 0;         // run pairs consumed in total
    std::vector<uint64_t> pairs_per_index;
};

// Parametrised comparison on the N nested bounds i*c/N, reusing every run
// pair for all still-undecided indices.
ParamCompareResult compare_param(const Source& source1, const Source& source2, double bound,
                                 uint32_t num_bounds, const CompareParams& params,
                                 uint64_t max_pairs = kDefaultSampleCap);

} // namespace nptasmc
