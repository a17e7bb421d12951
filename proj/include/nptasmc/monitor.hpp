#pragma once

#include <optional>

#include "nptasmc/engine.hpp"
#include "nptasmc/property.hpp"

namespace nptasmc {

// Verdict for one run. For a diamond query the hit fields give the observer
// value and global time of the first satisfaction and are present iff
// satisfied. For a box query they locate the first violation of the body
// and are present iff the run is not satisfied.
struct Outcome {
    bool satisfied = false;
    std::optional<double> hit_cost;
    std::optional<double> hit_time;
};

// Satisfaction of "eventually phi while observer <= bound" on a finite run.
// Points interior to delays count: clock atoms are linear in time within a
// delay, so satisfaction subintervals are computed exactly per segment.
// Throws ObserverMismatch when the run was generated for a different
// observer or a smaller bound.
Outcome check_diamond(const NetworkModel& model, const Run& run, const StateProperty& phi,
                      uint32_t observer, double bound);

// Dual: satisfied iff "eventually not phi" is not.
Outcome check_box(const NetworkModel& model, const Run& run, const StateProperty& phi,
                  uint32_t observer, double bound);

} // namespace nptasmc
