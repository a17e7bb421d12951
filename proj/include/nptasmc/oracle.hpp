#pragma once

#include "nptasmc/model.hpp"
#include "nptasmc/property.hpp"

namespace nptasmc {

struct OracleParams {
    double tolerance = 1e-4; // absolute error budget
    int max_depth = 8;       // output events unfolded per run prefix
};

struct OracleResult {
    double probability = 0;
    double error_bound = 0;
};

// Satisfaction probability of a query on a desk-scale network, computed by
// numerically integrating the race between component delay distributions,
// event by event. Supports clock-free state properties (constant between
// events). Throws DepthExceeded when behavior does not settle within
// max_depth events and UnsupportedStructure for shapes outside the
// integrator (clock atoms in phi, degenerate delay windows in a race).
OracleResult exact_probability(const NetworkModel& model, const PwctlQuery& query,
                               const OracleParams& params = {});

} // namespace nptasmc
