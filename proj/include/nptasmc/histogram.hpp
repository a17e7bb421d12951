#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "nptasmc/stats.hpp"

namespace nptasmc {

struct Histogram {
    std::vector<double> edges;    // bins+1 entries over [0, bound]
    std::vector<uint64_t> counts; // satisfied outcomes per bin (left-inclusive)
    std::vector<double> frequencies;
    std::vector<double> cumulative;
    uint64_t total = 0;
    uint64_t unsatisfied = 0;
};

// Buckets the hit costs of satisfied outcomes into `bins` equal-width bins
// over [0, bound]; values on the upper boundary land in the last bin.
Histogram make_histogram(std::span<const Sample> outcomes, uint32_t bins, double bound);

std::string histogram_csv(const Histogram& hist);

} // namespace nptasmc
