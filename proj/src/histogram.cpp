#include "nptasmc/histogram.hpp"

#include <cmath>
#include <sstream>

#include "nptasmc/diagnostics.hpp"
#include "nptasmc/text.hpp"

namespace nptasmc {

Histogram make_histogram(std::span<const Sample> outcomes, uint32_t bins, double bound) {
    if (bins == 0 || !(bound > 0)) {
        throw model_error(Errc::InvalidParams, "histogram needs bins >= 1 and a positive bound");
    }
    Histogram hist;
    const double width = bound / static_cast<double>(bins);
    hist.edges.resize(bins + 1);
    for (uint32_t i = 0; i <= bins; ++i) {
        hist.edges[i] = width * static_cast<double>(i);
    }
    hist.counts.assign(bins, 0);
    hist.total = outcomes.size();
    for (const Sample& sample : outcomes) {
        if (!std::isfinite(sample.event_cost) || sample.event_cost > bound) {
            ++hist.unsatisfied;
            continue;
        }
        const auto bin = std::min<uint64_t>(
            static_cast<uint64_t>(sample.event_cost / width), bins - 1);
        ++hist.counts[bin];
    }
    hist.frequencies.resize(bins);
    hist.cumulative.resize(bins);
    double running = 0.0;
    for (uint32_t i = 0; i < bins; ++i) {
        hist.frequencies[i] =
            hist.total == 0 ? 0.0
                            : static_cast<double>(hist.counts[i]) / static_cast<double>(hist.total);
        running += hist.frequencies[i];
        hist.cumulative[i] = running;
    }
    return hist;
}

std::string histogram_csv(const Histogram& hist) {
    std::ostringstream out;
    out << "bin_lo,bin_hi,count,frequency,cumulative\n";
    for (size_t i = 0; i < hist.counts.size(); ++i) {
        out << format_double(hist.edges[i]) << ',' << format_double(hist.edges[i + 1]) << ','
            << hist.counts[i] << ',' << format_double(hist.frequencies[i]) << ','
            << format_double(hist.cumulative[i]) << '\n';
    }
    return out.str();
}

} // namespace nptasmc
