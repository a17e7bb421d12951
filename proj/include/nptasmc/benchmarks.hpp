#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "nptasmc/document.hpp"

namespace nptasmc {

// Built-in model families used for calibration and demos.

// Two-sender network driving a two-step receiver T whose cost clock C runs
// at rate 4 until the first input and rate 2 until the second.
enum class AbtVariant {
    Abt,  // senders A (uniform [0,1]) and B (uniform [0,2]) race
    AbT,  // one sequential sender AB: a! then b!, each uniform [0,2]
    AbrT, // sender B replaced by Br with an exponential delay of rate 1/2
};

ModelDocument gen_abt(AbtVariant variant);

// N trains with exponential arrival rates (i+1)/N compete for a one-track
// bridge; a gate component queues them and grants crossings by index
// priority. Requires trains >= 2.
ModelDocument gen_traingate(int trains);

struct DpaTask {
    int64_t duration_lo = 1;
    int64_t duration_hi = 1;
    std::vector<int64_t> demands; // one entry per resource type
};

struct DpaSpec {
    int sdpas = 1;
    int tasks_per_sdpa = 1;
    int resource_types = 0;
    std::vector<int64_t> capacities;
    std::vector<std::vector<DpaTask>> tasks; // [sdpa][task]
    std::vector<int> priority;               // permutation; lower rank granted first
};

DpaSpec random_dpa_spec(int sdpas, int tasks_per_sdpa, int resource_types, uint64_t seed);

// Job-shop network: one component per SDPA (chain of wait/busy locations
// with uniform task durations) plus, when resources exist, a scheduler
// granting tasks in priority order against shared resource counters.
// Throws InfeasibleDemand when a task demands more than a capacity.
ModelDocument gen_dpa(const DpaSpec& spec);

struct ExampleEntry {
    std::string name;
    ModelDocument model;
    // query file stem -> query text
    std::vector<std::pair<std::string, std::string>> queries;
};

const std::vector<ExampleEntry>& example_registry();

} // namespace nptasmc
