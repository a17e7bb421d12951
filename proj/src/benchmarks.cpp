#include "nptasmc/benchmarks.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "nptasmc/diagnostics.hpp"
#include "nptasmc/rng.hpp"

namespace nptasmc {

namespace {

DocGuardAtom atom(std::string var, Rel rel, int64_t bound) {
    return {std::move(var), rel, bound, 0};
}

DocEdge output_edge(std::string src, std::string dst, std::string action, DocGuard guard = {},
                    std::vector<std::string> resets = {}, std::vector<DocUpdate> updates = {}) {
    DocEdge edge;
    edge.source = std::move(src);
    edge.target = std::move(dst);
    edge.action = std::move(action);
    edge.is_output = true;
    edge.guard = std::move(guard);
    DocBranch branch;
    branch.target = edge.target;
    branch.resets = std::move(resets);
    branch.updates = std::move(updates);
    edge.branches.push_back(std::move(branch));
    return edge;
}

DocEdge input_edge(std::string src, std::string dst, std::string action, DocGuard guard = {},
                   std::vector<std::string> resets = {}, std::vector<DocUpdate> updates = {}) {
    DocEdge edge = output_edge(std::move(src), std::move(dst), std::move(action), std::move(guard),
                               std::move(resets), std::move(updates));
    edge.is_output = false;
    return edge;
}

DocUpdate assign_const(std::string target, int64_t value) {
    DocUpdate update;
    update.target = std::move(target);
    update.value.constant = value;
    return update;
}

DocUpdate assign_shift(std::string target, int64_t delta) {
    DocUpdate update;
    update.target = target;
    update.value.constant = delta;
    update.value.terms.emplace_back(1, std::move(target));
    return update;
}

DocComponent make_sender_a() {
    DocComponent a;
    a.name = "A";
    a.clocks = {"x"};
    a.out_actions = {"a"};
    a.in_actions = {"b"};
    a.locations.push_back({"A0", DocGuard{{atom("x", Rel::Le, 1)}}, {}, std::nullopt, 0});
    a.locations.push_back({"A1", std::nullopt, {}, std::nullopt, 0});
    a.initial = "A0";
    a.edges.push_back(output_edge("A0", "A1", "a"));
    return a;
}

DocComponent make_receiver_t() {
    DocComponent t;
    t.name = "T";
    t.clocks = {"C"};
    t.in_actions = {"a", "b"};
    t.locations.push_back({"T0", std::nullopt, {{"C", 4}}, std::nullopt, 0});
    t.locations.push_back({"T1", std::nullopt, {{"C", 2}}, std::nullopt, 0});
    t.locations.push_back({"T3", std::nullopt, {{"C", 0}}, std::nullopt, 0});
    t.initial = "T0";
    t.edges.push_back(input_edge("T0", "T1", "a"));
    t.edges.push_back(input_edge("T1", "T3", "b"));
    return t;
}

} // namespace

ModelDocument gen_abt(AbtVariant variant) {
    ModelDocument doc;
    switch (variant) {
    case AbtVariant::Abt: {
        doc.name = "abt";
        doc.components.push_back(make_sender_a());
        DocComponent b;
        b.name = "B";
        b.clocks = {"y"};
        b.out_actions = {"b"};
        b.in_actions = {"a"};
        b.locations.push_back({"B0", DocGuard{{atom("y", Rel::Le, 2)}}, {}, std::nullopt, 0});
        b.locations.push_back({"B1", std::nullopt, {}, std::nullopt, 0});
        b.initial = "B0";
        b.edges.push_back(output_edge("B0", "B1", "b"));
        doc.components.push_back(std::move(b));
        doc.components.push_back(make_receiver_t());
        break;
    }
    case AbtVariant::AbT: {
        doc.name = "ab_t";
        DocComponent ab;
        ab.name = "AB";
        ab.clocks = {"z"};
        ab.out_actions = {"a", "b"};
        ab.locations.push_back({"AB0", DocGuard{{atom("z", Rel::Le, 2)}}, {}, std::nullopt, 0});
        ab.locations.push_back({"AB1", DocGuard{{atom("z", Rel::Le, 2)}}, {}, std::nullopt, 0});
        ab.locations.push_back({"AB2", std::nullopt, {}, std::nullopt, 0});
        ab.initial = "AB0";
        ab.edges.push_back(output_edge("AB0", "AB1", "a", {}, {"z"}));
        ab.edges.push_back(output_edge("AB1", "AB2", "b"));
        doc.components.push_back(std::move(ab));
        doc.components.push_back(make_receiver_t());
        break;
    }
    case AbtVariant::AbrT: {
        doc.name = "abrt";
        doc.components.push_back(make_sender_a());
        DocComponent br;
        br.name = "Br";
        br.clocks = {"y"};
        br.out_actions = {"b"};
        br.in_actions = {"a"};
        br.locations.push_back({"B0", std::nullopt, {}, std::make_pair<int64_t, int64_t>(1, 2), 0});
        br.locations.push_back({"B1", std::nullopt, {}, std::nullopt, 0});
        br.initial = "B0";
        br.edges.push_back(output_edge("B0", "B1", "b"));
        doc.components.push_back(std::move(br));
        doc.components.push_back(make_receiver_t());
        break;
    }
    }
    return doc;
}

ModelDocument gen_traingate(int trains) {
    if (trains < 2) {
        throw model_error(Errc::InvalidParams, "the bridge needs at least two trains");
    }
    ModelDocument doc;
    doc.name = "traingate" + std::to_string(trains);

    for (int i = 0; i < trains; ++i) {
        const std::string id = std::to_string(i);
        const std::string clock = "x" + id;
        DocComponent train;
        train.name = "Train" + id;
        train.clocks = {clock};
        train.out_actions = {"appr" + id, "arrive" + id, "leave" + id};
        train.in_actions = {"go" + id};
        train.locations.push_back(
            {"Safe", std::nullopt, {}, std::make_pair<int64_t, int64_t>(i + 1, trains), 0});
        train.locations.push_back({"Appr", DocGuard{{atom(clock, Rel::Le, 10)}}, {}, std::nullopt, 0});
        train.locations.push_back({"AtGate", std::nullopt, {}, std::nullopt, 0});
        train.locations.push_back({"Cross", DocGuard{{atom(clock, Rel::Le, 5)}}, {}, std::nullopt, 0});
        train.initial = "Safe";
        train.edges.push_back(output_edge("Safe", "Appr", "appr" + id, {}, {clock}));
        train.edges.push_back(
            output_edge("Appr", "AtGate", "arrive" + id, DocGuard{{atom(clock, Rel::Ge, 3)}}));
        train.edges.push_back(input_edge("AtGate", "Cross", "go" + id, {}, {clock}));
        train.edges.push_back(
            output_edge("Cross", "Safe", "leave" + id, DocGuard{{atom(clock, Rel::Ge, 1)}}));
        doc.components.push_back(std::move(train));
    }

    DocComponent gate;
    gate.name = "Gate";
    gate.clocks = {"g"};
    gate.int_vars.push_back({"qlen", 0, trains, 0, 0});
    for (int i = 0; i < trains; ++i) {
        gate.int_vars.push_back({"w" + std::to_string(i), 0, 1, 0, 0});
    }
    for (int i = 0; i < trains; ++i) {
        gate.out_actions.push_back("go" + std::to_string(i));
    }
    for (int i = 0; i < trains; ++i) {
        gate.in_actions.push_back("arrive" + std::to_string(i));
        gate.in_actions.push_back("leave" + std::to_string(i));
    }
    gate.locations.push_back({"Free", DocGuard{{atom("g", Rel::Le, 1)}}, {}, std::nullopt, 0});
    gate.locations.push_back({"Busy", std::nullopt, {}, std::nullopt, 0});
    gate.initial = "Free";
    for (int i = 0; i < trains; ++i) {
        const std::string id = std::to_string(i);
        // Queue bookkeeping: an arriving train raises its flag in either
        // gate state; a fresh grant window opens only when the gate is free.
        gate.edges.push_back(input_edge("Free", "Free", "arrive" + id, {}, {"g"},
                                        {assign_const("w" + id, 1), assign_shift("qlen", 1)}));
        gate.edges.push_back(input_edge("Busy", "Busy", "arrive" + id, {}, {},
                                        {assign_const("w" + id, 1), assign_shift("qlen", 1)}));
        // Grants prefer the lowest waiting index.
        DocGuard grant_guard{{atom("w" + id, Rel::Eq, 1)}};
        for (int p = 0; p < i; ++p) {
            grant_guard.atoms.push_back(atom("w" + std::to_string(p), Rel::Eq, 0));
        }
        gate.edges.push_back(output_edge("Free", "Busy", "go" + id, std::move(grant_guard), {},
                                         {assign_const("w" + id, 0), assign_shift("qlen", -1)}));
        gate.edges.push_back(input_edge("Busy", "Free", "leave" + id, {}, {"g"}));
    }
    doc.components.push_back(std::move(gate));
    return doc;
}

DpaSpec random_dpa_spec(int sdpas, int tasks_per_sdpa, int resource_types, uint64_t seed) {
    DpaSpec spec;
    spec.sdpas = sdpas;
    spec.tasks_per_sdpa = tasks_per_sdpa;
    spec.resource_types = resource_types;
    RngStream rng(seed, 0);
    for (int r = 0; r < resource_types; ++r) {
        spec.capacities.push_back(1 + static_cast<int64_t>(rng.pick(3)));
    }
    spec.tasks.resize(sdpas);
    for (int i = 0; i < sdpas; ++i) {
        for (int j = 0; j < tasks_per_sdpa; ++j) {
            DpaTask task;
            task.duration_lo = 1 + static_cast<int64_t>(rng.pick(8));
            task.duration_hi = task.duration_lo + 1 + static_cast<int64_t>(rng.pick(8));
            for (int r = 0; r < resource_types; ++r) {
                task.demands.push_back(static_cast<int64_t>(rng.pick(spec.capacities[r] + 1)));
            }
            spec.tasks[i].push_back(std::move(task));
        }
    }
    spec.priority.resize(sdpas);
    std::iota(spec.priority.begin(), spec.priority.end(), 0);
    return spec;
}

ModelDocument gen_dpa(const DpaSpec& spec) {
    if (spec.sdpas < 1 || spec.tasks_per_sdpa < 1 || spec.resource_types < 0) {
        throw model_error(Errc::InvalidParams, "degenerate job-shop spec");
    }
    for (const auto& chain : spec.tasks) {
        for (const DpaTask& task : chain) {
            for (int r = 0; r < spec.resource_types; ++r) {
                if (task.demands.size() > static_cast<size_t>(r) &&
                    task.demands[r] > spec.capacities[r]) {
                    throw model_error(Errc::InfeasibleDemand,
                                      "a task demands more than the capacity of resource " +
                                          std::to_string(r));
                }
            }
        }
    }
    const bool scheduled = spec.resource_types > 0;

    ModelDocument doc;
    doc.name = "dpa" + std::to_string(spec.sdpas) + "_" + std::to_string(spec.tasks_per_sdpa) +
               "_" + std::to_string(spec.resource_types);

    for (int i = 0; i < spec.sdpas; ++i) {
        const std::string id = std::to_string(i);
        const std::string clock = "x" + id;
        DocComponent sdpa;
        sdpa.name = "S" + id;
        sdpa.clocks = {clock};
        sdpa.out_actions = {"fin" + id};
        if (scheduled) {
            sdpa.in_actions = {"go" + id};
            sdpa.int_vars.push_back({"w" + id, 0, 1, 1, 0});
            sdpa.int_vars.push_back({"t" + id, 0, spec.tasks_per_sdpa, 0, 0});
        }
        for (int j = 0; j < spec.tasks_per_sdpa; ++j) {
            const std::string jid = std::to_string(j);
            const DpaTask& task = spec.tasks[i][j];
            if (scheduled) {
                sdpa.locations.push_back({"Wait" + jid, std::nullopt, {}, std::nullopt, 0});
            }
            sdpa.locations.push_back(
                {"Busy" + jid, DocGuard{{atom(clock, Rel::Le, task.duration_hi)}}, {}, std::nullopt,
                 0});
        }
        sdpa.locations.push_back({"Done", std::nullopt, {}, std::nullopt, 0});
        sdpa.initial = scheduled ? "Wait0" : "Busy0";
        for (int j = 0; j < spec.tasks_per_sdpa; ++j) {
            const std::string jid = std::to_string(j);
            const DpaTask& task = spec.tasks[i][j];
            const bool last = j + 1 == spec.tasks_per_sdpa;
            const std::string next = last ? "Done" : (scheduled ? "Wait" : "Busy") +
                                                         std::to_string(j + 1);
            if (scheduled) {
                sdpa.edges.push_back(input_edge("Wait" + jid, "Busy" + jid, "go" + id,
                                                DocGuard{{atom("t" + id, Rel::Eq, j)}}, {clock}));
            }
            std::vector<DocUpdate> updates;
            if (scheduled) {
                for (int r = 0; r < spec.resource_types; ++r) {
                    if (task.demands[r] > 0) {
                        updates.push_back(assign_shift("res" + std::to_string(r), task.demands[r]));
                    }
                }
                if (!last) {
                    updates.push_back(assign_const("w" + id, 1));
                }
                updates.push_back(assign_const("t" + id, j + 1));
            }
            sdpa.edges.push_back(output_edge("Busy" + jid, next, "fin" + id,
                                             DocGuard{{atom(clock, Rel::Ge, task.duration_lo)}},
                                             last ? std::vector<std::string>{} :
                                                    std::vector<std::string>{clock},
                                             std::move(updates)));
        }
        doc.components.push_back(std::move(sdpa));
    }

    if (scheduled) {
        DocComponent sched;
        sched.name = "Sched";
        sched.clocks = {"s"};
        for (int r = 0; r < spec.resource_types; ++r) {
            sched.int_vars.push_back(
                {"res" + std::to_string(r), 0, spec.capacities[r], spec.capacities[r], 0});
        }
        for (int i = 0; i < spec.sdpas; ++i) {
            sched.out_actions.push_back("go" + std::to_string(i));
            sched.in_actions.push_back("fin" + std::to_string(i));
        }
        sched.locations.push_back({"Run", DocGuard{{atom("s", Rel::Le, 1)}}, {}, std::nullopt, 0});
        sched.initial = "Run";
        std::vector<int> rank(spec.sdpas, 0);
        for (int i = 0; i < spec.sdpas; ++i) {
            rank[i] = spec.priority.empty() ? i : spec.priority[i];
        }
        for (int i = 0; i < spec.sdpas; ++i) {
            const std::string id = std::to_string(i);
            for (int j = 0; j < spec.tasks_per_sdpa; ++j) {
                const DpaTask& task = spec.tasks[i][j];
                DocGuard guard{{atom("w" + id, Rel::Eq, 1), atom("t" + id, Rel::Eq, j)}};
                for (int r = 0; r < spec.resource_types; ++r) {
                    if (task.demands[r] > 0) {
                        guard.atoms.push_back(
                            atom("res" + std::to_string(r), Rel::Ge, task.demands[r]));
                    }
                }
                for (int other = 0; other < spec.sdpas; ++other) {
                    if (rank[other] < rank[i]) {
                        guard.atoms.push_back(atom("w" + std::to_string(other), Rel::Eq, 0));
                    }
                }
                std::vector<DocUpdate> updates{assign_const("w" + id, 0)};
                for (int r = 0; r < spec.resource_types; ++r) {
                    if (task.demands[r] > 0) {
                        updates.push_back(
                            assign_shift("res" + std::to_string(r), -task.demands[r]));
                    }
                }
                DocEdge grant = output_edge("Run", "Run", "go" + id, std::move(guard), {"s"},
                                            std::move(updates));
                sched.edges.push_back(std::move(grant));
            }
            sched.edges.push_back(input_edge("Run", "Run", "fin" + id, {}, {"s"}));
        }
        doc.components.push_back(std::move(sched));
    }
    return doc;
}

const std::vector<ExampleEntry>& example_registry() {
    static const std::vector<ExampleEntry> registry = [] {
        std::vector<ExampleEntry> entries;
        entries.push_back({"abt",
                           gen_abt(AbtVariant::Abt),
                           {{"abt_time", "Pr[time<=2](<> T.T3)\n"},
                            {"abt_cost", "Pr[C<=6](<> T.T3)\n"}}});
        entries.push_back({"ab_t",
                           gen_abt(AbtVariant::AbT),
                           {{"ab_t_time", "Pr[time<=2](<> T.T3)\n"},
                            {"ab_t_cost", "Pr[C<=6](<> T.T3)\n"}}});
        entries.push_back({"abrt",
                           gen_abt(AbtVariant::AbrT),
                           {{"abrt_time", "Pr[time<=2](<> T.T3)\n"},
                            {"abrt_cost", "Pr[C<=6](<> T.T3)\n"}}});
        entries.push_back({"traingate6",
                           gen_traingate(6),
                           {{"traingate6_train0", "Pr[time<=100](<> Train0.Cross)\n"},
                            {"traingate6_train5", "Pr[time<=100](<> Train5.Cross)\n"}}});
        const DpaSpec spec = random_dpa_spec(4, 4, 3, 443);
        int64_t horizon = 0;
        for (const auto& chain : spec.tasks) {
            for (const DpaTask& task : chain) {
                horizon += task.duration_hi;
            }
        }
        entries.push_back(
            {"dpa443",
             gen_dpa(spec),
             {{"dpa443_alldone", "Pr[time<=" + std::to_string(horizon) + "](<> S0.Done && S1.Done && S2.Done && S3.Done)\n"}}});
        return entries;
    }();
    return registry;
}

} // namespace nptasmc
