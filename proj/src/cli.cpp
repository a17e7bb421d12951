#include "nptasmc/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "nptasmc/benchmarks.hpp"
#include "nptasmc/engine.hpp"
#include "nptasmc/histogram.hpp"
#include "nptasmc/model.hpp"
#include "nptasmc/monitor.hpp"
#include "nptasmc/oracle.hpp"
#include "nptasmc/source.hpp"
#include "nptasmc/stats.hpp"
#include "nptasmc/text.hpp"

namespace nptasmc {

namespace {

using nlohmann::json;

// Unwinds a subcommand with the process exit status already decided.
struct cli_exit {
    int code;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw model_error(Errc::InvalidParams, "cannot open '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw model_error(Errc::InvalidParams, "cannot write '" + path + "'");
    }
    out << content;
}

struct CommonOptions {
    std::string model_path;
    std::string query_path;
    uint64_t seed = 0;
    unsigned jobs = 1;
    std::string format = "json";
    std::string out_path;
    uint64_t max_samples = kDefaultSampleCap;
};

struct LoadedQuery {
    NetworkModel model;
    PwctlQuery query;
};

NetworkModel load_model(const std::string& path, std::ostream& err) {
    ValidationResult result = [&] {
        const std::string text = read_file(path);
        ParseResult parsed = parse_model(text);
        if (!parsed.ok()) {
            return ValidationResult{std::nullopt, std::move(parsed.diagnostics)};
        }
        return validate(*parsed.document);
    }();
    if (!result.ok()) {
        err << path << ":\n" << format_diagnostics(result.diagnostics);
        throw cli_exit{1};
    }
    return std::move(*result.model);
}

PwctlQuery load_query(const std::string& path, const NetworkModel& model, std::ostream& err) {
    QueryParseResult result = parse_query(read_file(path), model);
    if (!result.ok()) {
        err << path << ":\n" << format_diagnostics(result.diagnostics);
        throw cli_exit{1};
    }
    return std::move(*result.query);
}

json diagnostics_json(const RunDiagnostics& diag) {
    return json{{"steps", diag.steps},
                {"blocked_component_observations", diag.blocked_component_observations},
                {"delay_ties", diag.delay_ties}};
}

json params_json(const CommonOptions& common) {
    return json{{"model", common.model_path},
                {"query", common.query_path},
                {"seed", common.seed},
                {"jobs", common.jobs}};
}

void emit(const json& value, const CommonOptions& common, std::ostream& out) {
    const std::string text = value.dump(2) + "\n";
    out << text;
    if (!common.out_path.empty()) {
        write_file(common.out_path, text);
    }
}

const char* compare_outcome_name(CompareOutcome outcome) {
    switch (outcome) {
    case CompareOutcome::Process1Superior: return "process1-superior";
    case CompareOutcome::Process2Superior: return "process2-superior";
    case CompareOutcome::Indifferent: return "indifferent";
    case CompareOutcome::Undecided: return "undecided";
    }
    return "undecided";
}

void add_common(CLI::App* cmd, CommonOptions& common, bool with_query = true) {
    cmd->add_option("--model", common.model_path, "model file (.nptam)")->required();
    if (with_query) {
        cmd->add_option("--query", common.query_path, "query file (.npq)")->required();
    }
    cmd->add_option("--seed", common.seed, "master random seed");
    cmd->add_option("--jobs", common.jobs, "worker threads for run generation")
        ->check(CLI::Range(1u, 256u));
    cmd->add_option("--format", common.format, "artifact format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", common.out_path, "artifact output path");
    cmd->add_option("--max-samples", common.max_samples, "cap on generated runs");
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"statistical model checker for networks of priced timed automata"};
    app.require_subcommand(1);

    // The environment supplies the default seed; --seed overrides it.
    const uint64_t env_seed = [] {
        if (const char* text = std::getenv("NPTASMC_SEED")) {
            char* end = nullptr;
            const unsigned long long parsed = std::strtoull(text, &end, 10);
            if (end && *end == '\0') {
                return static_cast<uint64_t>(parsed);
            }
        }
        return uint64_t{0};
    }();

    // validate
    {
        auto* cmd = app.add_subcommand("validate", "parse and validate a model file");
        auto common = std::make_shared<CommonOptions>();
        common->seed = env_seed;
        cmd->add_option("--model", common->model_path, "model file")->required();
        cmd->add_option("--out", common->out_path, "verdict output path");
        cmd->callback([&, common] {
            ValidationResult result = [&] {
                ParseResult parsed = parse_model(read_file(common->model_path));
                if (!parsed.ok()) {
                    return ValidationResult{std::nullopt, std::move(parsed.diagnostics)};
                }
                return validate(*parsed.document);
            }();
            json verdict;
            verdict["command"] = "validate";
            verdict["model"] = common->model_path;
            verdict["ok"] = result.ok();
            json diags = json::array();
            for (const Diagnostic& d : result.diagnostics) {
                diags.push_back({{"code", to_string(d.code)},
                                 {"message", d.message},
                                 {"line", d.line},
                                 {"col", d.col}});
            }
            verdict["diagnostics"] = diags;
            if (result.ok()) {
                verdict["components"] = result.model->components.size();
                verdict["clocks"] = result.model->clock_names.size();
                verdict["actions"] = result.model->actions.size();
            }
            emit(verdict, *common, out);
            if (!result.ok()) {
                err << format_diagnostics(result.diagnostics);
                throw cli_exit{1};
            }
        });
    }

    // simulate
    {
        auto* cmd = app.add_subcommand("simulate", "generate random run traces");
        auto common = std::make_shared<CommonOptions>();
        common->seed = env_seed;
        auto runs = std::make_shared<uint64_t>(1);
        auto observer_name = std::make_shared<std::string>();
        auto bound = std::make_shared<double>(0.0);
        cmd->add_option("--model", common->model_path, "model file")->required();
        cmd->add_option("--query", common->query_path, "query supplying observer and bound");
        cmd->add_option("--observer", *observer_name, "observer clock (alternative to --query)");
        cmd->add_option("--bound", *bound, "cost bound (alternative to --query)");
        cmd->add_option("--runs", *runs, "number of runs");
        cmd->add_option("--seed", common->seed, "master random seed");
        cmd->add_option("--out", common->out_path, "trace output path (stdout otherwise)");
        cmd->callback([&, common, runs, observer_name, bound] {
            const NetworkModel model = load_model(common->model_path, err);
            uint32_t observer = kTimeClock;
            double cost_bound = *bound;
            if (!common->query_path.empty()) {
                const PwctlQuery query = load_query(common->query_path, model, err);
                observer = query.observer;
                cost_bound = query.bound;
            } else if (!observer_name->empty()) {
                const auto idx = model.clock_index(*observer_name);
                if (!idx) {
                    err << "unknown observer clock '" << *observer_name << "'\n";
                    throw cli_exit{1};
                }
                observer = *idx;
            }
            if (!(cost_bound > 0)) {
                err << "simulate needs --query or a positive --bound\n";
                throw cli_exit{2};
            }
            RunDiagnostics diag;
            RunOptions options;
            options.diagnostics = &diag;
            for (uint64_t k = 0; k < *runs; ++k) {
                RngStream rng = substream(common->seed, k);
                const Run run = random_run(model, observer, cost_bound, rng, options);
                const std::string text = serialize_run(model, run);
                if (common->out_path.empty()) {
                    out << text;
                } else if (*runs == 1) {
                    write_file(common->out_path, text);
                } else {
                    write_file(common->out_path + "." + std::to_string(k), text);
                }
            }
            if (!common->out_path.empty()) {
                json verdict;
                verdict["command"] = "simulate";
                verdict["runs"] = *runs;
                verdict["seed"] = common->seed;
                verdict["observer"] = model.clock_names[observer];
                verdict["bound"] = cost_bound;
                verdict["diagnostics"] = diagnostics_json(diag);
                out << verdict.dump(2) << "\n";
            }
        });
    }

    // estimate
    {
        auto* cmd = app.add_subcommand("estimate", "estimate the query probability");
        auto common = std::make_shared<CommonOptions>();
        common->seed = env_seed;
        auto params = std::make_shared<EstimateParams>();
        add_common(cmd, *common);
        cmd->add_option("--epsilon", params->epsilon, "approximation half-width");
        cmd->add_option("--delta", params->delta, "confidence parameter");
        cmd->callback([&, common, params] {
            const NetworkModel model = load_model(common->model_path, err);
            const PwctlQuery query = load_query(common->query_path, model, err);
            auto diag = std::make_shared<RunDiagnostics>();
            const Source source = parallel_source(
                model_source(model, query, common->seed, 1, 0, diag), common->jobs);
            const EstimateResult result = estimate(source, *params);
            json verdict;
            verdict["command"] = "estimate";
            verdict["params"] = params_json(*common);
            verdict["params"]["epsilon"] = params->epsilon;
            verdict["params"]["delta"] = params->delta;
            verdict["n"] = result.samples;
            verdict["p_hat"] = result.p_hat;
            verdict["interval"] = {result.lo, result.hi};
            verdict["diagnostics"] = diagnostics_json(*diag);
            emit(verdict, *common, out);
        });
    }

    // test (sequential hypothesis test)
    {
        auto* cmd = app.add_subcommand("test", "sequential hypothesis test of the query");
        auto common = std::make_shared<CommonOptions>();
        common->seed = env_seed;
        auto params = std::make_shared<SprtParams>();
        auto theta_set = std::make_shared<bool>(false);
        add_common(cmd, *common);
        cmd->add_option("--theta", params->theta, "threshold probability (defaults to the query)")
            ->each([theta_set](const std::string&) { *theta_set = true; });
        cmd->add_option("--delta0", params->delta0, "upper indifference half-width");
        cmd->add_option("--delta1", params->delta1, "lower indifference half-width");
        cmd->add_option("--alpha", params->alpha, "false positive bound");
        cmd->add_option("--beta", params->beta, "false negative bound");
        cmd->callback([&, common, params, theta_set] {
            const NetworkModel model = load_model(common->model_path, err);
            const PwctlQuery query = load_query(common->query_path, model, err);
            Rel relation = Rel::Ge;
            if (query.comparison) {
                relation = query.comparison->first;
                if (!*theta_set) {
                    params->theta = query.comparison->second;
                }
            } else if (!*theta_set) {
                err << "the query carries no probability comparison; pass --theta\n";
                throw cli_exit{2};
            }
            if (relation == Rel::Eq) {
                err << "equality comparisons are not decidable sequentially; use estimate\n";
                throw cli_exit{2};
            }
            auto diag = std::make_shared<RunDiagnostics>();
            const Source source = parallel_source(
                model_source(model, query, common->seed, 1, 0, diag), common->jobs);
            const SprtResult result = sprt(source, *params, common->max_samples);
            const bool lower_query = relation == Rel::Le || relation == Rel::Lt;
            json verdict;
            verdict["command"] = "test";
            verdict["params"] = params_json(*common);
            verdict["params"]["theta"] = params->theta;
            verdict["params"]["delta0"] = params->delta0;
            verdict["params"]["delta1"] = params->delta1;
            verdict["params"]["alpha"] = params->alpha;
            verdict["params"]["beta"] = params->beta;
            verdict["params"]["p0"] = params->p0();
            verdict["params"]["p1"] = params->p1();
            verdict["params"]["max_samples"] = common->max_samples;
            verdict["samples"] = result.samples;
            switch (result.decision) {
            case Hypothesis::H0:
                verdict["decision"] = "H0";
                verdict["satisfied"] = !lower_query;
                break;
            case Hypothesis::H1:
                verdict["decision"] = "H1";
                verdict["satisfied"] = lower_query;
                break;
            case Hypothesis::Undecided:
                verdict["decision"] = "undecided";
                verdict["satisfied"] = nullptr;
                break;
            }
            verdict["diagnostics"] = diagnostics_json(*diag);
            emit(verdict, *common, out);
        });
    }

    // compare
    {
        auto* cmd = app.add_subcommand("compare", "compare two query probabilities");
        auto common = std::make_shared<CommonOptions>();
        common->seed = env_seed;
        auto model2_path = std::make_shared<std::string>();
        auto query2_path = std::make_shared<std::string>();
        auto params = std::make_shared<CompareParams>();
        add_common(cmd, *common);
        cmd->add_option("--model2", *model2_path, "second model (defaults to --model)");
        cmd->add_option("--query2", *query2_path, "second query")->required();
        cmd->add_option("--u0", params->u0, "favor process 1 at ratio u0");
        cmd->add_option("--u1", params->u1, "favor process 2 at ratio u1");
        cmd->add_option("--alpha", params->alpha, "false positive bound");
        cmd->add_option("--beta", params->beta, "false negative bound");
        cmd->add_option("--p0eq", params->p0_eq, "equality precheck upper threshold");
        cmd->add_option("--p1eq", params->p1_eq, "equality precheck lower threshold");
        cmd->callback([&, common, model2_path, query2_path, params] {
            const NetworkModel model1 = load_model(common->model_path, err);
            const NetworkModel model2 =
                model2_path->empty() ? load_model(common->model_path, err)
                                     : load_model(*model2_path, err);
            const PwctlQuery query1 = load_query(common->query_path, model1, err);
            const PwctlQuery query2 = load_query(*query2_path, model2, err);
            auto diag = std::make_shared<RunDiagnostics>();
            const Source source1 = parallel_source(
                model_source(model1, query1, common->seed, 2, 0, diag), common->jobs);
            const Source source2 = parallel_source(
                model_source(model2, query2, common->seed, 2, 1, diag), common->jobs);
            const CompareVerdict result = compare(source1, source2, *params, common->max_samples);
            json verdict;
            verdict["command"] = "compare";
            verdict["params"] = params_json(*common);
            verdict["params"]["model2"] = model2_path->empty() ? common->model_path : *model2_path;
            verdict["params"]["query2"] = *query2_path;
            verdict["params"]["u0"] = params->u0;
            verdict["params"]["u1"] = params->u1;
            verdict["params"]["alpha"] = params->alpha;
            verdict["params"]["beta"] = params->beta;
            verdict["params"]["p0eq"] = params->p0_eq;
            verdict["params"]["p1eq"] = params->p1_eq;
            verdict["params"]["max_samples"] = common->max_samples;
            verdict["constants"] = {{"a", params->boundary_a()},
                                    {"r", params->boundary_r()},
                                    {"c", params->boundary_c()}};
            verdict["verdict"] = compare_outcome_name(result.value);
            verdict["informative_pairs"] = result.informative_pairs;
            verdict["total_pairs"] = result.total_pairs;
            verdict["diagnostics"] = diagnostics_json(*diag);
            emit(verdict, *common, out);
        });
    }

    // pcompare
    {
        auto* cmd = app.add_subcommand("pcompare", "compare two queries on nested cost bounds");
        auto common = std::make_shared<CommonOptions>();
        common->seed = env_seed;
        auto model2_path = std::make_shared<std::string>();
        auto query2_path = std::make_shared<std::string>();
        auto params = std::make_shared<CompareParams>();
        auto num_bounds = std::make_shared<uint32_t>(10);
        add_common(cmd, *common);
        cmd->add_option("--model2", *model2_path, "second model (defaults to --model)");
        cmd->add_option("--query2", *query2_path, "second query")->required();
        cmd->add_option("--N", *num_bounds, "number of nested bounds")->check(CLI::Range(1u, 100000u));
        cmd->add_option("--u0", params->u0, "favor process 1 at ratio u0");
        cmd->add_option("--u1", params->u1, "favor process 2 at ratio u1");
        cmd->add_option("--alpha", params->alpha, "false positive bound");
        cmd->add_option("--beta", params->beta, "false negative bound");
        cmd->add_option("--p0eq", params->p0_eq, "equality precheck upper threshold");
        cmd->add_option("--p1eq", params->p1_eq, "equality precheck lower threshold");
        cmd->callback([&, common, model2_path, query2_path, params, num_bounds] {
            const NetworkModel model1 = load_model(common->model_path, err);
            const NetworkModel model2 =
                model2_path->empty() ? load_model(common->model_path, err)
                                     : load_model(*model2_path, err);
            const PwctlQuery query1 = load_query(common->query_path, model1, err);
            const PwctlQuery query2 = load_query(*query2_path, model2, err);
            if (query1.bound != query2.bound) {
                err << "the two queries must share one cost bound\n";
                throw cli_exit{2};
            }
            auto diag = std::make_shared<RunDiagnostics>();
            const Source source1 = parallel_source(
                model_source(model1, query1, common->seed, 2, 0, diag), common->jobs);
            const Source source2 = parallel_source(
                model_source(model2, query2, common->seed, 2, 1, diag), common->jobs);
            const ParamCompareResult result = compare_param(source1, source2, query1.bound,
                                                            *num_bounds, *params,
                                                            common->max_samples);
            json verdict;
            verdict["command"] = "pcompare";
            verdict["params"] = params_json(*common);
            verdict["params"]["model2"] = model2_path->empty() ? common->model_path : *model2_path;
            verdict["params"]["query2"] = *query2_path;
            verdict["params"]["N"] = *num_bounds;
            verdict["params"]["u0"] = params->u0;
            verdict["params"]["u1"] = params->u1;
            verdict["params"]["alpha"] = params->alpha;
            verdict["params"]["beta"] = params->beta;
            verdict["params"]["p0eq"] = params->p0_eq;
            verdict["params"]["p1eq"] = params->p1_eq;
            verdict["params"]["max_samples"] = common->max_samples;
            verdict["bounds"] = result.bounds;
            verdict["results"] = result.results;
            verdict["pairs"] = result.pairs;
            verdict["pairs_per_index"] = result.pairs_per_index;
            verdict["diagnostics"] = diagnostics_json(*diag);
            out << verdict.dump(2) << "\n";
            if (!common->out_path.empty()) {
                if (common->format == "csv") {
                    std::ostringstream csv;
                    csv << "index,bound,result,pairs\n";
                    for (size_t i = 0; i < result.results.size(); ++i) {
                        csv << (i + 1) << ',' << format_double(result.bounds[i]) << ','
                            << format_double(result.results[i]) << ','
                            << result.pairs_per_index[i] << "\n";
                    }
                    write_file(common->out_path, csv.str());
                } else {
                    write_file(common->out_path, verdict.dump(2) + "\n");
                }
            }
        });
    }

    // oracle
    {
        auto* cmd = app.add_subcommand("oracle", "integrate the exact query probability");
        auto common = std::make_shared<CommonOptions>();
        common->seed = env_seed;
        auto params = std::make_shared<OracleParams>();
        cmd->add_option("--model", common->model_path, "model file")->required();
        cmd->add_option("--query", common->query_path, "query file")->required();
        cmd->add_option("--tol", params->tolerance, "absolute error budget");
        cmd->add_option("--depth", params->max_depth, "event depth bound");
        cmd->add_option("--out", common->out_path, "verdict output path");
        cmd->callback([&, common, params] {
            const NetworkModel model = load_model(common->model_path, err);
            const PwctlQuery query = load_query(common->query_path, model, err);
            const OracleResult result = exact_probability(model, query, *params);
            json verdict;
            verdict["command"] = "oracle";
            verdict["model"] = common->model_path;
            verdict["query"] = common->query_path;
            verdict["tolerance"] = params->tolerance;
            verdict["depth"] = params->max_depth;
            verdict["probability"] = result.probability;
            verdict["error_bound"] = result.error_bound;
            emit(verdict, *common, out);
        });
    }

    // examples
    {
        auto* cmd = app.add_subcommand("examples", "list or write the built-in model families");
        auto name = std::make_shared<std::string>();
        auto out_dir = std::make_shared<std::string>();
        cmd->add_option("--name", *name, "entry to write");
        cmd->add_option("--out", *out_dir, "directory for the generated files");
        cmd->callback([&, name, out_dir] {
            const auto& registry = example_registry();
            if (name->empty() && out_dir->empty()) {
                json list = json::array();
                for (const ExampleEntry& entry : registry) {
                    json files = json::array();
                    files.push_back(entry.name + ".nptam");
                    for (const auto& [stem, text] : entry.queries) {
                        (void)text;
                        files.push_back(stem + ".npq");
                    }
                    list.push_back({{"name", entry.name},
                                    {"components", entry.model.components.size()},
                                    {"files", files}});
                }
                out << json{{"command", "examples"}, {"entries", list}}.dump(2) << "\n";
                return;
            }
            if (out_dir->empty()) {
                err << "--out directory is required to write example files\n";
                throw cli_exit{2};
            }
            bool wrote = false;
            json written = json::array();
            for (const ExampleEntry& entry : registry) {
                if (!name->empty() && entry.name != *name) {
                    continue;
                }
                wrote = true;
                const std::string model_path = *out_dir + "/" + entry.name + ".nptam";
                write_file(model_path, serialize_model(entry.model));
                written.push_back(model_path);
                for (const auto& [stem, text] : entry.queries) {
                    const std::string query_path = *out_dir + "/" + stem + ".npq";
                    write_file(query_path, text);
                    written.push_back(query_path);
                }
            }
            if (!wrote) {
                err << "unknown example '" << *name << "'\n";
                throw cli_exit{2};
            }
            out << json{{"command", "examples"}, {"written", written}}.dump(2) << "\n";
        });
    }

    // hist
    {
        auto* cmd = app.add_subcommand("hist", "histogram of hit costs over generated runs");
        auto common = std::make_shared<CommonOptions>();
        common->seed = env_seed;
        auto runs = std::make_shared<uint64_t>(10000);
        auto bins = std::make_shared<uint32_t>(20);
        auto rows_path = std::make_shared<std::string>();
        add_common(cmd, *common);
        cmd->add_option("--runs", *runs, "number of runs");
        cmd->add_option("--bins", *bins, "number of equal-width bins")
            ->check(CLI::Range(1u, 1000000u));
        cmd->add_option("--rows", *rows_path, "write per-run outcome rows (JSON lines)");
        cmd->callback([&, common, runs, bins, rows_path] {
            const NetworkModel model = load_model(common->model_path, err);
            const PwctlQuery query = load_query(common->query_path, model, err);
            auto diag = std::make_shared<RunDiagnostics>();
            const Source source = parallel_source(
                model_source(model, query, common->seed, 1, 0, diag), common->jobs);
            std::vector<Sample> samples;
            samples.reserve(*runs);
            for (uint64_t k = 0; k < *runs; ++k) {
                const std::optional<Sample> sample = source(k);
                if (!sample) {
                    break;
                }
                samples.push_back(*sample);
            }
            const Histogram hist = make_histogram(samples, *bins, query.bound);
            if (!rows_path->empty()) {
                std::ostringstream rows;
                for (const Sample& sample : samples) {
                    json row;
                    row["satisfied"] = sample.value;
                    if (std::isfinite(sample.event_cost)) {
                        row["hit_cost"] = sample.event_cost;
                        row["hit_time"] = sample.event_time;
                    } else {
                        row["hit_cost"] = nullptr;
                        row["hit_time"] = nullptr;
                    }
                    rows << row.dump() << "\n";
                }
                write_file(*rows_path, rows.str());
            }
            if (common->format == "csv") {
                const std::string csv = histogram_csv(hist);
                if (common->out_path.empty()) {
                    out << csv;
                } else {
                    write_file(common->out_path, csv);
                }
            } else {
                json verdict;
                verdict["command"] = "hist";
                verdict["params"] = params_json(*common);
                verdict["params"]["runs"] = *runs;
                verdict["params"]["bins"] = *bins;
                verdict["edges"] = hist.edges;
                verdict["counts"] = hist.counts;
                verdict["frequencies"] = hist.frequencies;
                verdict["cumulative"] = hist.cumulative;
                verdict["unsatisfied"] = hist.unsatisfied;
                verdict["total"] = hist.total;
                verdict["diagnostics"] = diagnostics_json(*diag);
                emit(verdict, *common, out);
            }
        });
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    } catch (const cli_exit& e) {
        return e.code;
    } catch (const model_error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

} // namespace nptasmc
