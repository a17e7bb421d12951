#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "fixtures.hpp"
#include "nptasmc/cli.hpp"

using namespace nptasmc;
namespace fs = std::filesystem;

TEST_SUITE_BEGIN("cli");

namespace {

struct CliRun {
    int status = 0;
    std::string out;
    std::string err;
};

CliRun run(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    CliRun result;
    result.status = run_cli(args, out, err);
    result.out = out.str();
    result.err = err.str();
    return result;
}

class TempDir {
  public:
    TempDir() {
        dir_ = fs::temp_directory_path() /
               ("nptasmc_test_" + std::to_string(reinterpret_cast<uintptr_t>(this)));
        fs::create_directories(dir_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(dir_, ec);
    }
    std::string file(const std::string& name, const std::string& content) const {
        const fs::path path = dir_ / name;
        std::ofstream(path) << content;
        return path.string();
    }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

  private:
    fs::path dir_;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

} // namespace

TEST_CASE("estimate prints a parameter echo and a believable estimate") {
    TempDir tmp;
    const std::string model = tmp.file("abt.nptam", fixtures::kAbtText);
    const std::string query = tmp.file("q.npq", "Pr[time<=2](<> T.T3)\n");
    const CliRun r = run({"estimate", "--model", model, "--query", query, "--epsilon", "0.02",
                          "--delta", "0.05", "--seed", "7"});
    REQUIRE_MESSAGE(r.status == 0, r.err);
    const auto verdict = nlohmann::json::parse(r.out);
    CHECK(verdict["command"] == "estimate");
    CHECK(verdict["params"]["seed"] == 7);
    CHECK(verdict["n"] == 29958); // ceil(4 ln 20 / 0.0004)
    CHECK(verdict["p_hat"].get<double>() == doctest::Approx(0.75).epsilon(0.02));
}

TEST_CASE("validate fails loudly on a broken model") {
    TempDir tmp;
    const std::string model = tmp.file("bad.nptam", "network bad\nautomaton P\n  clock x\n"
                                                    "  action out a\n  location P0\n  initial P0\n"
                                                    "  edge P0 -> P0 on a!\nend\n");
    const CliRun r = run({"validate", "--model", model});
    CHECK(r.status == 1);
    CHECK(r.err.find("MissingExpRate") != std::string::npos);

    const std::string good = tmp.file("good.nptam", fixtures::kAbtText);
    CHECK(run({"validate", "--model", good}).status == 0);
}

TEST_CASE("usage errors exit with status two") {
    CHECK(run({"estimate"}).status == 2);
    CHECK(run({"no-such-command"}).status == 2);
}

TEST_CASE("histograms accumulate to the satisfied fraction") {
    TempDir tmp;
    const std::string model = tmp.file("abt.nptam", fixtures::kAbtText);
    const std::string query = tmp.file("q.npq", "Pr[time<=2](<> T.T3)\n");
    const std::string csv_path = tmp.path("hist.csv");
    const CliRun r = run({"hist", "--model", model, "--query", query, "--runs", "20000", "--bins",
                          "40", "--seed", "11", "--format", "csv", "--out", csv_path});
    REQUIRE_MESSAGE(r.status == 0, r.err);
    const std::string csv = slurp(csv_path);
    REQUIRE_FALSE(csv.empty());

    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "bin_lo,bin_hi,count,frequency,cumulative");
    double prev = 0;
    double last = 0;
    while (std::getline(lines, line)) {
        const auto comma = line.rfind(',');
        last = std::stod(line.substr(comma + 1));
        CHECK(last >= prev);
        prev = last;
    }
    CHECK(last == doctest::Approx(0.75).epsilon(0.02));
}

TEST_CASE("identical command lines produce identical artifacts") {
    TempDir tmp;
    const std::string model = tmp.file("abt.nptam", fixtures::kAbtText);
    const std::string query = tmp.file("q.npq", "Pr[C<=6](<> T.T3)\n");
    const std::string out1 = tmp.path("a.csv");
    const std::string out2 = tmp.path("b.csv");
    const std::vector<std::string> base{"hist",   "--model", model, "--query", query,
                                        "--runs", "5000",    "--bins", "20",   "--seed",
                                        "3",      "--format", "csv"};
    auto with_out = [&](const std::string& path, const std::string& jobs) {
        std::vector<std::string> args = base;
        args.push_back("--out");
        args.push_back(path);
        args.push_back("--jobs");
        args.push_back(jobs);
        return args;
    };
    REQUIRE(run(with_out(out1, "1")).status == 0);
    REQUIRE(run(with_out(out2, "1")).status == 0);
    CHECK(slurp(out1) == slurp(out2));

    // Worker count must not leak into the artifact.
    const std::string out4 = tmp.path("c.csv");
    REQUIRE(run(with_out(out4, "4")).status == 0);
    CHECK(slurp(out1) == slurp(out4));
}

TEST_CASE("parallel estimation matches the single-threaded verdict") {
    TempDir tmp;
    const std::string model = tmp.file("abt.nptam", fixtures::kAbtText);
    const std::string query = tmp.file("q.npq", "Pr[time<=2](<> T.T3)\n");
    auto args = [&](const char* jobs) {
        return std::vector<std::string>{"estimate", "--model", model,  "--query", query,
                                        "--epsilon", "0.05",   "--delta", "0.05", "--seed",
                                        "21",        "--jobs", jobs};
    };
    const CliRun solo = run(args("1"));
    const CliRun quad = run(args("4"));
    REQUIRE(solo.status == 0);
    REQUIRE(quad.status == 0);
    CHECK(solo.out == quad.out);
}

TEST_CASE("the sequential test answers the query comparison") {
    TempDir tmp;
    const std::string model = tmp.file("abt.nptam", fixtures::kAbtText);
    const std::string query = tmp.file("q.npq", "Pr[time<=2](<> T.T3) >= 0.5\n");
    const CliRun r = run({"test", "--model", model, "--query", query, "--seed", "5"});
    REQUIRE_MESSAGE(r.status == 0, r.err);
    const auto verdict = nlohmann::json::parse(r.out);
    CHECK(verdict["decision"] == "H0");
    CHECK(verdict["satisfied"] == true);

    const std::string flipped = tmp.file("q2.npq", "Pr[time<=2](<> T.T3) <= 0.5\n");
    const CliRun r2 = run({"test", "--model", model, "--query", flipped, "--seed", "5"});
    REQUIRE(r2.status == 0);
    const auto verdict2 = nlohmann::json::parse(r2.out);
    CHECK(verdict2["decision"] == "H0");
    CHECK(verdict2["satisfied"] == false);
}

TEST_CASE("comparison picks the stronger sender network") {
    TempDir tmp;
    const std::string model1 = tmp.file("abt.nptam", fixtures::kAbtText);
    const std::string query1 = tmp.file("q1.npq", "Pr[time<=2](<> T.T3)\n");
    const CliRun wrote = run({"examples", "--name", "ab_t", "--out", tmp.path("")});
    REQUIRE_MESSAGE(wrote.status == 0, wrote.err);
    const CliRun r = run({"compare", "--model", model1, "--query", query1, "--model2",
                          tmp.path("ab_t.nptam"), "--query2", tmp.path("ab_t_time.npq"),
                          "--seed", "2"});
    REQUIRE_MESSAGE(r.status == 0, r.err);
    const auto verdict = nlohmann::json::parse(r.out);
    CHECK(verdict["verdict"] == "process1-superior");
}

TEST_CASE("the oracle subcommand reports probability and error") {
    TempDir tmp;
    const std::string model = tmp.file("abt.nptam", fixtures::kAbtText);
    const std::string query = tmp.file("q.npq", "Pr[time<=2](<> T.T3)\n");
    const CliRun r = run({"oracle", "--model", model, "--query", query, "--tol", "0.0001"});
    REQUIRE_MESSAGE(r.status == 0, r.err);
    const auto verdict = nlohmann::json::parse(r.out);
    CHECK(verdict["probability"].get<double>() == doctest::Approx(0.75).epsilon(1e-3));
    CHECK(verdict["error_bound"].get<double>() <= 0.001);
}

TEST_CASE("examples listing and generation round trip through validate") {
    TempDir tmp;
    const CliRun listing = run({"examples"});
    REQUIRE(listing.status == 0);
    const auto entries = nlohmann::json::parse(listing.out);
    CHECK(entries["entries"].size() >= 5);

    const CliRun wrote = run({"examples", "--name", "abt", "--out", tmp.path("")});
    REQUIRE_MESSAGE(wrote.status == 0, wrote.err);
    CHECK(run({"validate", "--model", tmp.path("abt.nptam")}).status == 0);
}

TEST_CASE("simulate writes parseable traces") {
    TempDir tmp;
    const std::string model_path = tmp.file("abt.nptam", fixtures::kAbtText);
    const std::string query = tmp.file("q.npq", "Pr[time<=2](<> T.T3)\n");
    const std::string trace = tmp.path("run.nprun");
    const CliRun r = run({"simulate", "--model", model_path, "--query", query, "--seed", "9",
                          "--out", trace});
    REQUIRE_MESSAGE(r.status == 0, r.err);
    const NetworkModel model = fixtures::must_validate(fixtures::kAbtText);
    RunParseResult parsed = parse_run(slurp(trace), model);
    CHECK_MESSAGE(parsed.ok(), format_diagnostics(parsed.diagnostics));
}

TEST_SUITE_END();
