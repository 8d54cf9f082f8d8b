#include <doctest.h>

#include "difftrail/cli.hpp"
#include "difftrail/experiments.hpp"
#include "difftrail/graph.hpp"
#include "difftrail/io.hpp"
#include "difftrail/pool.hpp"

#include <filesystem>
#include <sstream>

using namespace difftrail;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(const std::vector<std::string>& args)
{
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string strip_durations(const std::string& text)
{
    std::istringstream in(text);
    std::string line, out;
    while (std::getline(in, line))
        if (line.find("duration") == std::string::npos && line.find(" at ") == std::string::npos) out += line + "\n";
    return out;
}

fs::path tmp(const std::string& name) { return fs::temp_directory_path() / ("difftrail_cli_" + name); }

} // namespace

TEST_CASE("usage errors exit 1")
{
    CHECK(cli({}).code == exit_usage);
    CHECK(cli({"search", "--cipher", "simon48"}).code == exit_usage);
    CHECK(cli({"search", "--bogus"}).code == exit_usage);
    CHECK(cli({"search", "--rounds", "0"}).code == exit_usage);
    CHECK(cli({"search", "--mode", "two-way"}).code == exit_usage);
    const auto bad_split = cli({"search", "--mode", "two-way", "--split", "6,6", "--rounds", "11"});
    CHECK(bad_split.code == exit_usage);
    const auto bad_diff = cli({"search", "--initial-diff", "zz,1"});
    CHECK(bad_diff.code == exit_usage);
    CHECK(bad_diff.err.find("--initial-diff") != std::string::npos);
    CHECK(cli({"search", "--initial-diff", "0,0"}).code == exit_usage);
    CHECK(cli({"sample", "--percent", "0"}).code == exit_usage);
    CHECK(cli({"--help"}).code == exit_ok);
}

TEST_CASE("runtime errors exit 2")
{
    CHECK(cli({"analyze", tmp("missing.csv").string()}).code == exit_runtime);
    CHECK(cli({"pool", "--out", (tmp("nodir") / "p.txt").string(), "--playouts", "5"}).code == exit_runtime);
    CHECK_FALSE(fs::exists(tmp("nodir")));
}

TEST_CASE("search is reproducible and reports the result")
{
    const std::vector<std::string> args{"search", "--cipher", "simon32", "--rounds", "10", "--target-weight", "30",
                                        "--technique", "vista", "--seed", "7", "--max-iterations", "65427"};
    const auto a = cli(args);
    const auto b = cli(args);
    REQUIRE(a.code == exit_ok);
    CHECK(strip_durations(a.out) == strip_durations(b.out));
    CHECK((a.out.find("target reached") != std::string::npos || a.out.find("terminated early") != std::string::npos));
    CHECK(a.out.find("weight timeline") != std::string::npos);
}

TEST_CASE("pool, sample, experiment, analyze and graph compose")
{
    const auto pool = tmp("pool.txt"), base = tmp("base.csv"), vista = tmp("vista.csv"), dot = tmp("g.dot"),
               edges = tmp("g.csv"), summary = tmp("summary.csv");
    REQUIRE(cli({"pool", "--rounds", "8", "--playouts", "500", "--out", pool.string()}).code == exit_ok);
    CHECK(load_pool(pool).records.size() == 4000);

    const auto s = cli({"sample", "--pool", pool.string(), "--rounds", "8"});
    REQUIRE(s.code == exit_ok);
    CHECK(s.out.find("variance reduction") != std::string::npos);

    const std::vector<std::string> common{"--pool", pool.string(), "--rounds", "8", "--target-weight", "22",
                                          "--runs", "12", "--seed", "3", "--max-iterations", "3000"};
    auto with = [&](std::vector<std::string> head, const std::string& tech, const fs::path& out) {
        head.insert(head.end(), common.begin(), common.end());
        head.insert(head.end(), {"--technique", tech, "--out", out.string()});
        return head;
    };
    REQUIRE(cli(with({"experiment"}, "baseline", base)).code == exit_ok);
    REQUIRE(cli(with({"experiment", "--jobs", "2"}, "vista", vista)).code == exit_ok);
    CHECK(read_csv(base).size() == 12);

    const auto an = cli({"analyze", base.string(), vista.string(), "--out", summary.string()});
    REQUIRE(an.code == exit_ok);
    for (const auto* row : {"count", "mean", "std", "min", "25%", "50%", "75%", "max"})
        CHECK(an.out.find(std::string("\n") + row) != std::string::npos);
    CHECK(an.out.find("Welch") != std::string::npos);

    REQUIRE(cli({"graph", "--pool", pool.string(), "--rounds", "8", "--format", "dot", "--out", dot.string()}).code ==
            exit_ok);
    REQUIRE(cli({"graph", "--pool", pool.string(), "--rounds", "8", "--format", "edge-csv", "--source", "sample",
                 "--out", edges.string()})
                .code == exit_ok);
    CHECK(read_file(dot).rfind("digraph", 0) == 0);
    CHECK_NOTHROW(import_edge_csv(edges));

    for (const auto& p : {pool, base, vista, dot, edges, summary}) fs::remove(p);
}

TEST_CASE("config file merges under explicit flags")
{
    const auto merged = merge_config({"search", "--rounds", "9"}, "rounds = 7\n# comment\ntarget-weight = 25\n\n");
    CHECK(merged == std::vector<std::string>{"search", "--rounds", "9", "--target-weight", "25"});
    CHECK_THROWS(merge_config({"search"}, "no equals sign\n"));

    const auto cfg = tmp("cfg.txt");
    write_file_atomic(cfg, "rounds = 6\ntarget-weight = 1000\nmax-iterations = 5\n");
    const auto r = cli({"search", "--config", cfg.string(), "--target-weight", "0"});
    REQUIRE(r.code == exit_ok);
    CHECK(r.out.find("rounds: 6") != std::string::npos);
    CHECK(r.out.find("target weight: 0") != std::string::npos);
    CHECK(r.out.find("iterations: 5") != std::string::npos);

    write_file_atomic(cfg, "unknown-key = 1\n");
    CHECK(cli({"search", "--config", cfg.string()}).code == exit_usage);
    fs::remove(cfg);
}
