#include <doctest.h>

#include "difftrail/error.hpp"
#include "difftrail/experiments.hpp"
#include "difftrail/io.hpp"

#include <algorithm>
#include <filesystem>
#include <random>

using namespace difftrail;
namespace fs = std::filesystem;

namespace {

ExperimentRecord rec(std::int64_t id, int weight, std::int64_t iterations, double duration)
{
    return {id, Technique::baseline, "simon32", 10, 30, static_cast<std::uint64_t>(id), weight, iterations, duration, false};
}

std::vector<std::int64_t> ids(const std::vector<ExperimentRecord>& v)
{
    std::vector<std::int64_t> out;
    for (const auto& r : v) out.push_back(r.experiment_id);
    return out;
}

SearchConfig small_config()
{
    auto c = SearchConfig::defaults(CipherSpec::simon());
    c.rounds_to_attack = 7;
    c.target_weight = 18;
    c.max_iterations = 2000;
    c.pool_playouts = 1000;
    return c;
}

} // namespace

TEST_CASE("run_batch")
{
    const auto c = small_config();
    const auto ctx = make_context(c);
    const auto one = run_batch(c, ctx, 1, 77);
    REQUIRE(one.size() == 1);
    auto d = c;
    d.seed = 77;
    const auto direct = run_search(d, ctx);
    CHECK(one[0].best_weight == direct.best_weight);
    CHECK(one[0].iterations == direct.iterations);
    CHECK(one[0].seed == 77);
    CHECK(one[0].cipher == "simon32");

    auto strip = [](std::vector<ExperimentRecord> v) {
        for (auto& r : v) r.duration_s = 0;
        return v;
    };
    const auto a = run_batch(c, ctx, 12, 5, 1);
    const auto b = run_batch(c, ctx, 12, 5, 3);
    CHECK(strip(a) == strip(b));
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].experiment_id == static_cast<std::int64_t>(i));
        CHECK(a[i].seed == 5 + i);
        CHECK(a[i].iterations >= 1);
        CHECK(a[i].duration_s >= 0);
    }
    CHECK_THROWS_AS(run_batch(c, ctx, 0, 1), ParameterError);
}

TEST_CASE("clean_data examples")
{
    std::vector<ExperimentRecord> flat;
    for (int i = 0; i < 10; ++i) flat.push_back(rec(i, 30, 100, 0.5));
    CHECK(clean_data(flat, 30).size() == 10);

    auto one_off = flat;
    one_off[3].best_weight = 32;
    const auto kept = clean_data(one_off, 30);
    CHECK(kept.size() == 9);
    CHECK(std::none_of(kept.begin(), kept.end(), [](const auto& r) { return r.experiment_id == 3; }));

    // {1..100} plus 10^6: quartiles of 101 values are 26 and 76, upper fence 151.
    std::vector<ExperimentRecord> spread;
    for (int i = 1; i <= 100; ++i) spread.push_back(rec(i, 30, i, 1.0));
    spread.push_back(rec(1000, 30, 1000000, 1.0));
    const auto cleaned = clean_data(spread, 30);
    CHECK(cleaned.size() == 100);
    CHECK(std::none_of(cleaned.begin(), cleaned.end(), [](const auto& r) { return r.experiment_id == 1000; }));

    const auto mid = clean_data(spread, 30, IqrMode::middle_50);
    CHECK(mid.size() == 51); // 26..76 inclusive
    CHECK(clean_data(mid, 30, IqrMode::middle_50).size() <= mid.size());

    std::vector<ExperimentRecord> off{rec(0, 31, 5, 1), rec(1, 29, 5, 1)};
    CHECK(clean_data(off, 30).empty());
    CHECK_THROWS_AS(clean_data({}, 30), ParameterError);
}

TEST_CASE("clean_data filters on durations too")
{
    std::vector<ExperimentRecord> v;
    for (int i = 0; i < 20; ++i) v.push_back(rec(i, 30, 100 + i, 1.0 + 0.01 * i));
    v.push_back(rec(99, 30, 110, 50.0));
    const auto kept = clean_data(v, 30);
    CHECK(kept.size() == 20);
    CHECK(std::none_of(kept.begin(), kept.end(), [](const auto& r) { return r.experiment_id == 99; }));
}

TEST_CASE("clean_data output is a subset and nearly idempotent")
{
    std::mt19937_64 g(12);
    for (int t = 0; t < 30; ++t) {
        std::vector<ExperimentRecord> v;
        for (int i = 0; i < 200; ++i) {
            std::lognormal_distribution<double> ln(7, 1);
            v.push_back(rec(i, g() % 5 ? 30 : 31, static_cast<std::int64_t>(ln(g)) + 1, ln(g) / 1000));
        }
        const auto once = clean_data(v, 30);
        const auto all = ids(v);
        for (auto id : ids(once)) REQUIRE(std::find(all.begin(), all.end(), id) != all.end());
        const auto mid = clean_data(v, 30, IqrMode::middle_50);
        REQUIRE(clean_data(mid, 30, IqrMode::middle_50).size() <= mid.size());
    }
}

TEST_CASE("CSV round trip and errors")
{
    const auto path = fs::temp_directory_path() / "difftrail_test_records.csv";
    std::vector<ExperimentRecord> v{rec(0, 30, 15474, 1.234567891), rec(1, 31, 65427, 0.000000001)};
    v[1].technique = Technique::vista;
    v[1].terminated_early = true;
    v[1].cipher = "simeck32";
    write_csv(v, path);
    CHECK(read_csv(path) == v);

    const auto text = read_file(path);
    CHECK(text.rfind(std::string(experiment_csv_header) + "\n", 0) == 0);
    CHECK(text.find("1.234567891") != std::string::npos);

    write_csv({}, path);
    CHECK(read_csv(path).empty());

    SUBCASE("unknown column is named")
    {
        write_file_atomic(path, std::string(experiment_csv_header) + ",extra\n");
        try {
            read_csv(path);
            FAIL("expected parse error");
        } catch (const ParseError& e) {
            CHECK(std::string(e.what()).find("extra") != std::string::npos);
        }
    }
    SUBCASE("reordered header")
    {
        write_file_atomic(path, "technique,experiment_id,cipher,rounds,target_weight,seed,best_weight,iterations,"
                                "duration_s,terminated_early\n");
        CHECK_THROWS_AS(read_csv(path), ParseError);
    }
    SUBCASE("missing column")
    {
        write_file_atomic(path, "experiment_id,technique\n");
        CHECK_THROWS_AS(read_csv(path), ParseError);
    }
    SUBCASE("bad value")
    {
        write_file_atomic(path, std::string(experiment_csv_header) + "\n0,baseline,simon32,10,30,1,30,xx,0.1,false\n");
        CHECK_THROWS_AS(read_csv(path), ParseError);
    }
    fs::remove(path);
}

TEST_CASE("CSV round trip of measured durations")
{
    const auto c = small_config();
    const auto ctx = make_context(c);
    const auto v = run_batch(c, ctx, 5, 1);
    CHECK(from_csv(to_csv(v)) == v);
}
