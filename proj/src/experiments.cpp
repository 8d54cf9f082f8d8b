#include "difftrail/experiments.hpp"

#include "difftrail/error.hpp"
#include "difftrail/io.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

namespace difftrail {

std::vector<ExperimentRecord> run_batch(const SearchConfig& config, const SamplingContext& ctx, int n_runs,
                                        std::uint64_t base_seed, int jobs)
{
    if (n_runs < 1) throw ParameterError("need at least one run");
    if (jobs < 1) throw ParameterError("jobs must be >= 1");
    validate(config);

    std::vector<ExperimentRecord> out(static_cast<std::size_t>(n_runs));
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        for (int i = next++; i < n_runs; i = next++) {
            try {
                SearchConfig c = config;
                c.seed = base_seed + static_cast<std::uint64_t>(i);
                const auto r = run_search(c, ctx);
                out[static_cast<std::size_t>(i)] = {i,
                                                    c.technique,
                                                    c.spec.name(),
                                                    c.rounds_to_attack,
                                                    c.target_weight,
                                                    c.seed,
                                                    r.best_weight,
                                                    r.iterations,
                                                    r.duration_s,
                                                    r.terminated_early};
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = n_runs;
            }
        }
    };

    const int threads = std::min(jobs, n_runs);
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

IqrMode parse_iqr_mode(std::string_view s)
{
    if (s == "fences") return IqrMode::fences_1_5;
    if (s == "middle50") return IqrMode::middle_50;
    throw ParameterError("unknown IQR mode '" + std::string(s) + "'");
}

std::vector<double> iterations_of(const std::vector<ExperimentRecord>& records)
{
    std::vector<double> v;
    for (const auto& r : records) v.push_back(static_cast<double>(r.iterations));
    return v;
}

std::vector<double> durations_of(const std::vector<ExperimentRecord>& records)
{
    std::vector<double> v;
    for (const auto& r : records) v.push_back(r.duration_s);
    return v;
}

namespace {

struct Range {
    double lo = 0;
    double hi = 0;
    [[nodiscard]] bool contains(double x) const { return x >= lo && x <= hi; }
};

Range keep_range(const std::vector<double>& v, IqrMode mode)
{
    const double q1 = quantile(v, 0.25);
    const double q3 = quantile(v, 0.75);
    if (mode == IqrMode::middle_50) return {q1, q3};
    const double iqr = q3 - q1;
    return {q1 - 1.5 * iqr, q3 + 1.5 * iqr};
}

} // namespace

std::vector<ExperimentRecord> clean_data(const std::vector<ExperimentRecord>& records, int target_weight,
                                         IqrMode mode)
{
    if (records.empty()) throw ParameterError("nothing to clean");
    std::vector<ExperimentRecord> on_target;
    for (const auto& r : records)
        if (r.best_weight == target_weight) on_target.push_back(r);
    if (on_target.empty()) return {};

    const Range it = keep_range(iterations_of(on_target), mode);
    const Range du = keep_range(durations_of(on_target), mode);
    std::vector<ExperimentRecord> kept;
    for (const auto& r : on_target)
        if (it.contains(static_cast<double>(r.iterations)) && du.contains(r.duration_s)) kept.push_back(r);
    return kept;
}

std::string to_csv(const std::vector<ExperimentRecord>& records)
{
    std::ostringstream out;
    out << experiment_csv_header << '\n';
    out << std::fixed << std::setprecision(9);
    for (const auto& r : records)
        out << r.experiment_id << ',' << to_string(r.technique) << ',' << r.cipher << ',' << r.rounds << ','
            << r.target_weight << ',' << r.seed << ',' << r.best_weight << ',' << r.iterations << ','
            << r.duration_s << ',' << (r.terminated_early ? "true" : "false") << '\n';
    return out.str();
}

std::vector<ExperimentRecord> from_csv(std::string_view text, const std::string& source)
{
    const auto lines = split_lines(text);
    if (lines.empty()) throw ParseError(source + ":1: missing header");
    const auto expected = split(experiment_csv_header, ',');
    const auto header = split(lines[0], ',');
    for (const auto& col : header) {
        if (std::find(expected.begin(), expected.end(), std::string(trim(col))) == expected.end())
            throw ParseError(source + ":1: unknown column '" + std::string(trim(col)) + "'");
    }
    for (std::size_t i = 0; i < expected.size(); ++i) {
        if (i >= header.size()) throw ParseError(source + ":1: missing column '" + expected[i] + "'");
        if (trim(header[i]) != expected[i])
            throw ParseError(source + ":1: column " + std::to_string(i + 1) + " should be '" + expected[i] +
                             "', found '" + std::string(trim(header[i])) + "'");
    }
    if (header.size() != expected.size()) throw ParseError(source + ":1: duplicate columns");

    std::vector<ExperimentRecord> out;
    for (std::size_t ln = 1; ln < lines.size(); ++ln) {
        if (trim(lines[ln]).empty()) continue;
        const std::string at = source + ":" + std::to_string(ln + 1) + ": ";
        const auto f = split(lines[ln], ',');
        if (f.size() != expected.size())
            throw ParseError(at + "expected " + std::to_string(expected.size()) + " fields, got " +
                             std::to_string(f.size()));
        auto need = [&](auto opt, std::size_t col) {
            if (!opt) throw ParseError(at + "bad value '" + f[col] + "' in column '" + expected[col] + "'");
            return *opt;
        };
        ExperimentRecord r;
        r.experiment_id = need(parse_int(trim(f[0])), 0);
        try {
            r.technique = parse_technique(trim(f[1]));
            r.cipher = cipher_from_name(trim(f[2])).name();
        } catch (const ParameterError& e) {
            throw ParseError(at + e.what());
        }
        r.rounds = static_cast<int>(need(parse_int(trim(f[3])), 3));
        r.target_weight = static_cast<int>(need(parse_int(trim(f[4])), 4));
        r.seed = need(parse_uint(trim(f[5])), 5);
        r.best_weight = static_cast<int>(need(parse_int(trim(f[6])), 6));
        r.iterations = need(parse_int(trim(f[7])), 7);
        r.duration_s = need(parse_double(trim(f[8])), 8);
        const auto flag = trim(f[9]);
        if (flag == "true") r.terminated_early = true;
        else if (flag == "false") r.terminated_early = false;
        else throw ParseError(at + "bad value '" + f[9] + "' in column 'terminated_early'");
        if (r.iterations < 1) throw ParseError(at + "iterations must be >= 1");
        if (r.duration_s < 0) throw ParseError(at + "duration must be >= 0");
        out.push_back(std::move(r));
    }
    return out;
}

void write_csv(const std::vector<ExperimentRecord>& records, const std::filesystem::path& path)
{
    write_file_atomic(path, to_csv(records));
}

std::vector<ExperimentRecord> read_csv(const std::filesystem::path& path)
{
    return from_csv(read_file(path), path.string());
}

} // namespace difftrail
