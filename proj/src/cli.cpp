#include "difftrail/cli.hpp"

#include "difftrail/error.hpp"
#include "difftrail/experiments.hpp"
#include "difftrail/graph.hpp"
#include "difftrail/io.hpp"
#include "difftrail/pool.hpp"
#include "difftrail/search.hpp"
#include "difftrail/stats.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

namespace difftrail {

namespace {

// Raised for flag values that parse but make no sense together.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

const std::vector<std::string> supported_ciphers{"simon32", "simeck32"};

struct SearchFlags {
    std::string cipher = "simon32";
    std::optional<int> rounds;
    std::optional<int> target_weight;
    std::string technique = "baseline";
    std::string mode = "one-way";
    std::string split;
    std::string initial_diff;
    std::optional<std::int64_t> max_iterations;
    std::string percent = "5";
    std::uint64_t seed = 1;
    std::string selection = "reject";
    std::string pool_file;
    std::int64_t pool_playouts = default_pool_playouts;
    std::uint64_t pool_seed = default_pool_seed;
};

void add_cipher_flags(CLI::App* cmd, SearchFlags& f)
{
    cmd->add_option("--cipher", f.cipher, "simon32 or simeck32")->check(CLI::IsMember(supported_ciphers));
    cmd->add_option("--rounds", f.rounds, "rounds to attack (default 10 for simon32, 11 for simeck32)")
        ->check(CLI::Range(1, 32));
    cmd->add_option("--initial-diff", f.initial_diff, "start difference HEX,HEX (dL,dR)");
}

void add_pool_flags(CLI::App* cmd, SearchFlags& f)
{
    cmd->add_option("--pool", f.pool_file, "load the pool from a file instead of generating it");
    cmd->add_option("--pool-playouts", f.pool_playouts, "playouts when generating the pool")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--pool-seed", f.pool_seed, "seed when generating the pool");
}

void add_search_flags(CLI::App* cmd, SearchFlags& f)
{
    add_cipher_flags(cmd, f);
    add_pool_flags(cmd, f);
    cmd->add_option("--target-weight", f.target_weight, "stop at this trail weight (default 30 / 28)")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--technique", f.technique)->check(CLI::IsMember({"baseline", "vista"}));
    cmd->add_option("--mode", f.mode)->check(CLI::IsMember({"one-way", "two-way"}));
    cmd->add_option("--split", f.split, "backward,forward rounds for two-way search");
    cmd->add_option("--max-iterations", f.max_iterations,
                    "playout cap (default: 65427 for baseline, calibrated upper quartile for vista)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--percent", f.percent, "quota sample percentage");
    cmd->add_option("--selection", f.selection, "handling of draws outside the AND mask")
        ->check(CLI::IsMember({"reject", "mask"}));
}

std::pair<Word, Word> parse_pair_hex(const std::string& text, const std::string& flag)
{
    const auto parts = split(text, ',');
    if (parts.size() != 2) throw UsageError(flag + ": expected HEX,HEX");
    const auto l = parse_hex_word(trim(parts[0]));
    const auto r = parse_hex_word(trim(parts[1]));
    if (!l || !r) throw UsageError(flag + ": bad hex value in '" + text + "'");
    return {*l, *r};
}

CipherSpec spec_of(const SearchFlags& f) { return cipher_from_name(f.cipher); }

int default_rounds(const CipherSpec& spec) { return spec.variant == Variant::simon ? 10 : 11; }
int default_target(const CipherSpec& spec) { return spec.variant == Variant::simon ? 30 : 28; }

DiffState initial_of(const SearchFlags& f, const CipherSpec& spec)
{
    if (f.initial_diff.empty()) return default_initial_difference(spec);
    const auto [l, r] = parse_pair_hex(f.initial_diff, "--initial-diff");
    if ((l & ~spec.word_mask()) || (r & ~spec.word_mask()))
        throw UsageError("--initial-diff: value exceeds " + std::to_string(spec.word_bits) + " bits");
    if (l == 0 && r == 0) throw UsageError("--initial-diff: zero difference is degenerate");
    return {l, r, 0};
}

SearchConfig config_of(const SearchFlags& f)
{
    const auto spec = spec_of(f);
    SearchConfig c = SearchConfig::defaults(spec);
    c.rounds_to_attack = f.rounds.value_or(default_rounds(spec));
    c.target_weight = f.target_weight.value_or(default_target(spec));
    c.technique = parse_technique(f.technique);
    c.mode = parse_mode(f.mode);
    c.selection = parse_selection(f.selection);
    c.initial = initial_of(f, spec);
    c.seed = f.seed;
    c.pool_playouts = f.pool_playouts;
    c.pool_seed = f.pool_seed;
    try {
        c.percent = Percent::parse(f.percent);
    } catch (const ParameterError& e) {
        throw UsageError(std::string("--percent: ") + e.what());
    }
    if (c.mode == SearchMode::two_way) {
        if (f.split.empty()) throw UsageError("--split: required for two-way search");
        const auto parts = split(f.split, ',');
        const auto b = parts.size() == 2 ? parse_int(trim(parts[0])) : std::nullopt;
        const auto fw = parts.size() == 2 ? parse_int(trim(parts[1])) : std::nullopt;
        if (!b || !fw) throw UsageError("--split: expected B,F");
        c.split = {static_cast<int>(*b), static_cast<int>(*fw)};
    } else if (!f.split.empty()) {
        throw UsageError("--split: only valid with --mode two-way");
    }
    if (f.max_iterations) c.max_iterations = *f.max_iterations;
    try {
        validate(c);
    } catch (const ParameterError& e) {
        throw UsageError(e.what());
    }
    return c;
}

DifferentialPool pool_for(const SearchFlags& f, const SearchConfig& c)
{
    if (!f.pool_file.empty()) {
        auto pool = load_pool(f.pool_file);
        if (pool.spec.variant != c.spec.variant || pool.spec.word_bits != c.spec.word_bits)
            throw ParameterError("--pool: file holds a " + pool.spec.name() + " pool, not " + c.spec.name());
        return pool;
    }
    return build_pool(c.spec, c.rounds_to_attack, c.pool_playouts, c.initial, c.pool_seed);
}

// The cap when --max-iterations is absent: the fixed default for
// baseline runs, the baseline upper quartile on the same workload for VISTA.
std::int64_t default_cap(const SearchConfig& c, const DifferentialPool& pool, std::ostream& out)
{
    if (c.technique == Technique::baseline) return default_iteration_cap;
    SearchConfig base = c;
    base.technique = Technique::baseline;
    const auto ctx = make_context(base, pool);
    const auto cap = calibrate_iteration_cap(base, ctx, 50, c.seed);
    out << "calibrated iteration cap: " << cap << " (upper quartile of 50 baseline runs)\n";
    return cap;
}

void print_config(const SearchConfig& c, std::ostream& out)
{
    out << "cipher: " << c.spec.name() << "\nrounds: " << c.rounds_to_attack << "\ntarget weight: "
        << c.target_weight << "\ntechnique: " << to_string(c.technique) << "\nmode: " << to_string(c.mode);
    if (c.mode == SearchMode::two_way)
        out << " (" << c.split.backward_rounds << " backward, " << c.split.forward_rounds << " forward)";
    out << "\ninitial difference: " << hex_word(c.initial.left, c.spec.word_bits) << ","
        << hex_word(c.initial.right, c.spec.word_bits) << "\nmax iterations: " << c.max_iterations
        << "\nseed: " << c.seed << "\n";
}

int cmd_pool(const SearchFlags& f, const std::string& out_path, std::ostream& out)
{
    const auto spec = spec_of(f);
    SearchConfig c = SearchConfig::defaults(spec);
    c.rounds_to_attack = f.rounds.value_or(default_rounds(spec));
    c.initial = initial_of(f, spec);
    const auto pool = build_pool(spec, c.rounds_to_attack, f.pool_playouts, c.initial, f.pool_seed);
    persist_pool(pool, out_path);
    out << "records: " << pool.records.size() << "\ndistinct c: " << pool.counts.size() << "\nwritten: "
        << out_path << "\n";
    return exit_ok;
}

int cmd_sample(const SearchFlags& f, const std::string& out_path, std::ostream& out)
{
    const auto c = config_of(f);
    const auto pool = pool_for(f, c);
    const auto sample = define_sample(pool, c.percent);
    const auto pop = as_numbers(pool.c_values());
    const auto smp = as_numbers(sample.values);
    const double pv = population_variance(pop);
    const double sv = smp.size() < 2 ? 0.0 : sample_variance(smp);
    out << std::fixed << std::setprecision(2);
    out << "pool size: " << pool.records.size() << "\ndistinct c: " << pool.counts.size()
        << "\nsample size: " << sample.values.size() << " (" << c.percent.value() << "%)"
        << "\npopulation variance: " << pv << "\nsample variance: " << sv
        << "\nvariance reduction: " << pv - sv << "\n";
    if (!out_path.empty()) {
        std::ostringstream body;
        body << "c,count\n";
        for (const auto& [v, k] : sample.source_counts) body << hex_word(v, pool.spec.word_bits) << ',' << k << '\n';
        write_file_atomic(out_path, body.str());
        out << "written: " << out_path << "\n";
    }
    return exit_ok;
}

int cmd_search(const SearchFlags& f, std::ostream& out)
{
    auto c = config_of(f);
    const auto pool = pool_for(f, c);
    if (!f.max_iterations) c.max_iterations = default_cap(c, pool, out);
    const auto ctx = make_context(c, pool);
    print_config(c, out);
    const auto r = run_search(c, ctx);
    out << "best weight: " << r.best_weight << "\niterations: " << r.iterations << "\nduration_s: " << std::fixed
        << std::setprecision(6) << r.duration_s << "\n";
    out << (r.best_weight <= c.target_weight ? "target reached" : "target not reached");
    if (r.terminated_early) out << " (terminated early at the iteration cap)";
    out << "\nbest path:";
    for (Word w : r.best_path) out << ' ' << hex_word(w, c.spec.word_bits);
    out << "\nweight timeline:\n";
    for (const auto& p : r.weight_timeline) out << "  " << p.weight << " at " << p.elapsed_s << " s\n";
    return exit_ok;
}

int cmd_experiment(const SearchFlags& f, int runs, int jobs, const std::string& out_path, std::ostream& out)
{
    auto c = config_of(f);
    const auto pool = pool_for(f, c);
    if (!f.max_iterations) c.max_iterations = default_cap(c, pool, out);
    const auto ctx = make_context(c, pool);
    print_config(c, out);
    const auto records = run_batch(c, ctx, runs, c.seed, jobs);
    write_csv(records, out_path);
    const auto hits = std::count_if(records.begin(), records.end(),
                                    [&](const auto& r) { return r.best_weight <= c.target_weight; });
    out << "runs: " << records.size() << "\nreached target: " << hits << "\nwritten: " << out_path << "\n";
    return exit_ok;
}

void print_summary_table(const std::vector<std::string>& names, const std::vector<SummaryStats>& cols,
                         std::ostream& out)
{
    const int w = 16;
    out << std::left << std::setw(8) << "" << std::right;
    for (const auto& n : names) out << std::setw(w) << n;
    out << '\n' << std::fixed << std::setprecision(2);
    const std::pair<const char*, double SummaryStats::*> rows[] = {
        {"count", &SummaryStats::count}, {"mean", &SummaryStats::mean}, {"std", &SummaryStats::std},
        {"min", &SummaryStats::min},     {"25%", &SummaryStats::q1},    {"50%", &SummaryStats::median},
        {"75%", &SummaryStats::q3},      {"max", &SummaryStats::max}};
    for (const auto& [label, field] : rows) {
        out << std::left << std::setw(8) << label << std::right;
        for (const auto& s : cols) out << std::setw(w) << s.*field;
        out << '\n';
    }
}

int cmd_analyze(const std::vector<std::string>& files, std::optional<int> target, const std::string& iqr,
                const std::string& out_path, std::ostream& out, std::ostream& err)
{
    const auto mode = parse_iqr_mode(iqr);
    std::vector<std::string> names;
    std::vector<SummaryStats> iter_cols, dur_cols;
    std::vector<std::vector<double>> cleaned_iters;
    std::ostringstream csv;
    csv << "file,metric,count,mean,std,min,q1,median,q3,max\n" << std::setprecision(9);
    for (const auto& file : files) {
        const auto records = read_csv(file);
        if (records.empty()) throw ParameterError(file + ": no records");
        const int t = target.value_or(records.front().target_weight);
        const auto kept = clean_data(records, t, mode);
        out << file << ": " << records.size() << " records, " << kept.size() << " kept after cleaning (target "
            << t << ")\n";
        if (kept.size() < 2) {
            err << "warning: " << file << ": fewer than 2 records survive cleaning; skipped\n";
            continue;
        }
        std::string label = std::string(to_string(kept.front().technique));
        names.push_back(label);
        iter_cols.push_back(summarize(iterations_of(kept)));
        dur_cols.push_back(summarize(durations_of(kept)));
        cleaned_iters.push_back(iterations_of(kept));
        for (const auto& [metric, s] : {std::pair{"iterations", iter_cols.back()}, std::pair{"duration_s", dur_cols.back()}})
            csv << file << ',' << metric << ',' << s.count << ',' << s.mean << ',' << s.std << ',' << s.min << ','
                << s.q1 << ',' << s.median << ',' << s.q3 << ',' << s.max << '\n';
    }
    if (names.empty()) {
        err << "warning: no data left to summarize\n";
        return exit_ok;
    }
    out << "\niterations\n";
    print_summary_table(names, iter_cols, out);
    out << "\nduration_s\n";
    print_summary_table(names, dur_cols, out);
    if (cleaned_iters.size() == 2) {
        const auto tt = welch_t_test(cleaned_iters[0], cleaned_iters[1]);
        out << "\nWelch t-test on iterations (" << names[0] << " vs " << names[1] << "): t = " << std::setprecision(4)
            << tt.t << ", df = " << tt.df << ", p = " << std::scientific << tt.p << std::fixed << "\n";
        out << "median ratio " << names[1] << "/" << names[0] << ": " << iter_cols[1].median / iter_cols[0].median
            << "\n";
    }
    if (!out_path.empty()) {
        write_file_atomic(out_path, csv.str());
        out << "written: " << out_path << "\n";
    }
    return exit_ok;
}

int cmd_graph(const SearchFlags& f, const std::string& source, const std::string& format,
              const std::string& out_path, std::ostream& out)
{
    auto c = config_of(f);
    const auto pool = pool_for(f, c);
    std::vector<std::vector<Word>> paths;
    if (source == "pool") {
        paths = pool_paths(pool);
    } else {
        // Same number of unguided playouts, drawing from the quota sample.
        c.technique = Technique::vista;
        const auto ctx = make_context(c, pool);
        paths = context_paths(c.initial, pool.provenance.rounds, pool.provenance.playouts, ctx, c.spec, c.seed);
    }
    const auto g = build_graph(paths);
    const auto m = graph_metrics(g);
    export_graph(g, parse_graph_format(format), out_path, c.spec.word_bits);
    out << "nodes: " << m.node_count << "\nedges: " << m.edge_count << "\nself-loops: " << m.self_loops
        << "\ndensity: " << std::setprecision(6) << m.density << "\nmax degree: " << m.max_degree
        << "\nweakly connected components: " << m.weakly_connected_components << "\nwritten: " << out_path << "\n";
    return exit_ok;
}

} // namespace

std::vector<std::string> merge_config(const std::vector<std::string>& args, const std::string& config_text)
{
    std::vector<std::string> merged = args;
    auto given = [&](const std::string& flag) {
        return std::any_of(args.begin(), args.end(),
                           [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
    };
    int line_no = 0;
    for (const auto& raw : split_lines(config_text)) {
        ++line_no;
        auto line = std::string(trim(raw.substr(0, raw.find('#'))));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("config line " + std::to_string(line_no) + ": expected key = value");
        const auto key = std::string(trim(std::string_view(line).substr(0, eq)));
        const auto value = std::string(trim(std::string_view(line).substr(eq + 1)));
        if (key.empty()) throw ParseError("config line " + std::to_string(line_no) + ": empty key");
        const auto flag = "--" + key;
        if (given(flag)) continue;
        merged.push_back(flag);
        merged.push_back(value);
    }
    return merged;
}

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err)
{
    std::vector<std::string> args;
    std::string config_path;
    for (std::size_t i = 0; i < raw_args.size(); ++i) {
        if (raw_args[i] == "--config") {
            if (i + 1 >= raw_args.size()) {
                err << "error: --config needs a file\n";
                return exit_usage;
            }
            config_path = raw_args[++i];
        } else if (raw_args[i].rfind("--config=", 0) == 0) {
            config_path = raw_args[i].substr(9);
        } else {
            args.push_back(raw_args[i]);
        }
    }
    if (!config_path.empty()) {
        try {
            args = merge_config(args, read_file(config_path));
        } catch (const std::exception& e) {
            err << "error: --config: " << e.what() << "\n";
            return exit_usage;
        }
    }

    CLI::App app{"Differential trail search for SIMON32 and SIMECK32 with nested Monte-Carlo search"};
    app.name("difftrail");
    app.require_subcommand(1);

    SearchFlags f;
    std::string out_path;
    int runs = 193;
    int jobs = 1;
    std::string iqr = "fences";
    std::optional<int> analyze_target;
    std::vector<std::string> files;
    std::string graph_source = "pool";
    std::string graph_format = "dot";

    auto* pool = app.add_subcommand("pool", "generate a differential pool and write it to a file");
    add_cipher_flags(pool, f);
    pool->add_option("--playouts", f.pool_playouts, "random playouts")->check(CLI::PositiveNumber);
    pool->add_option("--seed", f.pool_seed, "generator seed");
    pool->add_option("--out", out_path, "pool file")->required();

    auto* sample = app.add_subcommand("sample", "quota-sample a pool and report the variances");
    add_cipher_flags(sample, f);
    add_pool_flags(sample, f);
    sample->add_option("--percent", f.percent, "quota sample percentage");
    sample->add_option("--out", out_path, "optional CSV of sampled values and counts");

    auto* search = app.add_subcommand("search", "run one seeded search");
    add_search_flags(search, f);
    search->add_option("--seed", f.seed, "search seed");

    auto* experiment = app.add_subcommand("experiment", "run a seeded batch and write a CSV");
    add_search_flags(experiment, f);
    experiment->add_option("--seed", f.seed, "base seed; run i uses seed + i");
    experiment->add_option("--runs", runs, "number of runs")->check(CLI::PositiveNumber);
    experiment->add_option("--jobs", jobs, "concurrent runs")->check(CLI::PositiveNumber);
    experiment->add_option("--out", out_path, "CSV output")->required();

    auto* analyze = app.add_subcommand("analyze", "clean, summarize and compare experiment CSVs");
    analyze->add_option("files", files, "one or two experiment CSVs (baseline first)")->required()->expected(1, 2);
    analyze->add_option("--target-weight", analyze_target, "keep runs at this weight (default: from the CSV)");
    analyze->add_option("--iqr", iqr, "outlier rule")->check(CLI::IsMember({"fences", "middle50"}));
    analyze->add_option("--out", out_path, "optional summary CSV");

    auto* graph = app.add_subcommand("graph", "build and export the differential transition graph");
    add_cipher_flags(graph, f);
    add_pool_flags(graph, f);
    graph->add_option("--source", graph_source, "pool playouts or sample-driven playouts")
        ->check(CLI::IsMember({"pool", "sample"}));
    graph->add_option("--format", graph_format)->check(CLI::IsMember({"dot", "edge-csv"}));
    graph->add_option("--percent", f.percent, "quota sample percentage");
    graph->add_option("--seed", f.seed, "seed for sample-driven playouts");
    graph->add_option("--out", out_path, "graph file")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }

    try {
        if (pool->parsed()) return cmd_pool(f, out_path, out);
        if (sample->parsed()) return cmd_sample(f, out_path, out);
        if (search->parsed()) return cmd_search(f, out);
        if (experiment->parsed()) return cmd_experiment(f, runs, jobs, out_path, out);
        if (analyze->parsed()) return cmd_analyze(files, analyze_target, iqr, out_path, out, err);
        if (graph->parsed()) return cmd_graph(f, graph_source, graph_format, out_path, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_runtime;
    }
    return exit_usage;
}

int cli_main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return run_cli(args, std::cout, std::cerr);
}

} // namespace difftrail
