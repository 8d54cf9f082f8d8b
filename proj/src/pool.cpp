#include "difftrail/pool.hpp"

#include "difftrail/error.hpp"
#include "difftrail/io.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <string>

namespace difftrail {

std::vector<Word> DifferentialPool::c_values() const
{
    std::vector<Word> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(r.c);
    return out;
}

DifferentialPool make_pool(std::vector<TransitionRecord> records, const CipherSpec& spec,
                           PoolProvenance provenance)
{
    DifferentialPool pool;
    pool.spec = spec;
    pool.provenance = provenance;
    for (const auto& r : records) {
        if ((r.c & ~(r.a | r.b)) != 0)
            throw ContractError("record c has bits outside a|b");
        if (r.weight != hamming_weight(r.a | r.b))
            throw ContractError("record weight differs from hw(a|b)");
        ++pool.counts[r.c];
    }
    pool.records = std::move(records);
    return pool;
}

DifferentialPool build_pool(const CipherSpec& spec, int rounds, std::int64_t playouts,
                            const DiffState& initial, std::uint64_t seed)
{
    if (playouts < 1) throw ParameterError("playouts must be >= 1");
    if (rounds < 1) throw ParameterError("rounds must be >= 1");
    if (initial.is_zero()) throw ParameterError("zero initial difference gives a degenerate pool");

    std::mt19937_64 rng(seed);
    const Word word_mask = spec.word_mask();
    std::vector<TransitionRecord> records;
    records.reserve(static_cast<std::size_t>(playouts) * static_cast<std::size_t>(rounds));
    for (std::int64_t p = 0; p < playouts; ++p) {
        DiffState s{initial.left, initial.right, 0};
        for (int r = 0; r < rounds; ++r) {
            const auto in = and_diff_inputs(s, spec);
            const Word active = in.a | in.b;
            const Word c = static_cast<Word>(rng()) & word_mask & active;
            records.push_back({in.a, in.b, c, hamming_weight(active)});
            s = round_forward_diff(s, c, spec);
        }
    }
    return make_pool(std::move(records), spec, {playouts, rounds, seed});
}

Percent Percent::from_millionths(std::int64_t m)
{
    if (m <= 0 || m > 100 * scale) throw ParameterError("percent must be in (0, 100]");
    Percent p;
    p.millionths_ = m;
    return p;
}

Percent Percent::parse(std::string_view text)
{
    const std::string original(text);
    text = trim(text);
    const auto dot = text.find('.');
    const auto whole_part = text.substr(0, dot);
    std::string_view frac_part = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
    if ((whole_part.empty() && frac_part.empty()) || frac_part.size() > 6)
        throw ParameterError("bad percent '" + original + "' (at most 6 decimals)");
    std::int64_t whole = 0;
    if (!whole_part.empty()) {
        const auto w = parse_uint(whole_part);
        if (!w || *w > 100) throw ParameterError("bad percent '" + original + "'");
        whole = static_cast<std::int64_t>(*w);
    }
    std::int64_t frac = 0;
    if (!frac_part.empty()) {
        const auto f = parse_uint(frac_part);
        if (!f) throw ParameterError("bad percent '" + original + "'");
        frac = static_cast<std::int64_t>(*f);
        for (auto i = frac_part.size(); i < 6; ++i) frac *= 10;
    }
    return from_millionths(whole * scale + frac);
}

std::int64_t Percent::quota(std::int64_t n) const noexcept
{
    // ceil(m * n / D) split so that no intermediate product overflows.
    constexpr std::int64_t den = 100 * scale;
    const std::int64_t q = (n / den) * millionths_ + ((n % den) * millionths_ + den - 1) / den;
    return q < 1 ? 1 : q;
}

QuotaSample define_sample(const DifferentialPool& pool, Percent percent)
{
    if (pool.records.empty() || pool.counts.empty()) throw ParameterError("cannot sample an empty pool");
    QuotaSample s;
    s.percent = percent;
    for (const auto& [c, n] : pool.counts) {
        const auto k = percent.quota(n);
        s.source_counts[c] = k;
        s.values.insert(s.values.end(), static_cast<std::size_t>(k), c);
    }
    return s;
}

namespace {

double mean(std::span<const double> v)
{
    double sum = 0;
    for (double x : v) sum += x;
    return sum / static_cast<double>(v.size());
}

double squared_deviations(std::span<const double> v)
{
    const double m = mean(v);
    double ss = 0;
    for (double x : v) ss += (x - m) * (x - m);
    return ss;
}

} // namespace

double population_variance(std::span<const double> values)
{
    if (values.empty()) throw ParameterError("population variance of an empty list");
    return squared_deviations(values) / static_cast<double>(values.size());
}

double sample_variance(std::span<const double> values)
{
    if (values.size() < 2) throw ParameterError("sample variance needs at least 2 values");
    return squared_deviations(values) / static_cast<double>(values.size() - 1);
}

std::vector<double> as_numbers(std::span<const Word> values)
{
    return {values.begin(), values.end()};
}

double variance_reduction(const DifferentialPool& pool, const QuotaSample& sample)
{
    if (pool.records.empty() || sample.values.empty())
        throw ParameterError("variance reduction needs a nonempty pool and sample");
    const auto pop = as_numbers(pool.c_values());
    // A one-element sample has no spread; treat it as zero rather than undefined.
    const double s2 = sample.values.size() < 2 ? 0.0 : sample_variance(as_numbers(sample.values));
    return population_variance(pop) - s2;
}

void persist_pool(const DifferentialPool& pool, const std::filesystem::path& path)
{
    const int n = pool.spec.word_bits;
    std::ostringstream out;
    out << "#spec=" << to_string(pool.spec.variant) << ",n=" << n
        << ",rounds=" << pool.provenance.rounds << ",playouts=" << pool.provenance.playouts
        << ",seed=" << pool.provenance.seed << '\n';
    for (const auto& r : pool.records)
        out << hex_word(r.a, n) << ',' << hex_word(r.b, n) << ',' << hex_word(r.c, n) << ','
            << r.weight << '\n';
    write_file_atomic(path, out.str());
}

DifferentialPool load_pool(const std::filesystem::path& path)
{
    const auto lines = split_lines(read_file(path));
    const std::string where = path.string() + ":";
    if (lines.empty() || lines[0].rfind("#spec=", 0) != 0)
        throw ParseError(where + "1: missing '#spec=' header");

    std::map<std::string, std::string> header;
    for (const auto& field : split(std::string_view(lines[0]).substr(1), ',')) {
        const auto eq = field.find('=');
        if (eq == std::string::npos) throw ParseError(where + "1: bad header field '" + field + "'");
        header[field.substr(0, eq)] = field.substr(eq + 1);
    }
    for (const char* key : {"spec", "n", "rounds", "playouts", "seed"})
        if (!header.count(key)) throw ParseError(where + "1: header lacks '" + key + "'");

    CipherSpec spec;
    PoolProvenance prov;
    try {
        const auto n = parse_int(header["n"]);
        if (!n) throw ParameterError("bad n");
        const int bits = static_cast<int>(*n);
        spec = parse_variant(header["spec"]) == Variant::simon ? CipherSpec::simon(bits)
                                                              : CipherSpec::simeck(bits);
        const auto rounds = parse_int(header["rounds"]);
        const auto playouts = parse_int(header["playouts"]);
        const auto seed = parse_uint(header["seed"]);
        if (!rounds || !playouts || !seed) throw ParameterError("bad provenance field");
        prov = {*playouts, static_cast<int>(*rounds), *seed};
    } catch (const ParameterError& e) {
        throw ParseError(where + "1: " + e.what());
    }

    std::vector<TransitionRecord> records;
    records.reserve(lines.size() - 1);
    const Word mask = spec.word_mask();
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::string at = where + std::to_string(i + 1) + ": ";
        const auto f = split(lines[i], ',');
        if (f.size() != 4) throw ParseError(at + "expected 4 fields, got " + std::to_string(f.size()));
        const auto a = parse_hex_word(trim(f[0]));
        const auto b = parse_hex_word(trim(f[1]));
        const auto c = parse_hex_word(trim(f[2]));
        const auto w = parse_int(trim(f[3]));
        if (!a || !b || !c) throw ParseError(at + "bad hex field");
        if (!w) throw ParseError(at + "bad weight '" + f[3] + "'");
        if ((*a & ~mask) || (*b & ~mask) || (*c & ~mask)) throw ParseError(at + "word exceeds n bits");
        TransitionRecord r{*a, *b, *c, static_cast<int>(*w)};
        if ((r.c & ~(r.a | r.b)) != 0) throw ParseError(at + "c has bits outside a|b");
        if (r.weight != hamming_weight(r.a | r.b)) throw ParseError(at + "weight is not hw(a|b)");
        records.push_back(r);
    }
    if (records.empty()) throw ParseError(where + " no records after the header");
    return make_pool(std::move(records), spec, prov);
}

} // namespace difftrail
