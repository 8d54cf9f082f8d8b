#pragma once

// Population of observed AND output differences and its quota sample.

#include "difftrail/cipher.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string_view>
#include <vector>

namespace difftrail {

struct TransitionRecord {
    Word a = 0;
    Word b = 0;
    Word c = 0;
    int weight = 0;
    friend bool operator==(const TransitionRecord&, const TransitionRecord&) = default;
};

struct PoolProvenance {
    std::int64_t playouts = 0;
    int rounds = 0;
    std::uint64_t seed = 0;
    friend bool operator==(const PoolProvenance&, const PoolProvenance&) = default;
};

// Records are kept in generation order: playout p occupies
// records[p * rounds, (p + 1) * rounds).
struct DifferentialPool {
    std::vector<TransitionRecord> records;
    std::map<Word, std::int64_t> counts;
    CipherSpec spec;
    PoolProvenance provenance;

    [[nodiscard]] std::vector<Word> c_values() const;
    friend bool operator==(const DifferentialPool&, const DifferentialPool&) = default;
};

inline constexpr std::int64_t default_pool_playouts = 10000;
inline constexpr std::uint64_t default_pool_seed = 42;

// Records every transition met by `playouts` unguided forward walks of `rounds`
// rounds from `initial`; each c is uniform over the subsets of a|b.
DifferentialPool build_pool(const CipherSpec& spec, int rounds, std::int64_t playouts,
                            const DiffState& initial, std::uint64_t seed);

// Rebuilds `counts` from `records` and checks the record invariants.
DifferentialPool make_pool(std::vector<TransitionRecord> records, const CipherSpec& spec,
                           PoolProvenance provenance);

// A percentage held exactly as millionths of a percent, so the quota ceiling
// is computed in integer arithmetic.
class Percent {
public:
    static constexpr std::int64_t scale = 1'000'000;

    constexpr Percent() = default;
    static Percent from_millionths(std::int64_t m);
    static Percent parse(std::string_view text); // "5", "2.5", "0.125"
    static Percent whole(int p) { return from_millionths(std::int64_t{p} * scale); }

    [[nodiscard]] constexpr std::int64_t millionths() const noexcept { return millionths_; }
    [[nodiscard]] double value() const noexcept { return static_cast<double>(millionths_) / scale; }
    // max(1, ceil(percent / 100 * n)).
    [[nodiscard]] std::int64_t quota(std::int64_t n) const noexcept;

    friend bool operator==(Percent, Percent) = default;

private:
    std::int64_t millionths_ = 5 * scale;
};

struct QuotaSample {
    std::vector<Word> values; // grouped by ascending c
    std::map<Word, std::int64_t> source_counts;
    Percent percent;
};

QuotaSample define_sample(const DifferentialPool& pool, Percent percent = Percent{});

double population_variance(std::span<const double> values);
double sample_variance(std::span<const double> values);
std::vector<double> as_numbers(std::span<const Word> values);

// population_variance(pool c values) - sample_variance(sample values).
double variance_reduction(const DifferentialPool& pool, const QuotaSample& sample);

void persist_pool(const DifferentialPool& pool, const std::filesystem::path& path);
DifferentialPool load_pool(const std::filesystem::path& path);

} // namespace difftrail
