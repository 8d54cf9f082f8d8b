#pragma once

// Nested Monte-Carlo search for low-weight differential trails.
//
// A run repeatedly calls `nested`, which walks down the decision levels (one
// per attacked round): at each level it plays one random completion from the
// current position, keeps it if the full trail beats the best one so far, then
// commits the best trail's choice for that level and moves one level down.
// One playout is one iteration.

#include "difftrail/cipher.hpp"
#include "difftrail/pool.hpp"

#include <chrono>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace difftrail {

using Rng = std::mt19937_64;

enum class Technique { baseline, vista };
enum class SearchMode { one_way, two_way };
// How a draw that does not fit the AND mask is handled.
enum class Selection { reject, mask };

std::string_view to_string(Technique t) noexcept;
std::string_view to_string(SearchMode m) noexcept;
std::string_view to_string(Selection s) noexcept;
Technique parse_technique(std::string_view s);
SearchMode parse_mode(std::string_view s);
Selection parse_selection(std::string_view s);

struct Split {
    int backward_rounds = 0;
    int forward_rounds = 0;
    friend bool operator==(const Split&, const Split&) = default;
};

inline constexpr std::int64_t default_iteration_cap = 65427;

struct SearchConfig {
    CipherSpec spec;
    int rounds_to_attack = 10;
    int target_weight = 30;
    std::int64_t max_iterations = default_iteration_cap;
    Technique technique = Technique::baseline;
    SearchMode mode = SearchMode::one_way;
    Split split;
    // Start difference for one-way search, middle difference for two-way.
    DiffState initial;
    std::uint64_t seed = 1;
    Selection selection = Selection::reject;
    // Pool used to build the sampling context when none is supplied.
    std::int64_t pool_playouts = default_pool_playouts;
    std::uint64_t pool_seed = default_pool_seed;
    Percent percent;

    // SIMON32, 10 rounds, target 30, default start difference.
    static SearchConfig defaults(const CipherSpec& spec);
};

// Throws ParameterError on an inconsistent configuration.
void validate(const SearchConfig& config);

struct TimelinePoint {
    int weight = 0;
    double elapsed_s = 0;
};

struct TrailResult {
    // One c per attacked round, in decision order. Two-way: the backward
    // segment (from the middle outward) followed by the forward segment.
    std::vector<Word> best_path;
    int best_weight = 0;
    std::int64_t iterations = 0;
    double duration_s = 0;
    bool terminated_early = false;
    std::vector<TimelinePoint> weight_timeline;
};

// The values a search draws c from: every pool record (baseline) or the quota
// sample (VISTA). Read-only during a search.
class SamplingContext {
public:
    SamplingContext(std::vector<Word> values, Selection selection);
    static SamplingContext from_pool(const DifferentialPool& pool, Selection selection);
    static SamplingContext from_sample(const QuotaSample& sample, Selection selection);

    [[nodiscard]] std::span<const Word> values() const noexcept { return values_; }
    [[nodiscard]] Selection selection() const noexcept { return selection_; }
    [[nodiscard]] Word draw(Rng& rng) const;

private:
    std::vector<Word> values_;
    Selection selection_;
};

inline constexpr int max_rejection_draws = 4096;

// A valid AND output difference for inputs (a, b). a = b = 0 yields 0 without
// consuming randomness. Under Selection::reject, draws are repeated until one
// lies inside a|b (up to max_rejection_draws, then the last draw is masked);
// under Selection::mask the first draw is masked.
Word select_random(const SamplingContext& ctx, Word a, Word b, Rng& rng);

struct Playout {
    int weight = 0;
    std::vector<Word> path;
};

enum class Direction { forward, backward };

// Random completion of `remaining_rounds` rounds from `start`.
Playout random_path(const DiffState& start, int remaining_rounds, const SamplingContext& ctx,
                    Rng& rng, const CipherSpec& spec, Direction dir = Direction::forward);

// Weight of the round a backward step from `state` undoes.
int backward_round_weight(const DiffState& state, const CipherSpec& spec);

// 999, or rounds * word_bits + 1 when that could be reached.
int weight_sentinel(int rounds, int word_bits) noexcept;

// What the nested engine needs from a search problem.
template <typename P>
concept NestedProblem = requires(const P& p, const typename P::Position& pos, int level, Rng& rng,
                                 std::vector<Word>& out, Word move) {
    { p.levels() } -> std::convertible_to<int>;
    { p.root() } -> std::same_as<typename P::Position>;
    // Random moves for levels [level, levels()), appended to `out`; returns their weight.
    { p.playout(pos, level, rng, out) } -> std::convertible_to<int>;
    // Apply the move for `level`; returns the next position and the move's weight.
    { p.step(pos, level, move) } -> std::same_as<std::pair<typename P::Position, int>>;
};

struct EngineLimits {
    int target_weight = 0;
    std::int64_t max_iterations = 1;
    int sentinel = 999;
};

template <NestedProblem P>
class NestedSearch {
public:
    NestedSearch(const P& problem, EngineLimits limits, std::uint64_t seed)
        : problem_(problem), limits_(limits), rng_(seed)
    {
    }

    TrailResult run()
    {
        start_ = std::chrono::steady_clock::now();
        best_weight_ = limits_.sentinel;
        best_path_.clear();
        timeline_.clear();
        iterations_ = 0;
        // At least one playout, so a target at or above the sentinel still yields a trail.
        while (iterations_ == 0 || (iterations_ < limits_.max_iterations && best_weight_ > limits_.target_weight))
            nested();

        TrailResult r;
        r.best_path = best_path_;
        r.best_weight = best_weight_;
        r.iterations = iterations_;
        // Whole nanoseconds, so the 9-decimal CSV form reads back exactly.
        r.duration_s = std::round(elapsed() * 1e9) / 1e9;
        r.terminated_early = iterations_ >= limits_.max_iterations && best_weight_ > limits_.target_weight;
        r.weight_timeline = timeline_;
        return r;
    }

private:
    void nested()
    {
        auto pos = problem_.root();
        int prefix = 0;
        std::vector<Word> tail;
        const int levels = problem_.levels();
        for (int level = 0; level < levels; ++level) {
            if (iterations_ >= limits_.max_iterations) return;
            if (iterations_ > 0 && best_weight_ <= limits_.target_weight) return;
            tail.clear();
            const int w = problem_.playout(pos, level, rng_, tail);
            ++iterations_;
            if (prefix + w < best_weight_) {
                best_weight_ = prefix + w;
                best_path_.resize(static_cast<std::size_t>(level));
                best_path_.insert(best_path_.end(), tail.begin(), tail.end());
                timeline_.push_back({best_weight_, elapsed()});
            }
            if (best_weight_ <= limits_.target_weight) return;
            auto [next, step_w] = problem_.step(pos, level, best_path_[static_cast<std::size_t>(level)]);
            pos = next;
            prefix += step_w;
        }
    }

    double elapsed() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

    const P& problem_;
    EngineLimits limits_;
    Rng rng_;
    std::chrono::steady_clock::time_point start_;
    int best_weight_ = 0;
    std::vector<Word> best_path_;
    std::vector<TimelinePoint> timeline_;
    std::int64_t iterations_ = 0;
};

// Differential trail search over backward_rounds + forward_rounds levels.
// Levels below backward_rounds step backward from the middle difference, the
// rest step forward from it. One-way search is the split (0, rounds).
class TrailProblem {
public:
    struct Position {
        DiffState back; // front of the backward segment
        DiffState fwd;  // front of the forward segment
    };

    TrailProblem(const CipherSpec& spec, Split split, const DiffState& middle, const SamplingContext& ctx);

    [[nodiscard]] int levels() const noexcept { return split_.backward_rounds + split_.forward_rounds; }
    [[nodiscard]] Position root() const noexcept { return root_; }
    int playout(const Position& pos, int level, Rng& rng, std::vector<Word>& out) const;
    [[nodiscard]] std::pair<Position, int> step(const Position& pos, int level, Word c) const;

private:
    CipherSpec spec_;
    Split split_;
    Position root_;
    const SamplingContext& ctx_;
};

static_assert(NestedProblem<TrailProblem>);

// Builds the context for config.technique from a pool generated per the
// config's pool fields, starting at config.initial and covering the attacked rounds.
SamplingContext make_context(const SearchConfig& config);
SamplingContext make_context(const SearchConfig& config, const DifferentialPool& pool);

TrailResult run_search(const SearchConfig& config);
TrailResult run_search(const SearchConfig& config, const SamplingContext& ctx);
TrailResult two_way_search(const SearchConfig& config, const SamplingContext& ctx);

// Effective split: (0, rounds) for one-way search.
Split effective_split(const SearchConfig& config);

struct Replay {
    int weight = 0;
    DiffState first; // difference entering the trail
    DiffState last;  // difference leaving the trail
};

// Replays `path` from the configured start; throws ContractError on an
// impossible transition or a length mismatch.
Replay replay_trail(const SearchConfig& config, std::span<const Word> path);

// Upper quartile of iteration counts over `runs` baseline searches (seeds
// base_seed, base_seed + 1, ...), each capped at `hard_cap`; rounded up.
std::int64_t calibrate_iteration_cap(const SearchConfig& config, const SamplingContext& baseline_ctx,
                                     int runs = 50, std::uint64_t base_seed = 1,
                                     std::int64_t hard_cap = default_iteration_cap);

} // namespace difftrail
