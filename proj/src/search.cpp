#include "difftrail/search.hpp"

#include "difftrail/error.hpp"
#include "difftrail/stats.hpp"

#include <cmath>
#include <string>

namespace difftrail {

std::string_view to_string(Technique t) noexcept { return t == Technique::baseline ? "baseline" : "vista"; }
std::string_view to_string(SearchMode m) noexcept { return m == SearchMode::one_way ? "one-way" : "two-way"; }
std::string_view to_string(Selection s) noexcept { return s == Selection::reject ? "reject" : "mask"; }

Technique parse_technique(std::string_view s)
{
    if (s == "baseline") return Technique::baseline;
    if (s == "vista") return Technique::vista;
    throw ParameterError("unknown technique '" + std::string(s) + "'");
}

SearchMode parse_mode(std::string_view s)
{
    if (s == "one-way") return SearchMode::one_way;
    if (s == "two-way") return SearchMode::two_way;
    throw ParameterError("unknown mode '" + std::string(s) + "'");
}

Selection parse_selection(std::string_view s)
{
    if (s == "reject") return Selection::reject;
    if (s == "mask") return Selection::mask;
    throw ParameterError("unknown selection '" + std::string(s) + "'");
}

SearchConfig SearchConfig::defaults(const CipherSpec& spec)
{
    SearchConfig c;
    c.spec = spec;
    c.initial = default_initial_difference(spec);
    return c;
}

void validate(const SearchConfig& c)
{
    if (c.rounds_to_attack < 1 || c.rounds_to_attack > c.spec.total_rounds)
        throw ParameterError("rounds must be in [1, " + std::to_string(c.spec.total_rounds) + "]");
    if (c.target_weight < 0) throw ParameterError("target weight must be >= 0");
    if (c.max_iterations < 1) throw ParameterError("max iterations must be >= 1");
    if (c.pool_playouts < 1) throw ParameterError("pool playouts must be >= 1");
    const Word mask = c.spec.word_mask();
    if ((c.initial.left & ~mask) || (c.initial.right & ~mask))
        throw ParameterError("initial difference exceeds the word size");
    if (c.initial.is_zero()) throw ParameterError("zero initial difference is degenerate");
    if (c.mode == SearchMode::two_way) {
        if (c.split.backward_rounds < 0 || c.split.forward_rounds < 0 ||
            c.split.backward_rounds + c.split.forward_rounds != c.rounds_to_attack)
            throw ParameterError("split " + std::to_string(c.split.backward_rounds) + "," +
                                 std::to_string(c.split.forward_rounds) + " does not sum to " +
                                 std::to_string(c.rounds_to_attack) + " rounds");
    }
}

SamplingContext::SamplingContext(std::vector<Word> values, Selection selection)
    : values_(std::move(values)), selection_(selection)
{
    if (values_.empty()) throw ParameterError("empty sampling context");
}

SamplingContext SamplingContext::from_pool(const DifferentialPool& pool, Selection selection)
{
    return SamplingContext(pool.c_values(), selection);
}

SamplingContext SamplingContext::from_sample(const QuotaSample& sample, Selection selection)
{
    return SamplingContext(sample.values, selection);
}

Word SamplingContext::draw(Rng& rng) const
{
    std::uniform_int_distribution<std::size_t> index(0, values_.size() - 1);
    return values_[index(rng)];
}

Word select_random(const SamplingContext& ctx, Word a, Word b, Rng& rng)
{
    const Word active = a | b;
    if (active == 0) return 0;
    Word d = ctx.draw(rng);
    if (ctx.selection() == Selection::reject)
        for (int tries = 1; (d & ~active) != 0 && tries < max_rejection_draws; ++tries) d = ctx.draw(rng);
    return d & active;
}

int backward_round_weight(const DiffState& state, const CipherSpec& spec)
{
    return round_weight(DiffState{state.right, 0, 0}, spec);
}

Playout random_path(const DiffState& start, int remaining_rounds, const SamplingContext& ctx, Rng& rng,
                    const CipherSpec& spec, Direction dir)
{
    Playout p;
    if (remaining_rounds <= 0) return p;
    p.path.reserve(static_cast<std::size_t>(remaining_rounds));
    DiffState s = start;
    // Backward steps count rounds down; give them room so the index stays valid.
    if (dir == Direction::backward && s.round_index < remaining_rounds) s.round_index = remaining_rounds;
    for (int i = 0; i < remaining_rounds; ++i) {
        const Word left = dir == Direction::forward ? s.left : s.right;
        const auto in = and_diff_inputs(DiffState{left, 0, 0}, spec);
        const Word c = select_random(ctx, in.a, in.b, rng);
        p.weight += hamming_weight(in.a | in.b);
        p.path.push_back(c);
        s = dir == Direction::forward ? round_forward_diff(s, c, spec) : round_backward_diff(s, c, spec);
    }
    return p;
}

int weight_sentinel(int rounds, int word_bits) noexcept
{
    const long long max_weight = static_cast<long long>(rounds) * word_bits;
    return max_weight < 999 ? 999 : static_cast<int>(max_weight + 1);
}

TrailProblem::TrailProblem(const CipherSpec& spec, Split split, const DiffState& middle,
                           const SamplingContext& ctx)
    : spec_(spec), split_(split), ctx_(ctx)
{
    DiffState m = middle;
    m.round_index = split.backward_rounds;
    root_ = {m, m};
}

int TrailProblem::playout(const Position& pos, int level, Rng& rng, std::vector<Word>& out) const
{
    int w = 0;
    const int b = split_.backward_rounds;
    if (level < b) {
        auto back = random_path(pos.back, b - level, ctx_, rng, spec_, Direction::backward);
        w += back.weight;
        out.insert(out.end(), back.path.begin(), back.path.end());
    }
    const int fwd_left = level < b ? split_.forward_rounds : levels() - level;
    auto fwd = random_path(pos.fwd, fwd_left, ctx_, rng, spec_, Direction::forward);
    w += fwd.weight;
    out.insert(out.end(), fwd.path.begin(), fwd.path.end());
    return w;
}

std::pair<TrailProblem::Position, int> TrailProblem::step(const Position& pos, int level, Word c) const
{
    Position next = pos;
    if (level < split_.backward_rounds) {
        const int w = backward_round_weight(pos.back, spec_);
        next.back = round_backward_diff(pos.back, c, spec_);
        return {next, w};
    }
    const int w = round_weight(pos.fwd, spec_);
    next.fwd = round_forward_diff(pos.fwd, c, spec_);
    return {next, w};
}

Split effective_split(const SearchConfig& config)
{
    return config.mode == SearchMode::two_way ? config.split : Split{0, config.rounds_to_attack};
}

SamplingContext make_context(const SearchConfig& config, const DifferentialPool& pool)
{
    if (config.technique == Technique::baseline) return SamplingContext::from_pool(pool, config.selection);
    return SamplingContext::from_sample(define_sample(pool, config.percent), config.selection);
}

SamplingContext make_context(const SearchConfig& config)
{
    validate(config);
    const auto pool = build_pool(config.spec, config.rounds_to_attack, config.pool_playouts,
                                 config.initial, config.pool_seed);
    return make_context(config, pool);
}

Replay replay_trail(const SearchConfig& config, std::span<const Word> path)
{
    const Split split = effective_split(config);
    if (path.size() != static_cast<std::size_t>(split.backward_rounds + split.forward_rounds))
        throw ContractError("trail length " + std::to_string(path.size()) + " does not match the attacked rounds");
    Replay r;
    DiffState back = config.initial;
    back.round_index = split.backward_rounds;
    DiffState fwd = back;
    std::size_t i = 0;
    for (; i < static_cast<std::size_t>(split.backward_rounds); ++i) {
        r.weight += backward_round_weight(back, config.spec);
        back = round_backward_diff(back, path[i], config.spec);
    }
    for (; i < path.size(); ++i) {
        r.weight += round_weight(fwd, config.spec);
        fwd = round_forward_diff(fwd, path[i], config.spec);
    }
    r.first = back;
    r.last = fwd;
    return r;
}

namespace {

TrailResult execute(const SearchConfig& config, const SamplingContext& ctx)
{
    validate(config);
    const Split split = effective_split(config);
    TrailProblem problem(config.spec, split, config.initial, ctx);
    EngineLimits limits{config.target_weight, config.max_iterations,
                        weight_sentinel(config.rounds_to_attack, config.spec.word_bits)};
    NestedSearch<TrailProblem> engine(problem, limits, config.seed);
    auto result = engine.run();

    // Self-consistency: the reported weight must be the replayed weight.
    const auto replay = replay_trail(config, result.best_path);
    if (replay.weight != result.best_weight)
        throw ContractError("search reported weight " + std::to_string(result.best_weight) +
                            " but the trail replays to " + std::to_string(replay.weight));
    return result;
}

} // namespace

TrailResult two_way_search(const SearchConfig& config, const SamplingContext& ctx)
{
    if (config.mode != SearchMode::two_way) throw ParameterError("two-way search needs mode two-way");
    return execute(config, ctx);
}

TrailResult run_search(const SearchConfig& config, const SamplingContext& ctx)
{
    return execute(config, ctx);
}

TrailResult run_search(const SearchConfig& config)
{
    const auto ctx = make_context(config);
    return run_search(config, ctx);
}

std::int64_t calibrate_iteration_cap(const SearchConfig& config, const SamplingContext& baseline_ctx, int runs,
                                     std::uint64_t base_seed, std::int64_t hard_cap)
{
    if (runs < 2) throw ParameterError("calibration needs at least 2 runs");
    SearchConfig c = config;
    c.max_iterations = hard_cap;
    std::vector<double> iterations;
    for (int i = 0; i < runs; ++i) {
        c.seed = base_seed + static_cast<std::uint64_t>(i);
        iterations.push_back(static_cast<double>(run_search(c, baseline_ctx).iterations));
    }
    return static_cast<std::int64_t>(std::ceil(quantile(iterations, 0.75)));
}

} // namespace difftrail
