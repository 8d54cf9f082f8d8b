#include "optimal_trail.hpp"

#include <bit>
#include <stdexcept>

namespace oracle {

namespace {

using difftrail::Word;

struct Bnb {
    int n, r1, r2, rl;
    Word full;
    std::vector<int> bounds; // lower bounds for k remaining rounds
    int limit = 0;

    Word rot(Word x, int r) const { return r == 0 ? x : ((x << r) | (x >> (n - r))) & full; }
    Word mask(Word l) const { return rot(l, r1) | rot(l, r2); }

    // Is there a k-round continuation from (left, right) with total <= limit?
    bool dfs(Word left, Word right, int k, int acc) const
    {
        if (k == 0) return true;
        const Word m = mask(left);
        const int w = std::popcount(m);
        const int rest = k - 1 < static_cast<int>(bounds.size()) ? bounds[static_cast<std::size_t>(k - 1)] : 0;
        if (acc + w + rest > limit) return false;
        if (k == 1) return true;
        const Word base = right ^ rot(left, rl);
        Word c = 0;
        do {
            if (dfs(base ^ c, left, k - 1, acc + w)) return true;
            c = (c - m) & m; // next subset of m
        } while (c != 0);
        return false;
    }
};

Bnb make(const difftrail::CipherSpec& spec)
{
    if (spec.word_bits > 16) throw std::invalid_argument("oracle limited to 16-bit words");
    return {spec.word_bits, spec.and_rot_1, spec.and_rot_2, spec.lin_rot, spec.word_mask(), {}, 0};
}

} // namespace

std::vector<int> best_weight_bounds(const difftrail::CipherSpec& spec, int max_rounds)
{
    Bnb b = make(spec);
    b.bounds = {0};
    for (int r = 1; r <= max_rounds; ++r) {
        for (b.limit = b.bounds.back();; ++b.limit) {
            bool ok = r == 1;
            // Every nonzero word has a rotation with bit 0 set, and the model is
            // rotation invariant, so odd words cover all classes.
            for (Word x = 1; x <= b.full && !ok; x += 2) { // left word zero, right word x
                if (b.dfs(0, x, r, 0)) ok = true;
            }
            for (Word x = 1; x <= b.full && !ok; x += 2) {
                const int w = std::popcount(b.mask(x));
                if (w + b.bounds[static_cast<std::size_t>(r - 1)] > b.limit) continue;
                for (Word y = 0; y <= b.full && !ok; ++y)
                    if (b.dfs(x, y, r, 0)) ok = true;
            }
            if (ok) break;
        }
        b.bounds.push_back(b.limit);
    }
    return b.bounds;
}

int optimal_forward_weight(const difftrail::CipherSpec& spec, const difftrail::DiffState& start, int rounds)
{
    Bnb b = make(spec);
    b.bounds = best_weight_bounds(spec, rounds - 1 < 0 ? 0 : rounds - 1);
    for (b.limit = 0;; ++b.limit)
        if (b.dfs(start.left, start.right, rounds, 0)) return b.limit;
}

int optimal_backward_weight(const difftrail::CipherSpec& spec, const difftrail::DiffState& end, int rounds)
{
    // Undoing a round from (L', R') is a forward round from (R', L') with the
    // halves swapped back afterwards; weights agree round by round.
    return optimal_forward_weight(spec, {end.right, end.left, 0}, rounds);
}

} // namespace oracle
