#include "difftrail/cipher.hpp"

#include "difftrail/error.hpp"

#include <bit>
#include <string>

namespace difftrail {

namespace {

Word mask_for(int n) noexcept
{
    return n >= 32 ? ~Word{0} : (Word{1} << n) - 1;
}

// Unchecked rotation used on hot paths; r in [0, n).
Word rot(Word x, int r, int n) noexcept
{
    if (r == 0) return x;
    return ((x << r) | (x >> (n - r))) & mask_for(n);
}

} // namespace

Word CipherSpec::word_mask() const noexcept { return mask_for(word_bits); }

std::string CipherSpec::name() const
{
    std::string s{to_string(variant)};
    s += std::to_string(block_bits());
    // SIMON has two key sizes for most block sizes; the 32-bit block has one.
    if (variant == Variant::simon && block_bits() != 32)
        s += "_" + std::to_string(key_words * word_bits);
    return s;
}

CipherSpec CipherSpec::simon(int word_bits, int key_words)
{
    int rounds = 0;
    if (word_bits == 16 && key_words == 4) rounds = 32;
    else if (word_bits == 24 && key_words == 3) rounds = 36;
    else if (word_bits == 24 && key_words == 4) rounds = 36;
    else if (word_bits == 32 && key_words == 3) rounds = 42;
    else if (word_bits == 32 && key_words == 4) rounds = 44;
    else
        throw ParameterError("unsupported SIMON parameters: n=" + std::to_string(word_bits) +
                             " m=" + std::to_string(key_words));
    return CipherSpec{Variant::simon, word_bits, key_words, rounds, 1, 8, 2};
}

CipherSpec CipherSpec::simeck(int word_bits)
{
    int rounds = 0;
    switch (word_bits) {
    case 16: rounds = 32; break;
    case 24: rounds = 36; break;
    case 32: rounds = 44; break;
    default:
        throw ParameterError("unsupported SIMECK word size: " + std::to_string(word_bits));
    }
    return CipherSpec{Variant::simeck, word_bits, 4, rounds, 0, 5, 1};
}

std::string_view to_string(Variant v) noexcept
{
    return v == Variant::simon ? "simon" : "simeck";
}

Variant parse_variant(std::string_view name)
{
    if (name == "simon") return Variant::simon;
    if (name == "simeck") return Variant::simeck;
    throw ParameterError("unknown cipher variant '" + std::string(name) + "'");
}

CipherSpec cipher_from_name(std::string_view name)
{
    if (name == "simon32") return CipherSpec::simon(16, 4);
    if (name == "simon48_72") return CipherSpec::simon(24, 3);
    if (name == "simon48_96") return CipherSpec::simon(24, 4);
    if (name == "simon64_96") return CipherSpec::simon(32, 3);
    if (name == "simon64_128") return CipherSpec::simon(32, 4);
    if (name == "simeck32") return CipherSpec::simeck(16);
    if (name == "simeck48") return CipherSpec::simeck(24);
    if (name == "simeck64") return CipherSpec::simeck(32);
    throw ParameterError("unknown cipher '" + std::string(name) + "'");
}

Word rotl(Word x, int r, int n)
{
    if (n < 1 || n > 32) throw ParameterError("word size out of range: " + std::to_string(n));
    if (r < 0 || r >= n) throw ParameterError("rotation out of range: " + std::to_string(r));
    if ((x & ~mask_for(n)) != 0) throw ParameterError("word exceeds " + std::to_string(n) + " bits");
    return rot(x, r, n);
}

Word rotr(Word x, int r, int n)
{
    if (r < 0 || r >= n) throw ParameterError("rotation out of range: " + std::to_string(r));
    return rotl(x, r == 0 ? 0 : n - r, n);
}

int hamming_weight(Word x) noexcept { return std::popcount(x); }

AndInputs and_diff_inputs(const DiffState& state, const CipherSpec& spec)
{
    const int n = spec.word_bits;
    return {rot(state.left, spec.and_rot_1, n), rot(state.left, spec.and_rot_2, n)};
}

std::optional<int> xdp_and_weight(Word a, Word b, Word c) noexcept
{
    const Word active = a | b;
    if ((c & ~active) != 0) return std::nullopt;
    return std::popcount(active);
}

Fraction xdp_and_bruteforce(Word a, Word b, Word c, int n)
{
    if (n < 1) throw ParameterError("brute force needs n >= 1");
    if (n > 8) throw ResourceError("brute force limited to n <= 8 (2^(2n) pairs)");
    const Word m = mask_for(n);
    a &= m;
    b &= m;
    c &= m;
    std::uint64_t hits = 0;
    for (Word p = 0; p <= m; ++p)
        for (Word q = 0; q <= m; ++q)
            if (((p & q) ^ ((p ^ a) & (q ^ b))) == c) ++hits;
    return {hits, std::uint64_t{1} << (2 * n)};
}

int round_weight(const DiffState& state, const CipherSpec& spec)
{
    const auto in = and_diff_inputs(state, spec);
    return std::popcount(in.a | in.b);
}

DiffState round_forward_diff(const DiffState& state, Word c, const CipherSpec& spec)
{
    const auto in = and_diff_inputs(state, spec);
    if (!xdp_and_weight(in.a, in.b, c))
        throw ContractError("AND output difference has bits outside a|b");
    const int n = spec.word_bits;
    return {state.right ^ c ^ rot(state.left, spec.lin_rot, n), state.left, state.round_index + 1};
}

DiffState round_backward_diff(const DiffState& state, Word c, const CipherSpec& spec)
{
    // The left word entering the round equals the right word leaving it.
    const Word prev_left = state.right;
    const auto in = and_diff_inputs(DiffState{prev_left, 0, 0}, spec);
    if (!xdp_and_weight(in.a, in.b, c))
        throw ContractError("AND output difference has bits outside a|b");
    if (state.round_index < 1) throw ContractError("cannot step back before round 0");
    const int n = spec.word_bits;
    return {prev_left, state.left ^ c ^ rot(prev_left, spec.lin_rot, n), state.round_index - 1};
}

DiffState default_initial_difference(const CipherSpec& spec)
{
    return {1, rot(1, spec.lin_rot, spec.word_bits), 0};
}

} // namespace difftrail
