#include "difftrail/block_cipher.hpp"

#include "difftrail/error.hpp"

#include <array>
#include <random>
#include <string>

namespace difftrail {

namespace {

constexpr std::array<std::array<std::uint8_t, 62>, 5> simon_z{{
    {1,1,1,1,1,0,1,0,0,0,1,0,0,1,0,1,0,1,1,0,0,0,0,1,1,1,0,0,1,1,0,1,1,1,1,1,0,1,0,0,0,1,0,0,1,0,1,0,1,1,0,0,0,0,1,1,1,0,0,1,1,0},
    {1,0,0,0,1,1,1,0,1,1,1,1,1,0,0,1,0,0,1,1,0,0,0,0,1,0,1,1,0,1,0,1,0,0,0,1,1,1,0,1,1,1,1,1,0,0,1,0,0,1,1,0,0,0,0,1,0,1,1,0,1,0},
    {1,0,1,0,1,1,1,1,0,1,1,1,0,0,0,0,0,0,1,1,0,1,0,0,1,0,0,1,1,0,0,0,1,0,1,0,0,0,0,1,0,0,0,1,1,1,1,1,1,0,0,1,0,1,1,0,1,1,0,0,1,1},
    {1,1,0,1,1,0,1,1,1,0,1,0,1,1,0,0,0,1,1,0,0,1,0,1,1,1,1,0,0,0,0,0,0,1,0,0,1,0,0,0,1,0,1,0,0,1,1,1,0,0,1,1,0,1,0,0,0,0,1,1,1,1},
    {1,1,0,1,0,0,0,1,1,1,1,0,0,1,1,0,1,0,1,1,0,1,1,0,0,0,1,0,0,0,0,0,0,1,0,1,1,1,0,0,0,0,1,1,0,0,1,0,1,0,0,1,0,0,1,1,1,0,1,1,1,1},
}};

int simon_z_index(const CipherSpec& spec)
{
    switch (spec.word_bits) {
    case 16: return 0;
    case 24: return spec.key_words == 3 ? 0 : 1;
    default: return spec.key_words == 3 ? 2 : 3;
    }
}

// SIMECK round constants come from an LFSR: x^5 + x^2 + 1 for the 32- and
// 48-bit blocks, x^6 + x + 1 for the 64-bit block, all-ones initial state.
std::vector<std::uint8_t> simeck_z(const CipherSpec& spec)
{
    const bool wide = spec.word_bits == 32;
    const int degree = wide ? 6 : 5;
    const int tap = wide ? 1 : 2;
    std::vector<std::uint8_t> s(static_cast<std::size_t>(degree), 1);
    while (static_cast<int>(s.size()) < spec.total_rounds)
        s.push_back(s[s.size() - static_cast<std::size_t>(degree - tap)] ^
                    s[s.size() - static_cast<std::size_t>(degree)]);
    return s;
}

Word round_f(Word x, const CipherSpec& spec)
{
    const int n = spec.word_bits;
    auto r = [n](Word v, int k) { return k == 0 ? v : rotl(v, k, n); };
    return (r(x, spec.and_rot_1) & r(x, spec.and_rot_2)) ^ r(x, spec.lin_rot);
}

} // namespace

std::vector<Word> expand_key(std::span<const Word> key, const CipherSpec& spec)
{
    const auto m = static_cast<std::size_t>(spec.key_words);
    if (key.size() != m)
        throw ParameterError("key needs " + std::to_string(m) + " words, got " +
                             std::to_string(key.size()));
    const Word mask = spec.word_mask();
    for (Word w : key)
        if ((w & ~mask) != 0) throw ParameterError("key word exceeds word size");

    const auto rounds = static_cast<std::size_t>(spec.total_rounds);
    const int n = spec.word_bits;
    std::vector<Word> k(key.begin(), key.end());
    k.reserve(rounds);

    if (spec.variant == Variant::simon) {
        const auto& z = simon_z[static_cast<std::size_t>(simon_z_index(spec))];
        for (std::size_t i = m; i < rounds; ++i) {
            Word tmp = rotr(k[i - 1], 3, n);
            if (m == 4) tmp ^= k[i - 3];
            tmp ^= rotr(tmp, 1, n);
            k.push_back((~k[i - m] ^ tmp ^ z[(i - m) % 62] ^ 3) & mask);
        }
    } else {
        const auto z = simeck_z(spec);
        const Word c = mask ^ 3; // 2^n - 4
        for (std::size_t i = 0; k.size() < rounds; ++i)
            k.push_back(k[i] ^ round_f(k[i + 1], spec) ^ c ^ z[i]);
    }
    k.resize(rounds);
    return k;
}

Block encrypt_rounds(Block x, std::span<const Word> round_keys, int rounds, const CipherSpec& spec)
{
    if (rounds < 0 || static_cast<std::size_t>(rounds) > round_keys.size())
        throw ParameterError("round count exceeds the expanded key");
    for (int i = 0; i < rounds; ++i)
        x = {x.right ^ round_f(x.left, spec) ^ round_keys[static_cast<std::size_t>(i)], x.left};
    return x;
}

Block encrypt(Block plaintext, std::span<const Word> key, const CipherSpec& spec)
{
    const auto rk = expand_key(key, spec);
    return encrypt_rounds(plaintext, rk, spec.total_rounds, spec);
}

Block decrypt(Block x, std::span<const Word> key, const CipherSpec& spec)
{
    const auto rk = expand_key(key, spec);
    for (auto i = rk.size(); i-- > 0;)
        x = {x.right, x.left ^ round_f(x.right, spec) ^ rk[i]};
    return x;
}

Fraction empirical_trail_probability(const DiffState& initial, std::span<const Word> trail,
                                     const CipherSpec& spec, std::uint64_t pairs,
                                     std::uint64_t seed)
{
    if (pairs < 1) throw ParameterError("need at least one pair");
    if (trail.size() > static_cast<std::size_t>(spec.total_rounds))
        throw ParameterError("trail longer than the cipher");

    DiffState expected = initial;
    for (Word c : trail) expected = round_forward_diff(expected, c, spec);

    const int rounds = static_cast<int>(trail.size());
    const Word mask = spec.word_mask();
    std::mt19937_64 rng(seed);
    std::vector<Word> key(static_cast<std::size_t>(spec.key_words));
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < pairs; ++i) {
        for (auto& w : key) w = static_cast<Word>(rng()) & mask;
        const auto rk = expand_key(key, spec);
        const Block p{static_cast<Word>(rng()) & mask, static_cast<Word>(rng()) & mask};
        const Block q{p.left ^ initial.left, p.right ^ initial.right};
        const Block cp = encrypt_rounds(p, rk, rounds, spec);
        const Block cq = encrypt_rounds(q, rk, rounds, spec);
        if ((cp.left ^ cq.left) == expected.left && (cp.right ^ cq.right) == expected.right) ++hits;
    }
    return {hits, pairs};
}

} // namespace difftrail
