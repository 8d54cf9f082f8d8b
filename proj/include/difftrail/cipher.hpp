#pragma once

// Cipher parameters and the XOR-difference model of the SIMON / SIMECK round.
//
// A round maps (L, R) -> (R ^ f(L) ^ k, L) with
//     f(x) = (x <<< and_rot_1) & (x <<< and_rot_2) ^ (x <<< lin_rot).
// In the difference domain the key vanishes and the only non-linear step is the
// AND, whose output difference c is a free choice constrained by its inputs.

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace difftrail {

using Word = std::uint32_t;

enum class Variant { simon, simeck };

struct CipherSpec {
    Variant variant = Variant::simon;
    int word_bits = 16;
    int key_words = 4;
    int total_rounds = 32;
    int and_rot_1 = 1;
    int and_rot_2 = 8;
    int lin_rot = 2;

    [[nodiscard]] int block_bits() const noexcept { return 2 * word_bits; }
    [[nodiscard]] Word word_mask() const noexcept;

    // "simon32", "simeck48", ...
    [[nodiscard]] std::string name() const;

    // Published parameter sets; throws ParameterError for combinations the
    // designers did not define.
    static CipherSpec simon(int word_bits = 16, int key_words = 4);
    static CipherSpec simeck(int word_bits = 16);

    friend bool operator==(const CipherSpec&, const CipherSpec&) = default;
};

std::string_view to_string(Variant v) noexcept;
Variant parse_variant(std::string_view name);

// Accepts the names produced by CipherSpec::name().
CipherSpec cipher_from_name(std::string_view name);

// XOR differences entering a round. round_index counts rounds already applied.
struct DiffState {
    Word left = 0;
    Word right = 0;
    int round_index = 0;

    [[nodiscard]] bool is_zero() const noexcept { return left == 0 && right == 0; }
    friend bool operator==(const DiffState&, const DiffState&) = default;
};

// Input differences (a, b) of the round's AND gate.
struct AndInputs {
    Word a = 0;
    Word b = 0;
    friend bool operator==(const AndInputs&, const AndInputs&) = default;
};

// Exact rational |hits| / denominator.
struct Fraction {
    std::uint64_t numerator = 0;
    std::uint64_t denominator = 1;

    [[nodiscard]] double value() const noexcept
    {
        return static_cast<double>(numerator) / static_cast<double>(denominator);
    }
};

// Circular left shift of an n-bit word. Requires 0 <= r < n and x < 2^n.
Word rotl(Word x, int r, int n);
Word rotr(Word x, int r, int n);

int hamming_weight(Word x) noexcept;

AndInputs and_diff_inputs(const DiffState& state, const CipherSpec& spec);

// -log2 of xdp^AND(a, b -> c) under the independent-bit model: hw(a | b) when c
// only sets bits where a or b is active, nullopt (probability zero) otherwise.
std::optional<int> xdp_and_weight(Word a, Word b, Word c) noexcept;

// Exhaustive count over all (p, q) in [0, 2^n)^2; only for n <= 8.
Fraction xdp_and_bruteforce(Word a, Word b, Word c, int n);

// hw(a | b) of the transition leaving `state`.
int round_weight(const DiffState& state, const CipherSpec& spec);

DiffState round_forward_diff(const DiffState& state, Word c, const CipherSpec& spec);

// Undo one round: `state` is the difference after the round, the returned state
// the one before it. The AND inputs are derived from state.right.
DiffState round_backward_diff(const DiffState& state, Word c, const CipherSpec& spec);

// (0x1, rotl(0x1, lin_rot)): the lightest start whose first round can cancel the
// right word and enter (0, 1).
DiffState default_initial_difference(const CipherSpec& spec);

} // namespace difftrail
