#pragma once

// Value-domain SIMON / SIMECK, used to check trails against real encryptions.

#include "difftrail/cipher.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace difftrail {

struct Block {
    Word left = 0;
    Word right = 0;
    friend bool operator==(const Block&, const Block&) = default;
};

// key[0] is the least significant key word (the one that becomes round key 0).
std::vector<Word> expand_key(std::span<const Word> key, const CipherSpec& spec);

Block encrypt_rounds(Block plaintext, std::span<const Word> round_keys, int rounds,
                     const CipherSpec& spec);
Block encrypt(Block plaintext, std::span<const Word> key, const CipherSpec& spec);
Block decrypt(Block ciphertext, std::span<const Word> key, const CipherSpec& spec);

// Fraction of `pairs` random plaintext pairs with input difference `initial`,
// each under a fresh random key, whose difference after trail.size() rounds
// equals the trail's final difference. Throws ContractError if the trail
// contains an impossible transition.
Fraction empirical_trail_probability(const DiffState& initial, std::span<const Word> trail,
                                     const CipherSpec& spec, std::uint64_t pairs,
                                     std::uint64_t seed);

} // namespace difftrail
