#include <doctest.h>

#include "difftrail/block_cipher.hpp"
#include "difftrail/error.hpp"

#include <random>
#include <vector>

using namespace difftrail;

namespace {

struct Vector {
    CipherSpec spec;
    std::vector<Word> key; // least significant word first
    Block plain;
    Block cipher;
};

// Published test vectors of the cipher designers, key words written most
// significant first in the designers' documents and reversed here.
std::vector<Vector> published()
{
    return {
        {CipherSpec::simon(16, 4), {0x0100, 0x0908, 0x1110, 0x1918}, {0x6565, 0x6877}, {0xc69b, 0xe9bb}},
        {CipherSpec::simon(24, 3), {0x020100, 0x0a0908, 0x121110}, {0x612067, 0x6e696c}, {0xdae5ac, 0x292cac}},
        {CipherSpec::simon(24, 4),
         {0x020100, 0x0a0908, 0x121110, 0x1a1918},
         {0x726963, 0x20646e},
         {0x6e06a5, 0xacf156}},
        {CipherSpec::simon(32, 3), {0x03020100, 0x0b0a0908, 0x13121110}, {0x6f722067, 0x6e696c63},
         {0x5ca2e27f, 0x111a8fc8}},
        {CipherSpec::simon(32, 4),
         {0x03020100, 0x0b0a0908, 0x13121110, 0x1b1a1918},
         {0x656b696c, 0x20646e75},
         {0x44c8fc20, 0xb9dfa07a}},
        {CipherSpec::simeck(16), {0x0100, 0x0908, 0x1110, 0x1918}, {0x6565, 0x6877}, {0x770d, 0x2c76}},
        {CipherSpec::simeck(24),
         {0x020100, 0x0a0908, 0x121110, 0x1a1918},
         {0x726963, 0x20646e},
         {0xf3cf25, 0xe33b36}},
        {CipherSpec::simeck(32),
         {0x03020100, 0x0b0a0908, 0x13121110, 0x1b1a1918},
         {0x656b696c, 0x20646e75},
         {0x45ce6902, 0x5f7ab7ed}},
    };
}

} // namespace

TEST_CASE("published test vectors")
{
    for (const auto& v : published()) {
        CAPTURE(v.spec.name());
        CHECK(encrypt(v.plain, v.key, v.spec) == v.cipher);
        CHECK(decrypt(v.cipher, v.key, v.spec) == v.plain);
    }
}

TEST_CASE("decrypt inverts encrypt on random inputs")
{
    std::mt19937_64 g(9);
    for (const auto& spec : {CipherSpec::simon(), CipherSpec::simeck()}) {
        for (int i = 0; i < 200; ++i) {
            std::vector<Word> key(4);
            for (auto& w : key) w = static_cast<Word>(g()) & 0xFFFF;
            const Block p{static_cast<Word>(g()) & 0xFFFF, static_cast<Word>(g()) & 0xFFFF};
            REQUIRE(decrypt(encrypt(p, key, spec), key, spec) == p);
        }
    }
}

TEST_CASE("key length is checked")
{
    const std::vector<Word> short_key{1, 2, 3};
    CHECK_THROWS_AS(encrypt({0, 0}, short_key, CipherSpec::simon()), ParameterError);
    const std::vector<Word> wide{0x10000, 0, 0, 0};
    CHECK_THROWS_AS(encrypt({0, 0}, wide, CipherSpec::simon()), ParameterError);
}

TEST_CASE("difference model matches real one-round propagation")
{
    // Encrypt one round on a random pair, read off the AND output difference
    // from the values, and check the model predicts the output difference.
    std::mt19937_64 g(21);
    for (const auto& spec : {CipherSpec::simon(), CipherSpec::simeck()}) {
        const int n = spec.word_bits;
        auto r = [n](Word x, int k) { return k == 0 ? x : rotl(x, k, n); };
        for (int i = 0; i < 5000; ++i) {
            const Word k0 = static_cast<Word>(g()) & 0xFFFF;
            const std::vector<Word> rk{k0};
            const Block p{static_cast<Word>(g()) & 0xFFFF, static_cast<Word>(g()) & 0xFFFF};
            const DiffState d{static_cast<Word>(g()) & 0xFFFF, static_cast<Word>(g()) & 0xFFFF, 0};
            const Block q{p.left ^ d.left, p.right ^ d.right};
            const Word c = (r(p.left, spec.and_rot_1) & r(p.left, spec.and_rot_2)) ^
                           (r(q.left, spec.and_rot_1) & r(q.left, spec.and_rot_2));
            const auto in = and_diff_inputs(d, spec);
            REQUIRE(xdp_and_weight(in.a, in.b, c).has_value());
            const Block cp = encrypt_rounds(p, rk, 1, spec);
            const Block cq = encrypt_rounds(q, rk, 1, spec);
            const auto predicted = round_forward_diff(d, c, spec);
            REQUIRE(predicted.left == (cp.left ^ cq.left));
            REQUIRE(predicted.right == (cp.right ^ cq.right));
        }
    }
}

TEST_CASE("empirical trail probability")
{
    const auto spec = CipherSpec::simon();
    const DiffState start{0x0001, 0x0000, 0};
    SUBCASE("empty trail always holds")
    {
        const auto f = empirical_trail_probability(start, {}, spec, 100, 1);
        CHECK(f.numerator == 100);
    }
    SUBCASE("one round of weight 2 within a factor of 5")
    {
        const std::vector<Word> trail{0};
        const auto f = empirical_trail_probability(start, trail, spec, std::uint64_t{1} << 10, 2);
        CHECK(f.value() > 0.25 / 5);
        CHECK(f.value() < 0.25 * 5);
    }
    SUBCASE("impossible transition rejected")
    {
        const std::vector<Word> trail{0x8000};
        CHECK_THROWS_AS(empirical_trail_probability(start, trail, spec, 10, 3), ContractError);
    }
}
