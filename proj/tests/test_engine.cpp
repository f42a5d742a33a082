#include "doctest.h"

#include "caemu/engine.hpp"
#include "caemu/projection.hpp"

#include <random>

using namespace caemu;

namespace {

std::vector<Cell> random_cells(std::mt19937_64& rng, std::size_t n) {
    std::vector<Cell> v(n);
    for (auto& c : v) c = static_cast<Cell>(rng() & 1u);
    return v;
}

// Wolfram's own formula, written out by hand: bit (4l + 2c + r) of the number.
Configuration eca_oracle(std::uint64_t rule, const Configuration& c) {
    const std::size_t w = c.width();
    std::vector<Cell> out(w);
    for (std::size_t i = 0; i < w; ++i) {
        const unsigned l = c[(i + w - 1) % w], m = c[i], r = c[(i + 1) % w];
        out[i] = static_cast<Cell>((rule >> (4 * l + 2 * m + r)) & 1u);
    }
    return Configuration(out);
}

} // namespace

TEST_CASE("rule numbers follow the Wolfram convention") {
    const auto r90 = RuleSpec::eca(90);
    for (unsigned n = 0; n < 8; ++n) {
        const unsigned a = n >> 2 & 1, c = n & 1;
        CHECK(r90.output(n) == (a ^ c));
    }
    const auto r110 = RuleSpec::eca(110);
    CHECK(r110.output(r110.index_of(std::vector<Cell>{1, 1, 1})) == 0);
    CHECK(r110.output(r110.index_of(std::vector<Cell>{0, 0, 1})) == 1);
    CHECK(r110.output(0) == 0);

    for (std::uint64_t r = 0; r < 256; ++r) {
        const auto rs = RuleSpec::eca(r);
        CHECK(rs.number() == r);
        CHECK(encode_table(2, rule_table(rs)) == r);
    }
    CHECK(RuleSpec::gca(65535).number() == 65535);
    CHECK(RuleSpec::pca(6).arity() == 2);
    CHECK(RuleSpec::gca(0).span() == 3);
    CHECK_THROWS_AS(RuleSpec::eca(256), Error);
    CHECK(parse_family("gca") == Family::gca);
    CHECK(family_name(Family::pca) == "pca");
}

TEST_CASE("neighborhood index round trip") {
    const auto r = RuleSpec::from_number(3, {-1, 0, 1}, 12345);
    for (std::size_t i = 0; i < r.neighborhood_count(); ++i) CHECK(r.index_of(r.neighborhood(i)) == i);
    CHECK(r.number() == 12345);
}

TEST_CASE("reference step agrees with the hand oracle for every ECA") {
    std::mt19937_64 rng(11);
    for (std::uint64_t rule = 0; rule < 256; ++rule) {
        const Configuration c(random_cells(rng, 37));
        CHECK(step_reference(RuleSpec::eca(rule), c) == eca_oracle(rule, c));
    }
}

TEST_CASE("packed kernels match the reference") {
    std::mt19937_64 rng(5);
    SUBCASE("every ECA, cyclic and lightcone, assorted widths") {
        for (std::uint64_t rule = 0; rule < 256; ++rule) {
            const auto rs = RuleSpec::eca(rule);
            for (std::size_t w : {1u, 3u, 63u, 64u, 65u, 130u}) {
                const Configuration c(random_cells(rng, w));
                CHECK(step(rs, c) == step_reference(rs, c));
                if (w > 2) {
                    const auto lc = c.with_boundary(Boundary::lightcone);
                    CHECK(step(rs, lc) == step_reference(rs, lc));
                }
            }
        }
    }
    SUBCASE("random GCA and all PCA over many steps") {
        for (int trial = 0; trial < 200; ++trial) {
            const auto rs = RuleSpec::gca(rng() & 0xffff);
            const Configuration c(random_cells(rng, 1 + rng() % 200));
            CHECK(evolve(rs, c, 20) == evolve_reference(rs, c, 20));
        }
        for (std::uint64_t r = 0; r < 16; ++r) {
            const Configuration c(random_cells(rng, 77), Boundary::lightcone);
            CHECK(evolve(RuleSpec::pca(r), c, 30) == evolve_reference(RuleSpec::pca(r), c, 30));
        }
    }
    SUBCASE("single word steps") {
        for (int trial = 0; trial < 2000; ++trial) {
            const auto rs = RuleSpec::gca(rng() & 0xffff);
            const unsigned w = 4 + rng() % 61;
            const auto cells = random_cells(rng, w);
            std::uint64_t word = 0;
            for (unsigned i = 0; i < w; ++i) word |= std::uint64_t{cells[i]} << i;
            const auto pack = [](const Configuration& c) {
                std::uint64_t v = 0;
                for (std::size_t i = 0; i < c.width(); ++i) v |= std::uint64_t{c[i]} << i;
                return v;
            };
            CHECK(packed::step_word_cyclic(rs, word, w) == pack(step_reference(rs, Configuration(cells))));
            CHECK(packed::step_word(rs, word, w) ==
                  pack(step_reference(rs, Configuration(cells, Boundary::lightcone))));
        }
    }
}

TEST_CASE("non-binary rules run on the reference path") {
    // 3-color sum mod 3
    std::vector<Cell> table(27);
    for (std::size_t i = 0; i < 27; ++i) table[i] = static_cast<Cell>((i / 9 + i / 3 % 3 + i % 3) % 3);
    const auto r = RuleSpec::from_table(3, {-1, 0, 1}, table);
    const auto c = Configuration::parse("0120");
    CHECK(step(r, c).to_string() == "1002");
    CHECK(step(r, Configuration::parse("0010")).to_string() == "0111");
    CHECK_THROWS_AS(step(RuleSpec::eca(1), Configuration::parse("012")), Error);
}

TEST_CASE("lightcone rows shrink by the template span") {
    const auto c = Configuration::parse("0110100101", Boundary::lightcone);
    CHECK(step(RuleSpec::eca(30), c).width() == 8);
    CHECK(step(RuleSpec::gca(1234), c).width() == 7);
    CHECK(step(RuleSpec::pca(6), c).width() == 9);
    CHECK(lightcone_width(RuleSpec::eca(30), 10, 4) == 2);
    CHECK_THROWS_AS(evolve(RuleSpec::eca(30), c, 5), Error);
    const auto st = evolve(RuleSpec::eca(30), c, 4);
    CHECK(st.height() == 5);
    CHECK_FALSE(st.rectangular());
}

TEST_CASE("rotation commutes with cyclic steps") {
    std::mt19937_64 rng(2);
    const Configuration c(random_cells(rng, 50));
    const auto r = RuleSpec::eca(110);
    CHECK(step(r, c.rotated(7)) == step(r, c).rotated(7));
    CHECK(c.rotated(50) == c);
}

TEST_CASE("block encode and decode") {
    const auto p = Projection::binary("01", "11");
    CHECK(p.block_size() == 2);
    CHECK(p.code(0) == "01");
    CHECK(p.concatenated() == Block{0, 1, 1, 1});
    const auto c = Configuration::parse("0110");
    const auto e = block_encode(p, c);
    CHECK(e.to_string() == "01111101");
    CHECK(block_decode(p, e) == c);
    CHECK(p.decode(Block{1, 1}) == Cell{1});
    CHECK_FALSE(p.decode(Block{0, 0}).has_value());
    try {
        block_decode(p, Configuration::parse("011100"));
        FAIL("expected a decode failure");
    } catch (const DecodeFailure& f) {
        CHECK(f.block_index() == 2);
    }
    CHECK_THROWS_AS(Projection::binary("00", "00"), Error);
    CHECK_THROWS_AS(Projection::binary("00", "1"), Error);
    CHECK(parse_block("0110") == Block{0, 1, 1, 0});
    CHECK(block_string(Block{1, 0}) == "10");
}

TEST_CASE("coarse graining a known emulation returns the emulated evolution") {
    // rule 94 with 0 -> 00, 1 -> 11 behaves as rule 90 on every k-th row
    std::mt19937_64 rng(9);
    const Configuration init(random_cells(rng, 40));
    const auto p = Projection::binary("00", "11");
    const auto fine = evolve(RuleSpec::eca(94), block_encode(p, init), 20);
    const auto coarse = coarse_grain(fine, p);
    CHECK(coarse == evolve(RuleSpec::eca(90), init, 10));
}
