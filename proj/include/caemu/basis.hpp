#pragma once

#include "caemu/projection.hpp"
#include "caemu/rule.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace caemu {

// Unsigned arbitrary-precision integer, just enough for lifted rule numbers.
class BigUint {
public:
    BigUint() = default;
    BigUint(std::uint64_t v);  // NOLINT: implicit on purpose

    // this += v * 2^shift
    void add_shifted(std::uint64_t v, std::size_t shift);
    std::string to_string() const;
    bool is_zero() const { return limbs_.empty(); }

    friend bool operator==(const BigUint&, const BigUint&) = default;

private:
    void trim();
    std::vector<std::uint32_t> limbs_;  // little endian
};

// ((ell - 2) ell^m + 1) / (ell - 1)
std::uint64_t lambda(std::uint64_t ell, unsigned m);

// Differences between consecutive two-color tuple positions for a template
// of `arity` cells: entry i (from 1) is lambda(ell, trailing zeros of i).
std::vector<std::uint64_t> delta_vector(std::uint64_t ell, std::size_t arity);

struct BasisVector {
    std::uint64_t ell = 4;
    unsigned x = 0, y = 1;
    std::vector<std::uint64_t> exponents;  // indexed by binary neighborhood number

    friend bool operator==(const BasisVector&, const BasisVector&) = default;
};

BasisVector basis_01(std::uint64_t ell, std::size_t arity);
// Position of the tuple with x for 0 and y for 1:
// x * (last exponent of b01) + (y - x) * (b01 exponent).
BasisVector basis_xy(std::uint64_t ell, std::size_t arity, unsigned x, unsigned y);

// All ell (ell - 1) / 2 bases, ordered by (x, y).
std::vector<BasisVector> all_bases(std::uint64_t ell, std::size_t arity);
std::uint64_t basis_count(std::uint64_t ell);

// ell-ary digits of a lifted rule: exponent -> digit (zero digits omitted
// unless the basis puts a color there).
struct LiftedRule {
    std::uint64_t ell = 4;
    std::map<std::uint64_t, unsigned> digits;

    BigUint number() const;
};

LiftedRule lift_rule(const RuleSpec& rule2, const BasisVector& basis);
// Inverse of lift_rule on the basis positions.
RuleSpec project_rule(const LiftedRule& lifted, const BasisVector& basis, std::vector<int> offsets);

struct Decomposition {
    bool decomposable = false;
    std::vector<Block> futures;            // one per window of span + 1 cells
    std::optional<RuleSpec> emulated;      // decoded rule when decomposable
    std::optional<std::size_t> witness;    // window whose future is no code block
};

// Every past (block-encoded window) must evolve in k lightcone steps into a
// code block of p.
Decomposition causal_decomposition_check(const RuleSpec& rule, const Projection& p);

// ell = 2^k supercell colors mapped to k-cell binary blocks; need not be
// injective.
struct BlockMap {
    std::vector<Block> blocks;  // indexed by supercell color

    std::size_t block_size() const { return blocks.empty() ? 0 : blocks.front().size(); }
    std::uint64_t ell() const { return std::uint64_t{1} << block_size(); }
    friend bool operator==(const BlockMap&, const BlockMap&) = default;
};

// Binary block read as a supercell color, first cell most significant.
unsigned supercell(std::span<const Cell> block);

struct LiftOptions {
    std::vector<unsigned> input_colors;  // empty: all colors
    std::size_t random_rows = 64;
    std::size_t width = 24;  // supercells
    std::size_t steps = 8;   // supercell steps
    std::uint64_t seed = 20190527;
};

struct LiftedClass {
    bool in_basis = false;
    unsigned x = 0, y = 0;       // the basis when in_basis
    std::set<unsigned> observed; // supercell colors seen
};

// Lifted evolution: the futures of every window over the input colors plus
// seeded random rows read at rows k, 2k, ... as supercells. The encoded
// input itself is not observed. In a two-color basis iff exactly two colors
// ever appear; a map that collapses everything to one color is not.
LiftedClass classify_lifted(const RuleSpec& rule, const BlockMap& map, const LiftOptions& opt = {});

// All (2^k)^(2^k) block maps of size k, in lexicographic order of the map.
std::vector<BlockMap> all_block_maps(std::size_t k);

struct CensusEntry {
    BlockMap map;
    LiftedClass result;
};
std::vector<CensusEntry> lifted_census(const RuleSpec& rule, std::size_t k, const LiftOptions& opt = {});

} // namespace caemu
