#pragma once

#include "caemu/configuration.hpp"

#include <cstdint>
#include <vector>

namespace caemu {

// Global map. Binary rules run on the packed word kernel, others on the
// reference evaluator; both give identical results.
Configuration step(const RuleSpec& rule, const Configuration& c);
SpaceTime evolve(const RuleSpec& rule, const Configuration& c, std::size_t steps);

// Straightforward per-cell table lookup. Kept as the oracle for the packed
// kernels and used for non-binary rules.
Configuration step_reference(const RuleSpec& rule, const Configuration& c);
SpaceTime evolve_reference(const RuleSpec& rule, const Configuration& c, std::size_t steps);

// Width after `steps` lightcone steps, or an Error when the cone runs out.
std::size_t lightcone_width(const RuleSpec& rule, std::size_t width, std::size_t steps);

namespace packed {

// Binary row, 64 cells per word, cell i at bit (i % 64) of word i / 64.
struct Row {
    std::size_t width = 0;
    std::vector<std::uint64_t> words;

    static Row from(const Configuration& c);
    Configuration to_configuration(Boundary b) const;
    bool get(std::size_t i) const { return (words[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i, bool v);

    friend bool operator==(const Row&, const Row&) = default;
};

Row step_lightcone(const RuleSpec& rule, const Row& row);
Row step_cyclic(const RuleSpec& rule, const Row& row);

// Single-word lightcone step for rows of at most 64 cells; the hot path of
// the emulation verifier.
std::uint64_t step_word(const RuleSpec& rule, std::uint64_t row, unsigned width);

// Cyclic step of a row of `width` <= 64 cells.
std::uint64_t step_word_cyclic(const RuleSpec& rule, std::uint64_t row, unsigned width);

} // namespace packed

} // namespace caemu
