#pragma once

#include "caemu/projection.hpp"
#include "caemu/rule.hpp"

#include <cstdint>
#include <vector>

namespace caemu {

enum class Status { candidate, verified, refuted };

std::string_view status_name(Status s);
Status parse_status(std::string_view s);

struct EmulationRecord {
    Family family = Family::eca;
    std::uint64_t emulator = 0;
    std::uint64_t emulated = 0;
    Projection projection = Projection::identity(2);
    std::size_t block_size = 1;
    std::size_t time_scale = 1;  // always equal to block_size
    Status status = Status::candidate;

    bool self_emulation() const { return emulator == emulated; }
    // Emulated rule lies in the emulator's symmetry class.
    bool same_class() const;

    // Canonical order: emulator, emulated, block size, then concatenated code.
    friend bool operator<(const EmulationRecord& a, const EmulationRecord& b);
    friend bool operator==(const EmulationRecord&, const EmulationRecord&) = default;
};

// Block tuples of length k fixed by k steps on a cyclic width-k lattice.
std::vector<Block> candidate_blocks_a(const RuleSpec& rule, std::size_t k);
// Tuples outside `a` whose k-step cyclic image lies in `a`.
std::vector<Block> candidate_blocks_b(const RuleSpec& rule, std::size_t k, const std::vector<Block>& a);
// Tuples outside a and b fixed by 2k cyclic steps.
std::vector<Block> candidate_blocks_c(const RuleSpec& rule, std::size_t k, const std::vector<Block>& a,
                                      const std::vector<Block>& b);

// Binary De Bruijn sequence of the given order (FKM construction).
std::vector<Cell> de_bruijn(unsigned order);

// Probe row for check_candidate. ECA and GCA use fixed sequences; other
// templates a De Bruijn sequence of order arity + ceil(log2 k).
std::vector<Cell> probe_sequence(const RuleSpec& rule, std::size_t k);

// Necessary condition for the pair to be a compiler: the block-encoded probe
// row, after k cyclic steps, still consists of code blocks only.
bool check_candidate(const RuleSpec& rule, std::size_t k, const Block& block0, const Block& block1);

struct SearchOptions {
    bool include_refuted = false;  // keep prefilter survivors that fail the proof
};

struct SearchStats {
    std::size_t pairs_considered = 0;
    std::size_t pairs_passing_probe = 0;
    std::size_t verified = 0;
};

// Candidate pipeline (fixed, feeding and 2-cycle tuples, probe check) followed
// by the light-cone verifier, which decides every record's status. Output is
// sorted canonically.
std::vector<EmulationRecord> search_emulations(const RuleSpec& emulator, std::size_t k,
                                               const SearchOptions& options = {},
                                               SearchStats* stats = nullptr);

} // namespace caemu
