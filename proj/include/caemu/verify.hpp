#pragma once

#include "caemu/projection.hpp"

#include <optional>

namespace caemu {

struct Counterexample {
    std::vector<Cell> window;  // emulated cells covering the template span
    Block expected;            // code block of the emulated rule's output
    Block observed;            // central block after k emulator steps
};

struct Verdict {
    bool verified = false;
    std::optional<Counterexample> counterexample;

    explicit operator bool() const { return verified; }
};

// Exhaustive light-cone proof of block emulation. For every window of
// span + 1 emulated cells the window is block encoded, the emulator runs k
// lightcone steps, and the k surviving cells must be the code block of the
// emulated rule's output. Those cells depend on nothing outside the window,
// so passing every window proves the emulation for all initial conditions
// and all times by induction.
Verdict verify_emulation(const RuleSpec& emulator, const RuleSpec& emulated, const Projection& p);

// The emulated rule read off the light cones, or nullopt when some cone
// leaves the code space. A returned rule always passes verify_emulation.
std::optional<RuleSpec> induced_rule(const RuleSpec& emulator, const Projection& p);

// The k cells that the light cone of `window` leaves after k emulator steps.
Block light_cone_future(const RuleSpec& emulator, const Projection& p, std::span<const Cell> window);

namespace bits {

// Binary code block packed into a word: cell i of the block is bit i.
std::uint64_t pack(std::span<const Cell> block);
Block unpack(std::uint64_t bits, std::size_t k);

// Word-level induced rule for binary rules whose window fits in 64 cells.
// Returns the emulated rule number, or nullopt when a cone leaves the code.
std::optional<std::uint64_t> induced_rule(const RuleSpec& emulator, std::uint64_t code0,
                                          std::uint64_t code1, unsigned k);

bool fits(const RuleSpec& rule, std::size_t k);

} // namespace bits

} // namespace caemu
