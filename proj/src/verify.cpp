#include "caemu/verify.hpp"

#include "caemu/engine.hpp"

#include <algorithm>

namespace caemu {

namespace {

void check_compatible(const RuleSpec& emulator, const RuleSpec& emulated, const Projection& p) {
    if (emulator.colors() != emulated.colors() || emulator.offsets().size() != emulated.offsets().size() ||
        !std::equal(emulator.offsets().begin(), emulator.offsets().end(), emulated.offsets().begin()))
        throw Error("emulator and emulated rule must share colors and template");
    if (p.states() != static_cast<std::size_t>(emulated.colors()))
        throw Error("projection must code every emulated state");
    for (const auto& b : p.blocks())
        for (Cell c : b)
            if (c >= emulator.colors()) throw Error("code block uses a state the emulator lacks");
}

std::size_t window_width(const RuleSpec& rule) { return static_cast<std::size_t>(rule.span()) + 1; }

// Emulated output for the window: the template cells sit at offset - lo.
Cell window_output(const RuleSpec& rule, std::span<const Cell> window) {
    std::vector<Cell> nb(rule.arity());
    for (std::size_t j = 0; j < nb.size(); ++j)
        nb[j] = window[static_cast<std::size_t>(rule.offsets()[j] - rule.lo())];
    return rule.output(rule.index_of(nb));
}

std::vector<Cell> window_at(int colors, std::size_t width, std::size_t index) {
    std::vector<Cell> w(width);
    for (std::size_t j = width; j-- > 0;) {
        w[j] = static_cast<Cell>(index % static_cast<std::size_t>(colors));
        index /= static_cast<std::size_t>(colors);
    }
    return w;
}

std::size_t window_count(int colors, std::size_t width) {
    std::size_t n = 1;
    for (std::size_t j = 0; j < width; ++j) n *= static_cast<std::size_t>(colors);
    return n;
}

} // namespace

Block light_cone_future(const RuleSpec& emulator, const Projection& p, std::span<const Cell> window) {
    std::vector<Cell> cells(window.begin(), window.end());
    const auto k = p.block_size();
    const auto encoded = block_encode(p, Configuration(std::move(cells), Boundary::lightcone));
    const auto st = evolve(emulator, encoded, k);
    const auto& last = st.row(k);
    return {last.cells().begin(), last.cells().end()};
}

Verdict verify_emulation(const RuleSpec& emulator, const RuleSpec& emulated, const Projection& p) {
    check_compatible(emulator, emulated, p);
    const auto width = window_width(emulated);
    const auto n = window_count(emulated.colors(), width);
    for (std::size_t i = 0; i < n; ++i) {
        const auto window = window_at(emulated.colors(), width, i);
        auto observed = light_cone_future(emulator, p, window);
        const auto& expected = p.block(window_output(emulated, window));
        if (observed != expected) return {false, Counterexample{window, expected, std::move(observed)}};
    }
    return {true, std::nullopt};
}

std::optional<RuleSpec> induced_rule(const RuleSpec& emulator, const Projection& p) {
    if (p.states() != static_cast<std::size_t>(emulator.colors()))
        throw Error("projection must code every state of the emulated space");
    const auto width = window_width(emulator);
    const auto n = window_count(emulator.colors(), width);
    std::vector<Cell> table(emulator.neighborhood_count());
    std::vector<char> seen(table.size());
    for (std::size_t i = 0; i < n; ++i) {
        const auto window = window_at(emulator.colors(), width, i);
        const auto decoded = p.decode(light_cone_future(emulator, p, window));
        if (!decoded) return std::nullopt;
        std::vector<Cell> nb(emulator.arity());
        for (std::size_t j = 0; j < nb.size(); ++j)
            nb[j] = window[static_cast<std::size_t>(emulator.offsets()[j] - emulator.lo())];
        const auto idx = emulator.index_of(nb);
        // Gapped templates see each neighborhood in several windows; the
        // cells outside the template must not matter.
        if (seen[idx] && table[idx] != *decoded) return std::nullopt;
        seen[idx] = 1;
        table[idx] = *decoded;
    }
    return RuleSpec::from_table(emulator.colors(), {emulator.offsets().begin(), emulator.offsets().end()},
                                std::move(table));
}

namespace bits {

std::uint64_t pack(std::span<const Cell> block) {
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < block.size(); ++i)
        if (block[i]) v |= std::uint64_t{1} << i;
    return v;
}

Block unpack(std::uint64_t v, std::size_t k) {
    Block b(k);
    for (std::size_t i = 0; i < k; ++i) b[i] = static_cast<Cell>((v >> i) & 1u);
    return b;
}

bool fits(const RuleSpec& rule, std::size_t k) {
    return rule.binary() && rule.arity() <= 6 && (static_cast<std::size_t>(rule.span()) + 1) * k <= 64;
}

std::optional<std::uint64_t> induced_rule(const RuleSpec& emulator, std::uint64_t code0,
                                          std::uint64_t code1, unsigned k) {
    const unsigned width = static_cast<unsigned>(emulator.span()) + 1;
    const auto offs = emulator.offsets();
    const auto lo = emulator.lo();
    const std::size_t windows = std::size_t{1} << width;
    std::uint64_t number = 0;
    std::uint64_t seen = 0;
    for (std::size_t w = 0; w < windows; ++w) {
        // Window cell j (most significant first) becomes block j.
        std::uint64_t row = 0;
        for (unsigned j = 0; j < width; ++j) {
            const bool one = (w >> (width - 1 - j)) & 1u;
            row |= (one ? code1 : code0) << (j * k);
        }
        unsigned cells = width * k;
        for (unsigned t = 0; t < k; ++t) {
            row = packed::step_word(emulator, row, cells);
            cells -= static_cast<unsigned>(emulator.span());
        }
        unsigned bit;
        if (row == code0)
            bit = 0;
        else if (row == code1)
            bit = 1;
        else
            return std::nullopt;
        std::size_t idx = 0;
        for (int off : offs) idx = (idx << 1) | ((w >> (width - 1 - static_cast<unsigned>(off - lo))) & 1u);
        if ((seen >> idx) & 1u) {
            if (((number >> idx) & 1u) != bit) return std::nullopt;
        } else {
            seen |= std::uint64_t{1} << idx;
            number |= std::uint64_t{bit} << idx;
        }
    }
    return number;
}

} // namespace bits

} // namespace caemu
