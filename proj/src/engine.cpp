#include "caemu/engine.hpp"

#include <array>

namespace caemu {

namespace {

constexpr std::uint64_t low_mask(unsigned width) {
    return width >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << width) - 1);
}

// Evaluates a binary table on whole words by Shannon expansion on the first
// template cell: f = x1 ? f|x1=1 : f|x1=0, recursively.
std::uint64_t mux_tree(std::span<const Cell> table, const std::uint64_t* inputs) {
    if (table.size() == 1) return table[0] ? ~std::uint64_t{0} : 0;
    const std::size_t half = table.size() / 2;
    const std::uint64_t lo = mux_tree(table.first(half), inputs + 1);
    const std::uint64_t hi = mux_tree(table.subspan(half), inputs + 1);
    if (lo == hi) return lo;
    return (inputs[0] & hi) | (~inputs[0] & lo);
}

void require_binary(const RuleSpec& rule) {
    if (!rule.binary()) throw Error("packed kernel requires a binary rule");
    if (rule.arity() > 16) throw Error("packed kernel supports at most 16 template cells");
}

} // namespace

std::size_t lightcone_width(const RuleSpec& rule, std::size_t width, std::size_t steps) {
    const auto loss = static_cast<std::size_t>(rule.span()) * steps;
    if (width <= loss) throw Error("exhausted light cone");
    return width - loss;
}

Configuration step_reference(const RuleSpec& rule, const Configuration& c) {
    for (Cell v : c.cells())
        if (v >= rule.colors()) throw Error("cell state out of range for rule");
    const auto offs = rule.offsets();
    std::vector<Cell> nb(offs.size());
    if (c.boundary() == Boundary::cyclic) {
        const auto w = static_cast<std::ptrdiff_t>(c.width());
        std::vector<Cell> out(c.width());
        for (std::ptrdiff_t i = 0; i < w; ++i) {
            for (std::size_t j = 0; j < offs.size(); ++j)
                nb[j] = c[static_cast<std::size_t>(((i + offs[j]) % w + w) % w)];
            out[static_cast<std::size_t>(i)] = rule.output(rule.index_of(nb));
        }
        return Configuration(std::move(out), Boundary::cyclic);
    }
    const std::size_t w = lightcone_width(rule, c.width(), 1);
    std::vector<Cell> out(w);
    for (std::size_t i = 0; i < w; ++i) {
        for (std::size_t j = 0; j < offs.size(); ++j)
            nb[j] = c[i + static_cast<std::size_t>(offs[j] - rule.lo())];
        out[i] = rule.output(rule.index_of(nb));
    }
    return Configuration(std::move(out), Boundary::lightcone);
}

SpaceTime evolve_reference(const RuleSpec& rule, const Configuration& c, std::size_t steps) {
    if (c.boundary() == Boundary::lightcone) lightcone_width(rule, c.width(), steps);
    SpaceTime st;
    st.push(c);
    for (std::size_t t = 0; t < steps; ++t) st.push(step_reference(rule, st.row(t)));
    return st;
}

Configuration step(const RuleSpec& rule, const Configuration& c) {
    if (!rule.binary()) return step_reference(rule, c);
    for (Cell v : c.cells())
        if (v > 1) throw Error("cell state out of range for rule");
    const auto row = packed::Row::from(c);
    if (c.boundary() == Boundary::cyclic)
        return packed::step_cyclic(rule, row).to_configuration(Boundary::cyclic);
    lightcone_width(rule, c.width(), 1);
    return packed::step_lightcone(rule, row).to_configuration(Boundary::lightcone);
}

SpaceTime evolve(const RuleSpec& rule, const Configuration& c, std::size_t steps) {
    if (!rule.binary()) return evolve_reference(rule, c, steps);
    if (c.boundary() == Boundary::lightcone) lightcone_width(rule, c.width(), steps);
    SpaceTime st;
    st.push(c);
    if (steps == 0) return st;
    for (Cell v : c.cells())
        if (v > 1) throw Error("cell state out of range for rule");
    auto row = packed::Row::from(c);
    for (std::size_t t = 0; t < steps; ++t) {
        row = c.boundary() == Boundary::cyclic ? packed::step_cyclic(rule, row)
                                               : packed::step_lightcone(rule, row);
        st.push(row.to_configuration(c.boundary()));
    }
    return st;
}

namespace packed {

Row Row::from(const Configuration& c) {
    Row r;
    r.width = c.width();
    r.words.assign((r.width + 63) / 64, 0);
    for (std::size_t i = 0; i < r.width; ++i)
        if (c[i]) r.words[i >> 6] |= std::uint64_t{1} << (i & 63);
    return r;
}

Configuration Row::to_configuration(Boundary b) const {
    std::vector<Cell> cells(width);
    for (std::size_t i = 0; i < width; ++i) cells[i] = get(i) ? 1 : 0;
    return Configuration(std::move(cells), b);
}

void Row::set(std::size_t i, bool v) {
    const auto bit = std::uint64_t{1} << (i & 63);
    if (v)
        words[i >> 6] |= bit;
    else
        words[i >> 6] &= ~bit;
}

namespace {

// Word `w` of the row shifted right by `s` cells (cell i of the result is
// cell i + s of the input).
std::uint64_t shifted_word(const Row& row, std::size_t w, std::size_t s) {
    const std::size_t src = w + s / 64;
    const unsigned bits = static_cast<unsigned>(s % 64);
    const auto at = [&](std::size_t i) { return i < row.words.size() ? row.words[i] : 0; };
    if (bits == 0) return at(src);
    return (at(src) >> bits) | (at(src + 1) << (64 - bits));
}

} // namespace

Row step_lightcone(const RuleSpec& rule, const Row& row) {
    require_binary(rule);
    const auto offs = rule.offsets();
    Row out;
    out.width = lightcone_width(rule, row.width, 1);
    out.words.assign((out.width + 63) / 64, 0);
    std::array<std::uint64_t, 16> inputs{};
    for (std::size_t w = 0; w < out.words.size(); ++w) {
        for (std::size_t j = 0; j < offs.size(); ++j)
            inputs[j] = shifted_word(row, w, static_cast<std::size_t>(offs[j] - rule.lo()));
        out.words[w] = mux_tree(rule.table(), inputs.data());
    }
    const unsigned tail = static_cast<unsigned>(out.width % 64);
    if (tail) out.words.back() &= low_mask(tail);
    return out;
}

Row step_cyclic(const RuleSpec& rule, const Row& row) {
    require_binary(rule);
    // Unroll the ring into a linear row padded by the template reach on both
    // sides; one lightcone step then yields exactly `width` cells.
    const auto w = static_cast<std::ptrdiff_t>(row.width);
    Row padded;
    padded.width = row.width + static_cast<std::size_t>(rule.span());
    padded.words.assign((padded.width + 63) / 64, 0);
    for (std::size_t i = 0; i < padded.width; ++i) {
        const auto src = ((static_cast<std::ptrdiff_t>(i) + rule.lo()) % w + w) % w;
        if (row.get(static_cast<std::size_t>(src))) padded.set(i, true);
    }
    return step_lightcone(rule, padded);
}

std::uint64_t step_word(const RuleSpec& rule, std::uint64_t row, unsigned width) {
    const int span = rule.span();
    if (static_cast<int>(width) <= span) throw Error("exhausted light cone");
    const auto offs = rule.offsets();
    std::array<std::uint64_t, 16> inputs{};
    for (std::size_t j = 0; j < offs.size(); ++j) inputs[j] = row >> (offs[j] - rule.lo());
    return mux_tree(rule.table(), inputs.data()) & low_mask(width - static_cast<unsigned>(span));
}

std::uint64_t step_word_cyclic(const RuleSpec& rule, std::uint64_t row, unsigned width) {
    const auto offs = rule.offsets();
    const std::uint64_t mask = low_mask(width);
    std::array<std::uint64_t, 16> inputs{};
    const auto w = static_cast<int>(width);
    for (std::size_t j = 0; j < offs.size(); ++j) {
        const auto s = static_cast<unsigned>(((offs[j] % w) + w) % w);
        inputs[j] = s == 0 ? row : ((row >> s) | (row << (width - s))) & mask;
    }
    return mux_tree(rule.table(), inputs.data()) & mask;
}

} // namespace packed

} // namespace caemu
