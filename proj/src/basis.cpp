#include "caemu/basis.hpp"

#include "caemu/engine.hpp"
#include "caemu/verify.hpp"

#include <algorithm>
#include <bit>
#include <random>

namespace caemu {

BigUint::BigUint(std::uint64_t v) {
    while (v) {
        limbs_.push_back(static_cast<std::uint32_t>(v));
        v >>= 32;
    }
}

void BigUint::trim() {
    while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
}

void BigUint::add_shifted(std::uint64_t v, std::size_t shift) {
    if (!v) return;
    const std::size_t word = shift / 32;
    const unsigned bit = static_cast<unsigned>(shift % 32);
    // v << bit spans at most three limbs
    std::uint64_t lo = v << bit;
    std::uint64_t hi = bit ? v >> (64 - bit) : 0;
    std::uint32_t parts[3] = {static_cast<std::uint32_t>(lo), static_cast<std::uint32_t>(lo >> 32),
                              static_cast<std::uint32_t>(hi)};
    if (limbs_.size() < word + 4) limbs_.resize(word + 4, 0);
    std::uint64_t carry = 0;
    for (std::size_t i = word; i < limbs_.size(); ++i) {
        const std::uint64_t add = i - word < 3 ? parts[i - word] : 0;
        const std::uint64_t s = std::uint64_t{limbs_[i]} + add + carry;
        limbs_[i] = static_cast<std::uint32_t>(s);
        carry = s >> 32;
        if (i - word >= 2 && !carry) break;
    }
    if (carry) limbs_.push_back(static_cast<std::uint32_t>(carry));
    trim();
}

std::string BigUint::to_string() const {
    if (limbs_.empty()) return "0";
    auto n = limbs_;
    std::vector<std::uint32_t> chunks;  // base 1e9, little endian
    while (!n.empty()) {
        std::uint64_t rem = 0;
        for (std::size_t i = n.size(); i-- > 0;) {
            const std::uint64_t cur = (rem << 32) | n[i];
            n[i] = static_cast<std::uint32_t>(cur / 1000000000u);
            rem = cur % 1000000000u;
        }
        chunks.push_back(static_cast<std::uint32_t>(rem));
        while (!n.empty() && n.back() == 0) n.pop_back();
    }
    std::string s = std::to_string(chunks.back());
    for (std::size_t i = chunks.size() - 1; i-- > 0;) {
        const auto part = std::to_string(chunks[i]);
        s += std::string(9 - part.size(), '0') + part;
    }
    return s;
}

namespace {

void require_ell(std::uint64_t ell) {
    if (ell < 4 || !std::has_single_bit(ell)) throw Error("ell must be a power of two, at least 4");
}

} // namespace

std::uint64_t lambda(std::uint64_t ell, unsigned m) {
    if (ell < 2) throw Error("lambda needs ell >= 2");
    if (ell == 2) return 1;
    std::uint64_t p = 1;
    for (unsigned i = 0; i < m; ++i) {
        if (p > ~std::uint64_t{0} / ell) throw Error("lambda overflows 64 bits");
        p *= ell;
    }
    const std::uint64_t num = (ell - 2) * p + 1;
    if (num % (ell - 1) != 0) throw Error("lambda is not integral");  // cannot happen
    return num / (ell - 1);
}

std::vector<std::uint64_t> delta_vector(std::uint64_t ell, std::size_t arity) {
    require_ell(ell);
    if (arity == 0 || arity > 16) throw Error("arity out of range");
    const std::size_t n = (std::size_t{1} << arity) - 1;
    std::vector<std::uint64_t> out(n);
    for (std::size_t i = 1; i <= n; ++i) out[i - 1] = lambda(ell, static_cast<unsigned>(std::countr_zero(i)));
    return out;
}

BasisVector basis_01(std::uint64_t ell, std::size_t arity) {
    const auto delta = delta_vector(ell, arity);
    BasisVector b;
    b.ell = ell;
    b.exponents.push_back(0);
    for (auto d : delta) b.exponents.push_back(b.exponents.back() + d);
    return b;
}

BasisVector basis_xy(std::uint64_t ell, std::size_t arity, unsigned x, unsigned y) {
    if (!(x < y && y < ell)) throw Error("basis colors must satisfy x < y < ell");
    auto b = basis_01(ell, arity);
    const auto last = b.exponents.back();
    for (auto& e : b.exponents) e = x * last + (y - x) * e;
    b.x = x;
    b.y = y;
    return b;
}

std::vector<BasisVector> all_bases(std::uint64_t ell, std::size_t arity) {
    std::vector<BasisVector> out;
    for (unsigned x = 0; x < ell; ++x)
        for (unsigned y = x + 1; y < ell; ++y) out.push_back(basis_xy(ell, arity, x, y));
    return out;
}

std::uint64_t basis_count(std::uint64_t ell) { return ell * (ell - 1) / 2; }

BigUint LiftedRule::number() const {
    const auto bits = static_cast<std::size_t>(std::countr_zero(ell));
    BigUint n;
    for (auto [e, d] : digits) n.add_shifted(d, e * bits);
    return n;
}

LiftedRule lift_rule(const RuleSpec& rule2, const BasisVector& basis) {
    if (!rule2.binary()) throw Error("only binary rules lift");
    if (basis.exponents.size() != rule2.neighborhood_count()) throw Error("basis does not match the rule template");
    LiftedRule out;
    out.ell = basis.ell;
    for (std::size_t n = 0; n < basis.exponents.size(); ++n) {
        const unsigned digit = rule2.output(n) ? basis.y : basis.x;
        if (digit) out.digits[basis.exponents[n]] = digit;
    }
    return out;
}

RuleSpec project_rule(const LiftedRule& lifted, const BasisVector& basis, std::vector<int> offsets) {
    std::vector<Cell> table(basis.exponents.size());
    for (std::size_t n = 0; n < table.size(); ++n) {
        auto it = lifted.digits.find(basis.exponents[n]);
        const unsigned d = it == lifted.digits.end() ? 0 : it->second;
        if (d == basis.y)
            table[n] = 1;
        else if (d != basis.x)
            throw Error("digit outside the basis colors");
    }
    return RuleSpec::from_table(2, std::move(offsets), std::move(table));
}

Decomposition causal_decomposition_check(const RuleSpec& rule, const Projection& p) {
    if (!rule.binary()) throw Error("causal decomposition is defined for binary rules");
    if (p.states() != 2) throw Error("binary projection expected");
    Decomposition d;
    const std::size_t width = static_cast<std::size_t>(rule.span()) + 1;
    const std::size_t n = std::size_t{1} << width;
    for (std::size_t w = 0; w < n; ++w) {
        std::vector<Cell> window(width);
        for (std::size_t j = 0; j < width; ++j) window[j] = static_cast<Cell>((w >> (width - 1 - j)) & 1u);
        auto future = light_cone_future(rule, p, window);
        if (!p.decode(future) && !d.witness) d.witness = w;
        d.futures.push_back(std::move(future));
    }
    std::set<Block> distinct(d.futures.begin(), d.futures.end());
    if (!d.witness && distinct.size() <= 2) {
        d.emulated = induced_rule(rule, p);
        d.decomposable = d.emulated.has_value();
    }
    return d;
}

unsigned supercell(std::span<const Cell> block) {
    unsigned v = 0;
    for (Cell c : block) v = (v << 1) | (c & 1u);
    return v;
}

namespace {

void observe_row(const Configuration& row, std::size_t k, std::set<unsigned>& seen) {
    const auto cells = row.cells();
    for (std::size_t i = 0; i + k <= cells.size(); i += k) seen.insert(supercell(cells.subspan(i, k)));
}

Configuration encode(const BlockMap& map, const std::vector<unsigned>& colors, Boundary b) {
    std::vector<Cell> cells;
    for (auto c : colors) cells.insert(cells.end(), map.blocks[c].begin(), map.blocks[c].end());
    return Configuration(std::move(cells), b);
}

} // namespace

LiftedClass classify_lifted(const RuleSpec& rule, const BlockMap& map, const LiftOptions& opt) {
    if (!rule.binary()) throw Error("lifted classification needs a binary rule");
    const auto k = map.block_size();
    if (k == 0 || map.blocks.size() != map.ell()) throw Error("block map must cover all 2^k colors");
    for (const auto& b : map.blocks)
        if (b.size() != k) throw Error("block map blocks must have equal length");
    std::vector<unsigned> inputs = opt.input_colors;
    if (inputs.empty())
        for (unsigned c = 0; c < map.ell(); ++c) inputs.push_back(c);
    for (auto c : inputs)
        if (c >= map.ell()) throw Error("input color outside the lifted alphabet");

    LiftedClass out;
    // pasts of every window
    const std::size_t width = static_cast<std::size_t>(rule.span()) + 1;
    std::vector<std::size_t> digit(width, 0);
    while (true) {
        std::vector<unsigned> colors(width);
        for (std::size_t j = 0; j < width; ++j) colors[j] = inputs[digit[j]];
        const auto past = encode(map, colors, Boundary::lightcone);
        const auto st = evolve(rule, past, k);
        observe_row(st.row(k), k, out.observed);
        std::size_t j = width;
        while (j > 0 && ++digit[j - 1] == inputs.size()) digit[--j] = 0;
        if (j == 0) break;
    }
    // seeded random rows; raw engine output keeps this platform independent
    std::mt19937_64 rng(opt.seed);
    for (std::size_t r = 0; r < opt.random_rows; ++r) {
        std::vector<unsigned> colors(opt.width);
        for (auto& c : colors) c = inputs[rng() % inputs.size()];
        const auto st = evolve(rule, encode(map, colors, Boundary::cyclic), opt.steps * k);
        for (std::size_t t = 1; t <= opt.steps; ++t) observe_row(st.row(t * k), k, out.observed);
    }
    if (out.observed.size() == 2) {
        out.in_basis = true;
        out.x = *out.observed.begin();
        out.y = *out.observed.rbegin();
    }
    return out;
}

std::vector<BlockMap> all_block_maps(std::size_t k) {
    if (k == 0 || k > 2) throw Error("block map enumeration is limited to k <= 2");
    const std::size_t ell = std::size_t{1} << k;
    std::size_t total = 1;
    for (std::size_t i = 0; i < ell; ++i) total *= ell;
    std::vector<BlockMap> out;
    out.reserve(total);
    for (std::size_t m = 0; m < total; ++m) {
        BlockMap map;
        auto rest = m;
        std::vector<std::size_t> images(ell);
        for (std::size_t c = ell; c-- > 0;) {
            images[c] = rest % ell;
            rest /= ell;
        }
        for (auto img : images) {
            Block b(k);
            for (std::size_t j = 0; j < k; ++j) b[j] = static_cast<Cell>((img >> (k - 1 - j)) & 1u);
            map.blocks.push_back(std::move(b));
        }
        out.push_back(std::move(map));
    }
    return out;
}

std::vector<CensusEntry> lifted_census(const RuleSpec& rule, std::size_t k, const LiftOptions& opt) {
    const auto maps = all_block_maps(k);
    std::vector<CensusEntry> out(maps.size());
    const auto n = static_cast<std::int64_t>(maps.size());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < n; ++i) {
        const auto u = static_cast<std::size_t>(i);
        out[u] = {maps[u], classify_lifted(rule, maps[u], opt)};
    }
    return out;
}

} // namespace caemu
