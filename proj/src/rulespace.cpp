#include "caemu/rulespace.hpp"

#include <algorithm>
#include <omp.h>
#include <set>

namespace caemu {

namespace {

std::vector<Cell> transformed_table(const RuleSpec& rule, bool mirror, bool complement) {
    const auto top = static_cast<Cell>(rule.colors() - 1);
    std::vector<Cell> out(rule.neighborhood_count());
    for (std::size_t n = 0; n < out.size(); ++n) {
        auto nb = rule.neighborhood(n);
        if (mirror) std::reverse(nb.begin(), nb.end());
        if (complement)
            for (auto& c : nb) c = static_cast<Cell>(top - c);
        const Cell v = rule.output(rule.index_of(nb));
        out[n] = complement ? static_cast<Cell>(top - v) : v;
    }
    return out;
}

std::uint64_t transformed(const RuleSpec& rule, bool mirror, bool complement) {
    return encode_table(rule.colors(), transformed_table(rule, mirror, complement));
}

RuleCatalog make_catalog(int colors, const std::vector<int>& offsets, Family f, bool parallel) {
    const RuleSpec probe = RuleSpec::from_number(colors, offsets, 0);
    const std::uint64_t n = probe.space_size();
    if (n > (std::uint64_t{1} << 26)) throw Error("rule space too large to catalog");

    std::vector<std::uint64_t> rep(n);
    std::vector<char> linear(n);
    auto visit = [&](std::uint64_t r) {
        const auto rule = RuleSpec::from_number(colors, offsets, r);
        rep[r] = representative(rule);
        linear[r] = colors == 2 && is_linear(rule).has_value();
    };
    const auto count = static_cast<std::int64_t>(n);
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t r = 0; r < count; ++r) visit(static_cast<std::uint64_t>(r));
    } else {
        for (std::int64_t r = 0; r < count; ++r) visit(static_cast<std::uint64_t>(r));
    }

    RuleCatalog cat;
    cat.space = f;
    std::map<std::uint64_t, std::vector<std::uint64_t>> groups;
    for (std::uint64_t r = 0; r < n; ++r) {
        groups[rep[r]].push_back(r);
        if (linear[r]) cat.linear.push_back(r);
    }
    cat.classes.reserve(groups.size());
    for (auto& [r, members] : groups) {
        cat.classes.push_back({std::move(members), r});
        if (auto w = seeded_wolfram_class(f, r)) cat.wolfram_class.emplace(r, *w);
    }
    return cat;
}

} // namespace

std::uint64_t reflect(const RuleSpec& rule) { return transformed(rule, true, false); }
std::uint64_t conjugate(const RuleSpec& rule) { return transformed(rule, false, true); }
std::uint64_t reflect_conjugate(const RuleSpec& rule) { return transformed(rule, true, true); }

EquivalenceClass equivalence_class(const RuleSpec& rule) {
    std::set<std::uint64_t> m{rule.number(), reflect(rule), conjugate(rule), reflect_conjugate(rule)};
    EquivalenceClass c;
    c.members.assign(m.begin(), m.end());
    c.representative = c.members.front();
    return c;
}

std::uint64_t representative(const RuleSpec& rule) {
    return std::min({rule.number(), reflect(rule), conjugate(rule), reflect_conjugate(rule)});
}

std::optional<Linearity> is_linear(const RuleSpec& rule) {
    if (!rule.binary()) throw Error("linearity is defined for binary rules");
    const std::size_t m = rule.arity();
    Linearity lin;
    lin.toggle = rule.output(0) != 0;
    lin.coefficients.resize(m);
    // Coefficient of cell j is the response to the unit neighborhood at j.
    for (std::size_t j = 0; j < m; ++j)
        lin.coefficients[j] = rule.output(std::size_t{1} << (m - 1 - j)) ^ (lin.toggle ? 1 : 0);
    for (std::size_t n = 0; n < rule.neighborhood_count(); ++n) {
        Cell v = lin.toggle ? 1 : 0;
        for (std::size_t j = 0; j < m; ++j)
            if ((n >> (m - 1 - j)) & 1u) v ^= lin.coefficients[j];
        if (v != rule.output(n)) return std::nullopt;
    }
    return lin;
}

std::optional<WolframClass> seeded_wolfram_class(Family f, std::uint64_t r) {
    using W = WolframClass;
    static const std::map<std::uint64_t, W> eca = [] {
        std::map<std::uint64_t, W> m;
        for (auto x : {0, 8, 32, 40, 128, 136, 160, 168}) m[x] = W::one;
        for (auto x : {1,   2,   3,   4,   5,   6,   7,   9,   10,  11,  12,  13,  14,
                       15,  19,  23,  24,  25,  26,  27,  28,  29,  33,  34,  35,  36,
                       37,  38,  42,  43,  44,  46,  50,  51,  56,  57,  58,  62,  72,
                       73,  74,  76,  77,  78,  94,  104, 108, 130, 132, 134, 138, 140,
                       142, 152, 154, 156, 162, 164, 170, 172, 178, 184, 200, 204, 232})
            m[x] = W::two;
        for (auto x : {18, 22, 30, 45, 60, 90, 105, 122, 126, 146, 150}) m[x] = W::three;
        for (auto x : {41, 54, 106, 110}) m[x] = W::four;
        return m;
    }();
    static const std::map<std::uint64_t, W> pca = {
        {0, W::one}, {8, W::one}, {1, W::two}, {2, W::two}, {3, W::two}, {10, W::two}, {6, W::three}};
    const auto* table = f == Family::eca ? &eca : f == Family::pca ? &pca : nullptr;
    if (!table) return std::nullopt;
    if (auto it = table->find(r); it != table->end()) return it->second;
    return std::nullopt;
}

std::vector<std::uint64_t> RuleCatalog::representatives() const {
    std::vector<std::uint64_t> out;
    out.reserve(classes.size());
    for (const auto& c : classes) out.push_back(c.representative);
    return out;
}

std::size_t RuleCatalog::space_size() const {
    std::size_t n = 0;
    for (const auto& c : classes) n += c.members.size();
    return n;
}

std::uint64_t orbit_count(std::size_t arity) {
    // Tables fixed by a symmetry are free on each orbit of neighborhoods; the
    // complementing symmetries pair an orbit with its image and fix nothing
    // when some orbit is self-paired.
    const std::size_t count = std::size_t{1} << arity;
    auto reverse = [&](std::size_t n) {
        std::size_t r = 0;
        for (std::size_t j = 0; j < arity; ++j)
            if ((n >> j) & 1u) r |= std::size_t{1} << (arity - 1 - j);
        return r;
    };
    auto complement = [&](std::size_t n) { return (count - 1) ^ n; };
    auto fixed = [&](auto&& g, bool complementing) -> std::uint64_t {
        std::vector<char> seen(count);
        std::size_t free = 0;
        for (std::size_t n = 0; n < count; ++n) {
            if (seen[n]) continue;
            if (complementing && g(n) == n) return 0;
            seen[n] = seen[g(n)] = 1;
            ++free;
        }
        if (free >= 64) throw Error("orbit count exceeds 64 bits");
        return std::uint64_t{1} << free;
    };
    const std::uint64_t identity = count >= 64 ? 0 : std::uint64_t{1} << count;
    if (identity == 0) throw Error("orbit count exceeds 64 bits");
    const auto mirror = fixed(reverse, false);
    const auto conj = fixed(complement, true);
    const auto joint = fixed([&](std::size_t n) { return complement(reverse(n)); }, true);
    return (identity + mirror + conj + joint) / 4;
}

RuleCatalog build_catalog_serial(Family f) {
    return make_catalog(2, family_offsets(f), f, false);
}

RuleCatalog build_catalog(Family f) { return make_catalog(2, family_offsets(f), f, true); }

RuleCatalog build_catalog(const std::vector<int>& offsets) {
    const auto probe = RuleSpec::from_number(2, offsets, 0);
    return make_catalog(2, offsets, probe.family(), true);
}

std::vector<std::uint64_t> essential_rules(Family f) { return build_catalog(f).representatives(); }

} // namespace caemu
