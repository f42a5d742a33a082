#include "caemu/search.hpp"

#include "caemu/engine.hpp"
#include "caemu/rulespace.hpp"
#include "caemu/verify.hpp"

#include <algorithm>
#include <set>

namespace caemu {

namespace {

void require_binary_search(const RuleSpec& rule, std::size_t k) {
    if (!rule.binary()) throw Error("compiler search is implemented for binary rules");
    if (k == 0) throw Error("block size must be at least 1");
    if (k > 24) throw Error("block size above 24 is outside the search budget");
}

std::uint64_t evolve_block(const RuleSpec& rule, std::uint64_t block, std::size_t k, std::size_t steps) {
    for (std::size_t t = 0; t < steps; ++t)
        block = packed::step_word_cyclic(rule, block, static_cast<unsigned>(k));
    return block;
}

std::vector<Block> to_blocks(const std::vector<std::uint64_t>& masks, std::size_t k) {
    std::vector<Block> out;
    out.reserve(masks.size());
    for (auto m : masks) out.push_back(bits::unpack(m, k));
    return out;
}

std::vector<std::uint64_t> to_masks(const std::vector<Block>& blocks) {
    std::vector<std::uint64_t> out;
    out.reserve(blocks.size());
    for (const auto& b : blocks) out.push_back(bits::pack(b));
    std::sort(out.begin(), out.end());
    return out;
}

bool contains(const std::vector<std::uint64_t>& sorted, std::uint64_t v) {
    return std::binary_search(sorted.begin(), sorted.end(), v);
}

std::vector<std::uint64_t> set_a(const RuleSpec& rule, std::size_t k) {
    std::vector<std::uint64_t> out;
    const std::uint64_t n = std::uint64_t{1} << k;
    for (std::uint64_t w = 0; w < n; ++w)
        if (evolve_block(rule, w, k, k) == w) out.push_back(w);
    return out;
}

std::vector<std::uint64_t> set_b(const RuleSpec& rule, std::size_t k, const std::vector<std::uint64_t>& a) {
    std::vector<std::uint64_t> out;
    const std::uint64_t n = std::uint64_t{1} << k;
    for (std::uint64_t w = 0; w < n; ++w)
        if (!contains(a, w) && contains(a, evolve_block(rule, w, k, k))) out.push_back(w);
    return out;
}

std::vector<std::uint64_t> set_c(const RuleSpec& rule, std::size_t k, const std::vector<std::uint64_t>& a,
                                 const std::vector<std::uint64_t>& b) {
    std::vector<std::uint64_t> out;
    const std::uint64_t n = std::uint64_t{1} << k;
    for (std::uint64_t w = 0; w < n; ++w)
        if (!contains(a, w) && !contains(b, w) && evolve_block(rule, w, k, 2 * k) == w) out.push_back(w);
    return out;
}

// Probe check on packed codes.
bool probe_passes(const RuleSpec& rule, std::size_t k, const std::vector<Cell>& probe, std::uint64_t code0,
                  std::uint64_t code1) {
    const std::size_t width = probe.size() * k;
    if (width <= 64) {
        std::uint64_t row = 0;
        for (std::size_t i = 0; i < probe.size(); ++i) row |= (probe[i] ? code1 : code0) << (i * k);
        row = evolve_block(rule, row, width, k);
        const std::uint64_t mask = k >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << k) - 1;
        for (std::size_t i = 0; i < probe.size(); ++i) {
            const auto blk = (row >> (i * k)) & mask;
            if (blk != code0 && blk != code1) return false;
        }
        return true;
    }
    packed::Row row;
    row.width = width;
    row.words.assign((width + 63) / 64, 0);
    for (std::size_t i = 0; i < probe.size(); ++i) {
        const auto code = probe[i] ? code1 : code0;
        for (std::size_t j = 0; j < k; ++j)
            if ((code >> j) & 1u) row.set(i * k + j, true);
    }
    for (std::size_t t = 0; t < k; ++t) row = packed::step_cyclic(rule, row);
    for (std::size_t i = 0; i < probe.size(); ++i) {
        std::uint64_t blk = 0;
        for (std::size_t j = 0; j < k; ++j)
            if (row.get(i * k + j)) blk |= std::uint64_t{1} << j;
        if (blk != code0 && blk != code1) return false;
    }
    return true;
}

std::optional<std::uint64_t> induced_number(const RuleSpec& rule, std::uint64_t code0, std::uint64_t code1,
                                            std::size_t k) {
    if (bits::fits(rule, k)) return bits::induced_rule(rule, code0, code1, static_cast<unsigned>(k));
    const Projection p({bits::unpack(code0, k), bits::unpack(code1, k)});
    if (auto r = caemu::induced_rule(rule, p)) return r->number();
    return std::nullopt;
}

} // namespace

std::string_view status_name(Status s) {
    switch (s) {
    case Status::candidate: return "candidate";
    case Status::verified: return "verified";
    case Status::refuted: return "refuted";
    }
    return "candidate";
}

Status parse_status(std::string_view s) {
    if (s == "candidate") return Status::candidate;
    if (s == "verified") return Status::verified;
    if (s == "refuted") return Status::refuted;
    throw Error("unknown record status '" + std::string(s) + "'");
}

bool EmulationRecord::same_class() const {
    const auto offs = family_offsets(family);
    return representative(RuleSpec::from_number(2, offs, emulator)) ==
           representative(RuleSpec::from_number(2, offs, emulated));
}

bool operator<(const EmulationRecord& a, const EmulationRecord& b) {
    auto key = [](const EmulationRecord& r) {
        return std::tuple(static_cast<int>(r.family), r.emulator, r.emulated, r.block_size,
                          r.projection.concatenated(), static_cast<int>(r.status));
    };
    return key(a) < key(b);
}

std::vector<Block> candidate_blocks_a(const RuleSpec& rule, std::size_t k) {
    require_binary_search(rule, k);
    return to_blocks(set_a(rule, k), k);
}

std::vector<Block> candidate_blocks_b(const RuleSpec& rule, std::size_t k, const std::vector<Block>& a) {
    require_binary_search(rule, k);
    return to_blocks(set_b(rule, k, to_masks(a)), k);
}

std::vector<Block> candidate_blocks_c(const RuleSpec& rule, std::size_t k, const std::vector<Block>& a,
                                      const std::vector<Block>& b) {
    require_binary_search(rule, k);
    return to_blocks(set_c(rule, k, to_masks(a), to_masks(b)), k);
}

std::vector<Cell> de_bruijn(unsigned order) {
    if (order == 0 || order > 20) throw Error("De Bruijn order must be in [1, 20]");
    std::vector<Cell> seq;
    std::vector<Cell> a(order + 1, 0);
    // Fredricksen-Kessler-Maiorana: concatenate Lyndon words whose length divides n.
    auto gen = [&](auto&& self, unsigned t, unsigned p) -> void {
        if (t > order) {
            if (order % p == 0) seq.insert(seq.end(), a.begin() + 1, a.begin() + 1 + p);
            return;
        }
        a[t] = a[t - p];
        self(self, t + 1, p);
        for (Cell j = static_cast<Cell>(a[t - p] + 1); j < 2; ++j) {
            a[t] = j;
            self(self, t + 1, t);
        }
    };
    gen(gen, 1, 1);
    return seq;
}

std::vector<Cell> probe_sequence(const RuleSpec& rule, std::size_t k) {
    switch (rule.family()) {
    case Family::eca: return {0, 0, 0, 0, 1, 0, 1, 1, 1, 1, 0, 1};
    case Family::gca: return {0, 0, 0, 0, 1, 0, 0, 1, 1, 0, 1, 0, 1, 1, 1, 1};
    default: break;
    }
    unsigned extra = 0;
    while ((std::size_t{1} << extra) < k) ++extra;
    return de_bruijn(static_cast<unsigned>(rule.arity()) + extra);
}

bool check_candidate(const RuleSpec& rule, std::size_t k, const Block& block0, const Block& block1) {
    require_binary_search(rule, k);
    if (block0.size() != k || block1.size() != k) throw Error("candidate blocks must have length k");
    if (block0 == block1) throw Error("candidate blocks must differ");
    return probe_passes(rule, k, probe_sequence(rule, k), bits::pack(block0), bits::pack(block1));
}

std::vector<EmulationRecord> search_emulations(const RuleSpec& emulator, std::size_t k,
                                               const SearchOptions& options, SearchStats* stats) {
    require_binary_search(emulator, k);
    const auto a = set_a(emulator, k);
    const auto b = set_b(emulator, k, a);
    const auto c = set_c(emulator, k, a, b);

    // Ordered (code for 0, code for 1) pairs.
    std::set<std::pair<std::uint64_t, std::uint64_t>> pairs;
    std::vector<std::uint64_t> ac;
    std::merge(a.begin(), a.end(), c.begin(), c.end(), std::back_inserter(ac));
    for (auto x : ac)
        for (auto y : ac)
            if (x != y) pairs.emplace(x, y);
    for (auto x : b) {
        const auto out = evolve_block(emulator, x, k, k);
        pairs.emplace(x, out);
        pairs.emplace(out, x);
    }

    const auto probe = probe_sequence(emulator, k);
    const Family family = emulator.family();
    std::vector<EmulationRecord> records;
    SearchStats local;
    local.pairs_considered = pairs.size();
    for (const auto& [x, y] : pairs) {
        if (!probe_passes(emulator, k, probe, x, y)) continue;
        ++local.pairs_passing_probe;
        const auto emulated = induced_number(emulator, x, y, k);
        if (!emulated && !options.include_refuted) continue;
        EmulationRecord rec;
        rec.family = family;
        rec.emulator = emulator.number();
        rec.emulated = emulated.value_or(0);
        rec.projection = Projection({bits::unpack(x, k), bits::unpack(y, k)});
        rec.block_size = k;
        rec.time_scale = k;
        rec.status = emulated ? Status::verified : Status::refuted;
        if (emulated) ++local.verified;
        records.push_back(std::move(rec));
    }
    std::sort(records.begin(), records.end());
    if (stats) *stats = local;
    return records;
}

} // namespace caemu
