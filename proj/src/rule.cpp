#include "caemu/rule.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace caemu {

namespace {

// colors^exponent, or 0 when it does not fit in 64 bits.
std::uint64_t checked_pow(std::uint64_t base, std::uint64_t exponent) {
    std::uint64_t r = 1;
    for (std::uint64_t i = 0; i < exponent; ++i) {
        if (r > std::numeric_limits<std::uint64_t>::max() / base) return 0;
        r *= base;
    }
    return r;
}

std::size_t table_size(int colors, std::size_t arity) {
    const auto n = checked_pow(static_cast<std::uint64_t>(colors), arity);
    if (n == 0 || n > (std::uint64_t{1} << 24)) throw Error("neighborhood table too large");
    return static_cast<std::size_t>(n);
}

} // namespace

std::string_view family_name(Family f) {
    switch (f) {
    case Family::pca: return "pca";
    case Family::eca: return "eca";
    case Family::gca: return "gca";
    case Family::custom: return "custom";
    }
    return "custom";
}

Family parse_family(std::string_view name) {
    if (name == "pca") return Family::pca;
    if (name == "eca") return Family::eca;
    if (name == "gca") return Family::gca;
    if (name == "custom") return Family::custom;
    throw Error("unknown rule space '" + std::string(name) + "'");
}

std::vector<int> family_offsets(Family f) {
    switch (f) {
    case Family::pca: return {0, 1};
    case Family::eca: return {-1, 0, 1};
    case Family::gca: return {-1, 0, 1, 2};
    case Family::custom: break;
    }
    throw Error("custom family has no preset template");
}

RuleSpec::RuleSpec(int colors, std::vector<int> offsets, std::vector<Cell> table)
    : colors_(colors), offsets_(std::move(offsets)), table_(std::move(table)) {}

RuleSpec RuleSpec::from_table(int colors, std::vector<int> offsets, std::vector<Cell> table) {
    if (colors < 2 || colors > 256) throw Error("colors must be in [2, 256]");
    if (offsets.empty()) throw Error("empty neighborhood template");
    if (std::adjacent_find(offsets.begin(), offsets.end(), std::greater_equal<>()) != offsets.end())
        throw Error("template offsets must be strictly increasing");
    if (table.size() != table_size(colors, offsets.size()))
        throw Error("rule table has the wrong number of entries");
    for (Cell c : table)
        if (c >= colors) throw Error("rule table entry out of range");
    return RuleSpec(colors, std::move(offsets), std::move(table));
}

RuleSpec RuleSpec::from_number(int colors, std::vector<int> offsets, std::uint64_t number) {
    if (colors < 2 || colors > 256) throw Error("colors must be in [2, 256]");
    const std::size_t n = table_size(colors, offsets.size());
    const std::uint64_t space = checked_pow(static_cast<std::uint64_t>(colors), n);
    if (space != 0 && number >= space)
        throw Error("rule number " + std::to_string(number) + " outside the rule space");
    std::vector<Cell> table(n, 0);
    for (std::size_t i = 0; i < n && number != 0; ++i) {
        table[i] = static_cast<Cell>(number % static_cast<std::uint64_t>(colors));
        number /= static_cast<std::uint64_t>(colors);
    }
    return from_table(colors, std::move(offsets), std::move(table));
}

RuleSpec RuleSpec::of(Family f, std::uint64_t number) {
    return from_number(2, family_offsets(f), number);
}

Family RuleSpec::family() const {
    if (colors_ != 2) return Family::custom;
    for (Family f : {Family::pca, Family::eca, Family::gca})
        if (offsets_ == family_offsets(f)) return f;
    return Family::custom;
}

std::size_t RuleSpec::index_of(std::span<const Cell> neighborhood) const {
    std::size_t idx = 0;
    for (Cell c : neighborhood) idx = idx * static_cast<std::size_t>(colors_) + c;
    return idx;
}

std::vector<Cell> RuleSpec::neighborhood(std::size_t index) const {
    std::vector<Cell> n(arity());
    for (std::size_t j = n.size(); j-- > 0;) {
        n[j] = static_cast<Cell>(index % static_cast<std::size_t>(colors_));
        index /= static_cast<std::size_t>(colors_);
    }
    return n;
}

std::uint64_t RuleSpec::number() const { return encode_table(colors_, table_); }

std::uint64_t RuleSpec::space_size() const {
    const auto n = checked_pow(static_cast<std::uint64_t>(colors_), table_.size());
    if (n == 0) throw Error("rule space size exceeds 64 bits");
    return n;
}

std::vector<Cell> rule_table(const RuleSpec& rule) {
    return {rule.table().begin(), rule.table().end()};
}

std::uint64_t encode_table(int colors, std::span<const Cell> table) {
    std::uint64_t number = 0;
    const auto base = static_cast<std::uint64_t>(colors);
    for (std::size_t i = table.size(); i-- > 0;) {
        if (number > (std::numeric_limits<std::uint64_t>::max() - table[i]) / base)
            throw Error("rule number exceeds 64 bits");
        number = number * base + table[i];
    }
    return number;
}

std::string to_string(const RuleSpec& rule) {
    std::ostringstream out;
    const Family f = rule.family();
    if (f != Family::custom) {
        out << family_name(f) << ' ';
    } else {
        out << "k=" << rule.colors() << " <";
        for (std::size_t i = 0; i < rule.arity(); ++i) out << (i ? "," : "") << rule.offsets()[i];
        out << "> ";
    }
    try {
        out << rule.number();
    } catch (const Error&) {
        out << "(table)";
    }
    return out.str();
}

} // namespace caemu
