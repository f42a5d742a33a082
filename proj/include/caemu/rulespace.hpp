#pragma once

#include "caemu/rule.hpp"

#include <array>
#include <map>
#include <optional>
#include <vector>

namespace caemu {

// Mirror image of the rule: the table evaluated on the reversed
// neighborhood. For asymmetric templates the mirrored template is identified
// with the original one by relabeling (a spatial shift), so the result stays
// in the same space.
std::uint64_t reflect(const RuleSpec& rule);

// Color complement: table(n) = (colors - 1) - table(complement of n).
std::uint64_t conjugate(const RuleSpec& rule);

std::uint64_t reflect_conjugate(const RuleSpec& rule);

struct EquivalenceClass {
    std::vector<std::uint64_t> members;  // sorted, unique
    std::uint64_t representative = 0;    // smallest member

    friend bool operator==(const EquivalenceClass&, const EquivalenceClass&) = default;
};

EquivalenceClass equivalence_class(const RuleSpec& rule);
std::uint64_t representative(const RuleSpec& rule);

// Affine rules over GF(2): table(n) = toggle XOR (XOR of the selected cells).
// The linear rule lists in the literature include the toggled forms (e.g.
// ECA 15, 51, 105), so the constant term is allowed.
struct Linearity {
    std::vector<Cell> coefficients;  // one 0/1 per template offset
    bool toggle = false;
};

std::optional<Linearity> is_linear(const RuleSpec& rule);

enum class WolframClass { one = 1, two = 2, three = 3, four = 4 };

// Published Wolfram classes of the essential ECA and PCA rules, keyed by
// representative. Empty for other spaces.
std::optional<WolframClass> seeded_wolfram_class(Family f, std::uint64_t representative);

struct RuleCatalog {
    Family space = Family::custom;
    std::vector<EquivalenceClass> classes;   // ordered by representative
    std::vector<std::uint64_t> linear;       // sorted, over all rules
    std::map<std::uint64_t, WolframClass> wolfram_class;

    std::vector<std::uint64_t> representatives() const;
    std::size_t space_size() const;
};

// Burnside count of essential rules for a binary template: mean number of
// rule tables fixed by each of the four symmetries.
std::uint64_t orbit_count(std::size_t arity);

// Partition of a binary rule space into symmetry classes. The parallel
// version splits the rule numbers across OpenMP threads; both return the
// same catalog.
RuleCatalog build_catalog_serial(Family f);
RuleCatalog build_catalog(Family f);
RuleCatalog build_catalog(const std::vector<int>& offsets);

std::vector<std::uint64_t> essential_rules(Family f);

} // namespace caemu
