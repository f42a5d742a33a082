#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace caemu {

using Cell = std::uint8_t;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Family { pca, eca, gca, custom };

std::string_view family_name(Family f);
Family parse_family(std::string_view name);

// Neighborhood template offsets for the three binary presets.
std::vector<int> family_offsets(Family f);

// A local rule: color count, neighborhood template and the full lookup table.
//
// Table index of a neighborhood (x_1, ..., x_m), listed in template order, is
// sum x_j * colors^(m - j): the first template cell is the most significant
// digit and the all-zero neighborhood is entry 0. The Wolfram rule number is
// the table read as a base-`colors` number with entry 0 as the least
// significant digit.
class RuleSpec {
public:
    static RuleSpec from_number(int colors, std::vector<int> offsets, std::uint64_t number);
    static RuleSpec from_table(int colors, std::vector<int> offsets, std::vector<Cell> table);
    static RuleSpec of(Family f, std::uint64_t number);

    static RuleSpec pca(std::uint64_t number) { return of(Family::pca, number); }
    static RuleSpec eca(std::uint64_t number) { return of(Family::eca, number); }
    static RuleSpec gca(std::uint64_t number) { return of(Family::gca, number); }

    int colors() const { return colors_; }
    std::span<const int> offsets() const { return offsets_; }
    std::size_t arity() const { return offsets_.size(); }
    int lo() const { return offsets_.front(); }
    int hi() const { return offsets_.back(); }
    // Cells lost per lightcone step.
    int span() const { return hi() - lo(); }
    bool binary() const { return colors_ == 2; }
    Family family() const;

    std::size_t neighborhood_count() const { return table_.size(); }
    std::span<const Cell> table() const { return table_; }
    Cell output(std::size_t neighborhood) const { return table_[neighborhood]; }

    std::size_t index_of(std::span<const Cell> neighborhood) const;
    std::vector<Cell> neighborhood(std::size_t index) const;

    // Throws when the table does not fit a 64-bit rule number.
    std::uint64_t number() const;
    // Size of the rule space, colors^(colors^arity), if it fits in 64 bits.
    std::uint64_t space_size() const;

    bool same_space(const RuleSpec& other) const {
        return colors_ == other.colors_ && offsets_ == other.offsets_;
    }

    friend bool operator==(const RuleSpec&, const RuleSpec&) = default;

private:
    RuleSpec(int colors, std::vector<int> offsets, std::vector<Cell> table);

    int colors_;
    std::vector<int> offsets_;
    std::vector<Cell> table_;
};

// Lookup table for a rule number; see RuleSpec for the digit order.
std::vector<Cell> rule_table(const RuleSpec& rule);

// Rebuild a 64-bit rule number from a table in the given space.
std::uint64_t encode_table(int colors, std::span<const Cell> table);

std::string to_string(const RuleSpec& rule);

} // namespace caemu
