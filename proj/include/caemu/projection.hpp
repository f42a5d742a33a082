#pragma once

#include "caemu/configuration.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace caemu {

using Block = std::vector<Cell>;

// The "compiler": one code block of k cells per source state. Code blocks are
// pairwise distinct so that every block decodes to at most one state.
class Projection {
public:
    explicit Projection(std::vector<Block> blocks);

    // Binary projection from two code strings, e.g. binary("00", "11").
    static Projection binary(std::string_view code0, std::string_view code1);
    static Projection identity(int colors);

    std::size_t block_size() const { return blocks_.front().size(); }
    std::size_t states() const { return blocks_.size(); }
    const Block& block(Cell s) const { return blocks_.at(s); }
    const std::vector<Block>& blocks() const { return blocks_; }

    std::optional<Cell> decode(std::span<const Cell> block) const;

    // Digits of the code block for state s, e.g. "0110".
    std::string code(Cell s) const;
    // All code blocks concatenated in state order.
    Block concatenated() const;

    friend bool operator==(const Projection&, const Projection&) = default;
    friend auto operator<=>(const Projection& a, const Projection& b) { return a.blocks_ <=> b.blocks_; }

private:
    std::vector<Block> blocks_;
};

class DecodeFailure : public Error {
public:
    DecodeFailure(std::size_t block_index, std::size_t row = 0);
    std::size_t block_index() const { return block_; }
    std::size_t row() const { return row_; }

private:
    std::size_t block_;
    std::size_t row_;
};

// Replaces each cell by its code block; width grows by the block size.
Configuration block_encode(const Projection& p, const Configuration& c);

// Inverse of block_encode; throws DecodeFailure at the first non-code block.
Configuration block_decode(const Projection& p, const Configuration& c);

// Keeps every k-th row of the space-time and decodes it.
SpaceTime coarse_grain(const SpaceTime& st, const Projection& p);

std::string block_string(std::span<const Cell> block);
Block parse_block(std::string_view digits);

} // namespace caemu
