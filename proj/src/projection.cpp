#include "caemu/projection.hpp"

#include <algorithm>

namespace caemu {

Projection::Projection(std::vector<Block> blocks) : blocks_(std::move(blocks)) {
    if (blocks_.size() < 2) throw Error("projection needs a code block per state");
    const auto k = blocks_.front().size();
    if (k == 0) throw Error("block size must be at least 1");
    for (const auto& b : blocks_)
        if (b.size() != k) throw Error("code blocks must have equal length");
    for (std::size_t i = 0; i < blocks_.size(); ++i)
        for (std::size_t j = i + 1; j < blocks_.size(); ++j)
            if (blocks_[i] == blocks_[j]) throw Error("code blocks must be pairwise distinct");
}

Projection Projection::binary(std::string_view code0, std::string_view code1) {
    return Projection({parse_block(code0), parse_block(code1)});
}

Projection Projection::identity(int colors) {
    std::vector<Block> blocks;
    for (int s = 0; s < colors; ++s) blocks.push_back({static_cast<Cell>(s)});
    return Projection(std::move(blocks));
}

std::optional<Cell> Projection::decode(std::span<const Cell> block) const {
    for (std::size_t s = 0; s < blocks_.size(); ++s)
        if (std::equal(block.begin(), block.end(), blocks_[s].begin(), blocks_[s].end()))
            return static_cast<Cell>(s);
    return std::nullopt;
}

std::string Projection::code(Cell s) const { return block_string(blocks_.at(s)); }

Block Projection::concatenated() const {
    Block out;
    for (const auto& b : blocks_) out.insert(out.end(), b.begin(), b.end());
    return out;
}

DecodeFailure::DecodeFailure(std::size_t block_index, std::size_t row)
    : Error("decode failure at block " + std::to_string(block_index) +
            (row ? " of row " + std::to_string(row) : std::string())),
      block_(block_index), row_(row) {}

Configuration block_encode(const Projection& p, const Configuration& c) {
    std::vector<Cell> out;
    out.reserve(c.width() * p.block_size());
    for (Cell s : c.cells()) {
        if (s >= p.states()) throw Error("cell state has no code block");
        const auto& b = p.block(s);
        out.insert(out.end(), b.begin(), b.end());
    }
    return Configuration(std::move(out), c.boundary());
}

Configuration block_decode(const Projection& p, const Configuration& c) {
    const auto k = p.block_size();
    if (c.width() % k != 0) throw Error("configuration width not divisible by block size");
    std::vector<Cell> out(c.width() / k);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const auto s = p.decode(c.cells().subspan(i * k, k));
        if (!s) throw DecodeFailure(i);
        out[i] = *s;
    }
    return Configuration(std::move(out), c.boundary());
}

SpaceTime coarse_grain(const SpaceTime& st, const Projection& p) {
    const auto k = p.block_size();
    SpaceTime out;
    for (std::size_t t = 0; t < st.height(); t += k) {
        try {
            out.push(block_decode(p, st.row(t)));
        } catch (const DecodeFailure& e) {
            throw DecodeFailure(e.block_index(), t);
        }
    }
    return out;
}

std::string block_string(std::span<const Cell> block) {
    std::string s;
    for (Cell c : block) s.push_back(static_cast<char>('0' + c));
    return s;
}

Block parse_block(std::string_view digits) {
    Block b;
    for (char ch : digits) {
        if (ch < '0' || ch > '9') throw Error("invalid code digit '" + std::string(1, ch) + "'");
        b.push_back(static_cast<Cell>(ch - '0'));
    }
    if (b.empty()) throw Error("empty code block");
    return b;
}

} // namespace caemu
