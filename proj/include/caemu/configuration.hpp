#pragma once

#include "caemu/rule.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace caemu {

enum class Boundary { cyclic, lightcone };

// A finite row of cells. Cyclic rows wrap around; lightcone rows only yield
// the cells whose whole neighborhood lies inside the row, so they shrink.
class Configuration {
public:
    Configuration() = default;
    explicit Configuration(std::vector<Cell> cells, Boundary boundary = Boundary::cyclic);

    // Parses a digit string such as "00101"; digits above 9 are not supported.
    static Configuration parse(std::string_view digits, Boundary boundary = Boundary::cyclic);

    std::size_t width() const { return cells_.size(); }
    bool empty() const { return cells_.empty(); }
    Boundary boundary() const { return boundary_; }
    std::span<const Cell> cells() const { return cells_; }
    Cell operator[](std::size_t i) const { return cells_[i]; }

    Configuration with_boundary(Boundary b) const { return Configuration(cells_, b); }
    Configuration rotated(std::ptrdiff_t shift) const;

    std::string to_string() const;

    friend bool operator==(const Configuration&, const Configuration&) = default;

private:
    std::vector<Cell> cells_;
    Boundary boundary_ = Boundary::cyclic;
};

// Rows of an evolution; row t is the configuration at time t.
class SpaceTime {
public:
    SpaceTime() = default;
    explicit SpaceTime(std::vector<Configuration> rows) : rows_(std::move(rows)) {}

    std::size_t steps() const { return rows_.empty() ? 0 : rows_.size() - 1; }
    std::size_t height() const { return rows_.size(); }
    bool empty() const { return rows_.empty(); }
    const Configuration& row(std::size_t t) const { return rows_.at(t); }
    const std::vector<Configuration>& rows() const { return rows_; }
    void push(Configuration c) { rows_.push_back(std::move(c)); }

    // True when every row has the same width.
    bool rectangular() const;

    friend bool operator==(const SpaceTime&, const SpaceTime&) = default;

private:
    std::vector<Configuration> rows_;
};

} // namespace caemu
