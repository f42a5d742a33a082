#include "caemu/configuration.hpp"

#include <algorithm>

namespace caemu {

Configuration::Configuration(std::vector<Cell> cells, Boundary boundary)
    : cells_(std::move(cells)), boundary_(boundary) {
    if (cells_.empty()) throw Error("configuration must be nonempty");
}

Configuration Configuration::parse(std::string_view digits, Boundary boundary) {
    std::vector<Cell> cells;
    cells.reserve(digits.size());
    for (char ch : digits) {
        if (ch < '0' || ch > '9') throw Error("invalid cell digit '" + std::string(1, ch) + "'");
        cells.push_back(static_cast<Cell>(ch - '0'));
    }
    return Configuration(std::move(cells), boundary);
}

Configuration Configuration::rotated(std::ptrdiff_t shift) const {
    const auto w = static_cast<std::ptrdiff_t>(cells_.size());
    const auto s = ((shift % w) + w) % w;
    std::vector<Cell> out(cells_.size());
    std::rotate_copy(cells_.begin(), cells_.begin() + s, cells_.end(), out.begin());
    return Configuration(std::move(out), boundary_);
}

std::string Configuration::to_string() const {
    std::string s;
    s.reserve(cells_.size());
    for (Cell c : cells_) s.push_back(static_cast<char>(c < 10 ? '0' + c : 'a' + (c - 10)));
    return s;
}

bool SpaceTime::rectangular() const {
    return std::all_of(rows_.begin(), rows_.end(),
                       [&](const Configuration& r) { return r.width() == rows_.front().width(); });
}

} // namespace caemu
