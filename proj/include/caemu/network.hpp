#pragma once

#include "caemu/complexity.hpp"
#include "caemu/search.hpp"

#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

namespace caemu {

struct Edge {
    std::uint64_t emulator = 0;
    std::uint64_t emulated = 0;
    std::size_t min_block_size = 0;
    std::vector<Projection> projections;  // distinct, sorted

    std::size_t emulation_count() const { return projections.size(); }
    friend bool operator==(const Edge&, const Edge&) = default;
};

class EmulationNetwork {
public:
    explicit EmulationNetwork(Family f = Family::eca) : family_(f) {}

    Family family() const { return family_; }
    const std::set<std::uint64_t>& nodes() const { return nodes_; }
    const std::map<std::pair<std::uint64_t, std::uint64_t>, Edge>& edges() const { return edges_; }
    const Edge* edge(std::uint64_t from, std::uint64_t to) const;
    std::set<std::uint64_t> self_loops() const;

    void add_node(std::uint64_t r) { nodes_.insert(r); }
    void add(const EmulationRecord& r);

    std::size_t record_count() const;
    friend bool operator==(const EmulationNetwork&, const EmulationNetwork&) = default;

private:
    Family family_;
    std::set<std::uint64_t> nodes_;
    std::map<std::pair<std::uint64_t, std::uint64_t>, Edge> edges_;
};

struct NetworkOptions {
    // drop records whose emulated rule is the zero rule or its complement
    bool nontrivial_only = false;
};

// Zero rule and the all-ones rule of the space.
bool trivial_target(Family f, std::uint64_t rule);

// Rejects any record that is not verified.
EmulationNetwork build_network(const std::vector<EmulationRecord>& records, const NetworkOptions& opt = {});

enum class Direction { in, out };

// Class label -> (degree -> number of nodes). Degree counts emulations: for
// `in` the number of (emulator, projection) records hitting the node, for
// `out` the records it performs.
using DegreeHistogram = std::map<std::string, std::map<std::size_t, std::size_t>>;
DegreeHistogram degree_by_class(const EmulationNetwork& net, const std::map<std::uint64_t, std::string>& labels,
                                Direction d);

// Per-node degree. `distinct` counts neighbouring rules instead of records.
std::map<std::uint64_t, std::size_t> degrees(const EmulationNetwork& net, Direction d, bool distinct = false);

struct RankEntry {
    std::uint64_t rule = 0;
    std::size_t count = 0;
    friend bool operator==(const RankEntry&, const RankEntry&) = default;
};

// Rules by total incoming emulation count, descending, ties by rule number.
// With `collapse`, targets are first replaced by their symmetry
// representative.
std::vector<RankEntry> emulated_ranking(const EmulationNetwork& net, bool collapse = false);

// |K(A) - K(B)| < c with c the block size of the record.
struct KBound {
    std::uint64_t a = 0, b = 0;
    std::size_t c = 0;
    std::string statement() const;
};
KBound k_bound(const EmulationRecord& r);

void write_dot(std::ostream& os, const EmulationNetwork& net);
void write_graphml(std::ostream& os, const EmulationNetwork& net);
void write_ranking_csv(std::ostream& os, const std::vector<RankEntry>& ranking);
void write_histogram_csv(std::ostream& os, const DegreeHistogram& h);

// Plain PBM (P1): one row per time step, 1 = black.
void write_pbm(std::ostream& os, const SpaceTime& st);

} // namespace caemu
