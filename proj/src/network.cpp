#include "caemu/network.hpp"

#include "caemu/rulespace.hpp"

#include <algorithm>

namespace caemu {

const Edge* EmulationNetwork::edge(std::uint64_t from, std::uint64_t to) const {
    auto it = edges_.find({from, to});
    return it == edges_.end() ? nullptr : &it->second;
}

std::set<std::uint64_t> EmulationNetwork::self_loops() const {
    std::set<std::uint64_t> out;
    for (const auto& [key, e] : edges_)
        if (key.first == key.second) out.insert(key.first);
    return out;
}

void EmulationNetwork::add(const EmulationRecord& r) {
    if (r.status != Status::verified) throw Error("network edges need verified records");
    if (r.family != family_) throw Error("record from another rule space");
    nodes_.insert(r.emulator);
    nodes_.insert(r.emulated);
    auto [it, fresh] = edges_.try_emplace({r.emulator, r.emulated});
    Edge& e = it->second;
    if (fresh) {
        e.emulator = r.emulator;
        e.emulated = r.emulated;
        e.min_block_size = r.block_size;
    }
    e.min_block_size = std::min(e.min_block_size, r.block_size);
    auto pos = std::lower_bound(e.projections.begin(), e.projections.end(), r.projection);
    if (pos == e.projections.end() || !(*pos == r.projection)) e.projections.insert(pos, r.projection);
}

std::size_t EmulationNetwork::record_count() const {
    std::size_t n = 0;
    for (const auto& [key, e] : edges_) n += e.emulation_count();
    return n;
}

bool trivial_target(Family f, std::uint64_t rule) {
    const auto full = RuleSpec::of(f, 0).space_size() - 1;
    return rule == 0 || rule == full;
}

EmulationNetwork build_network(const std::vector<EmulationRecord>& records, const NetworkOptions& opt) {
    EmulationNetwork net(records.empty() ? Family::eca : records.front().family);
    for (const auto& r : records) {
        if (r.status != Status::verified)
            throw Error("unverified record " + std::to_string(r.emulator) + " -> " + std::to_string(r.emulated));
        if (opt.nontrivial_only && trivial_target(r.family, r.emulated)) continue;
        net.add(r);
    }
    return net;
}

std::map<std::uint64_t, std::size_t> degrees(const EmulationNetwork& net, Direction d, bool distinct) {
    std::map<std::uint64_t, std::size_t> deg;
    for (auto n : net.nodes()) deg[n] = 0;
    for (const auto& [key, e] : net.edges()) {
        const auto node = d == Direction::in ? key.second : key.first;
        deg[node] += distinct ? 1 : e.emulation_count();
    }
    return deg;
}

DegreeHistogram degree_by_class(const EmulationNetwork& net, const std::map<std::uint64_t, std::string>& labels,
                                Direction d) {
    DegreeHistogram h;
    for (const auto& [node, deg] : degrees(net, d)) {
        auto it = labels.find(node);
        if (it == labels.end()) throw Error("no class label for rule " + std::to_string(node));
        ++h[it->second][deg];
    }
    return h;
}

std::vector<RankEntry> emulated_ranking(const EmulationNetwork& net, bool collapse) {
    std::map<std::uint64_t, std::size_t> counts;
    const auto offs = family_offsets(net.family());
    for (const auto& [key, e] : net.edges()) {
        auto target = key.second;
        if (collapse) target = representative(RuleSpec::from_number(2, offs, target));
        counts[target] += e.emulation_count();
    }
    std::vector<RankEntry> out;
    for (auto [r, c] : counts) out.push_back({r, c});
    std::stable_sort(out.begin(), out.end(), [](const RankEntry& a, const RankEntry& b) { return a.count > b.count; });
    return out;
}

std::string KBound::statement() const {
    return "|K(" + std::to_string(a) + ") - K(" + std::to_string(b) + ")| < " + std::to_string(c);
}

KBound k_bound(const EmulationRecord& r) {
    if (r.status != Status::verified) throw Error("complexity bound needs a verified record");
    return {r.emulator, r.emulated, r.block_size};
}

void write_dot(std::ostream& os, const EmulationNetwork& net) {
    os << "digraph emulation {\n";
    for (auto n : net.nodes()) os << "  r" << n << " [label=\"" << n << "\"];\n";
    for (const auto& [key, e] : net.edges())
        os << "  r" << key.first << " -> r" << key.second << " [label=\"" << e.min_block_size
           << "\", weight=" << e.emulation_count() << "];\n";
    os << "}\n";
}

void write_graphml(std::ostream& os, const EmulationNetwork& net) {
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
          "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
          "  <key id=\"k\" for=\"edge\" attr.name=\"min_block_size\" attr.type=\"int\"/>\n"
          "  <key id=\"w\" for=\"edge\" attr.name=\"emulation_count\" attr.type=\"int\"/>\n"
          "  <key id=\"p\" for=\"edge\" attr.name=\"projections\" attr.type=\"string\"/>\n"
          "  <graph id=\"G\" edgedefault=\"directed\">\n";
    for (auto n : net.nodes()) os << "    <node id=\"r" << n << "\"/>\n";
    for (const auto& [key, e] : net.edges()) {
        os << "    <edge source=\"r" << key.first << "\" target=\"r" << key.second << "\">\n"
           << "      <data key=\"k\">" << e.min_block_size << "</data>\n"
           << "      <data key=\"w\">" << e.emulation_count() << "</data>\n"
           << "      <data key=\"p\">";
        for (std::size_t i = 0; i < e.projections.size(); ++i) {
            if (i) os << ' ';
            const auto& p = e.projections[i];
            for (std::size_t s = 0; s < p.states(); ++s) os << (s ? "/" : "") << p.code(static_cast<Cell>(s));
        }
        os << "</data>\n    </edge>\n";
    }
    os << "  </graph>\n</graphml>\n";
}

void write_ranking_csv(std::ostream& os, const std::vector<RankEntry>& ranking) {
    os << "rank,rule,emulated_count\n";
    for (std::size_t i = 0; i < ranking.size(); ++i)
        os << i + 1 << ',' << ranking[i].rule << ',' << ranking[i].count << '\n';
}

void write_histogram_csv(std::ostream& os, const DegreeHistogram& h) {
    os << "class,degree,nodes\n";
    for (const auto& [label, bins] : h)
        for (auto [deg, n] : bins) os << label << ',' << deg << ',' << n << '\n';
}

void write_pbm(std::ostream& os, const SpaceTime& st) {
    if (!st.rectangular() || st.height() == 0) throw Error("PBM export needs a rectangular space-time");
    os << "P1\n" << st.row(0).width() << ' ' << st.height() << '\n';
    for (const auto& row : st.rows()) {
        const auto cells = row.cells();
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (cells[i] > 1) throw Error("PBM export needs a binary space-time");
            os << (i ? " " : "") << static_cast<int>(cells[i]);
        }
        os << '\n';
    }
}

} // namespace caemu
