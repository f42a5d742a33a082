#include "caemu/io.hpp"

#include "json.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace caemu {

namespace {

std::uint64_t parse_u64(const std::string& s, const char* what) {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) throw Error(std::string("bad ") + what + " '" + s + "'");
    return v;
}

double parse_double(const std::string& s, const char* what) {
    double v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) throw Error(std::string("bad ") + what + " '" + s + "'");
    return v;
}

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

// Shortest round-trip text for a double.
std::string fmt_double(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

} // namespace

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

std::string record_csv_line(const EmulationRecord& r) {
    if (r.projection.states() != 2) throw Error("CSV records hold binary projections only");
    std::ostringstream os;
    os << r.emulator << ',' << r.emulated << ',' << r.block_size << ',' << r.projection.code(0) << ','
       << r.projection.code(1) << ',' << status_name(r.status);
    return os.str();
}

EmulationRecord parse_record_csv_line(const std::string& line, Family f) {
    const auto cols = split_csv(strip_cr(line));
    if (cols.size() != 6) throw Error("record line needs 6 columns: " + line);
    EmulationRecord r;
    r.family = f;
    r.emulator = parse_u64(cols[0], "emulator");
    r.emulated = parse_u64(cols[1], "emulated");
    r.block_size = parse_u64(cols[2], "block size");
    r.time_scale = r.block_size;
    r.projection = Projection::binary(cols[3], cols[4]);
    if (r.projection.block_size() != r.block_size) throw Error("code length differs from k: " + line);
    r.status = parse_status(cols[5]);
    return r;
}

void write_records_csv(std::ostream& os, const std::vector<EmulationRecord>& records) {
    os << "emulator,emulated,k,code_for_0,code_for_1,status\n";
    for (const auto& r : records) os << record_csv_line(r) << '\n';
}

std::vector<EmulationRecord> read_records_csv(std::istream& is, Family f) {
    std::string line;
    if (!std::getline(is, line) || strip_cr(line) != "emulator,emulated,k,code_for_0,code_for_1,status")
        throw Error("record CSV lacks the expected header");
    std::vector<EmulationRecord> out;
    while (std::getline(is, line))
        if (!strip_cr(line).empty()) out.push_back(parse_record_csv_line(line, f));
    return out;
}

void write_records_json(std::ostream& os, const std::vector<EmulationRecord>& records) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : records) {
        nlohmann::json codes = nlohmann::json::array();
        for (std::size_t s = 0; s < r.projection.states(); ++s) codes.push_back(r.projection.code(static_cast<Cell>(s)));
        arr.push_back({{"space", family_name(r.family)},
                       {"emulator", r.emulator},
                       {"emulated", r.emulated},
                       {"k", r.block_size},
                       {"codes", codes},
                       {"status", status_name(r.status)}});
    }
    os << arr.dump(1) << '\n';
}

std::vector<EmulationRecord> read_records_json(std::istream& is) {
    const auto arr = nlohmann::json::parse(is);
    std::vector<EmulationRecord> out;
    for (const auto& j : arr) {
        EmulationRecord r;
        r.family = parse_family(j.at("space").get<std::string>());
        r.emulator = j.at("emulator").get<std::uint64_t>();
        r.emulated = j.at("emulated").get<std::uint64_t>();
        r.block_size = j.at("k").get<std::size_t>();
        r.time_scale = r.block_size;
        std::vector<Block> blocks;
        for (const auto& c : j.at("codes")) blocks.push_back(parse_block(c.get<std::string>()));
        r.projection = Projection(std::move(blocks));
        r.status = parse_status(j.at("status").get<std::string>());
        out.push_back(std::move(r));
    }
    return out;
}

void write_catalog_csv(std::ostream& os, const RuleCatalog& catalog) {
    os << "representative,members,is_linear,wolfram_class\n";
    for (const auto& c : catalog.classes) {
        os << c.representative << ',';
        for (std::size_t i = 0; i < c.members.size(); ++i) os << (i ? " " : "") << c.members[i];
        const bool lin = std::binary_search(catalog.linear.begin(), catalog.linear.end(), c.representative);
        os << ',' << (lin ? "true" : "false") << ',';
        if (auto it = catalog.wolfram_class.find(c.representative); it != catalog.wolfram_class.end())
            os << static_cast<int>(it->second);
        os << '\n';
    }
}

void write_profiles_csv(std::ostream& os, const std::vector<ComplexityProfile>& profiles) {
    os << "rule,entropy_rate,nc_index,class_label\n";
    for (const auto& p : profiles)
        os << p.rule << ',' << fmt_double(p.entropy_rate) << ',' << fmt_double(p.nc_index) << ',' << p.class_label
           << '\n';
}

std::vector<ComplexityProfile> read_profiles_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || strip_cr(line) != "rule,entropy_rate,nc_index,class_label")
        throw Error("profile CSV lacks the expected header");
    std::vector<ComplexityProfile> out;
    while (std::getline(is, line)) {
        line = strip_cr(line);
        if (line.empty()) continue;
        const auto cols = split_csv(line);
        if (cols.size() != 4) throw Error("profile line needs 4 columns: " + line);
        ComplexityProfile p;
        p.rule = parse_u64(cols[0], "rule");
        p.entropy_rate = parse_double(cols[1], "entropy rate");
        p.nc_index = parse_double(cols[2], "nc index");
        p.class_label = cols[3];
        p.settles_uniform = p.class_label == "1";
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<EmulationRecord> load_records(const std::string& path, Family f) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read " + path);
    if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") return read_records_json(in);
    return read_records_csv(in, f);
}

void save_text(const std::string& path, const std::string& content) {
    const auto tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + path);
        out << content;
        if (!out.flush()) throw Error("write failed for " + path);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) throw Error("cannot replace " + path);
}

} // namespace caemu
