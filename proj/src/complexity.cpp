#include "caemu/complexity.hpp"

#include "caemu/engine.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

namespace caemu {

namespace {

class BitWriter {
public:
    void put(std::uint64_t value, unsigned width) {
        for (unsigned i = width; i-- > 0;) {
            if (fill_ == 0) out_.push_back(0);
            if ((value >> i) & 1u) out_.back() |= static_cast<std::uint8_t>(0x80u >> fill_);
            fill_ = (fill_ + 1) & 7;
        }
    }
    std::vector<std::uint8_t> take() { return std::move(out_); }

private:
    std::vector<std::uint8_t> out_;
    unsigned fill_ = 0;
};

class BitReader {
public:
    explicit BitReader(std::span<const std::uint8_t> in) : in_(in) {}
    std::size_t remaining() const { return in_.size() * 8 - pos_; }
    std::uint64_t get(unsigned width) {
        std::uint64_t v = 0;
        for (unsigned i = 0; i < width; ++i, ++pos_) v = (v << 1) | ((in_[pos_ >> 3] >> (7 - (pos_ & 7))) & 1u);
        return v;
    }

private:
    std::span<const std::uint8_t> in_;
    std::size_t pos_ = 0;
};

unsigned code_width(std::size_t dict_size) {
    return static_cast<unsigned>(std::bit_width(dict_size - 1));
}

// Trie over bytes. Nodes that are dictionary entries carry their code.
struct Trie {
    static constexpr std::uint32_t none = 0xffffffffu;
    std::unordered_map<std::uint64_t, std::uint32_t> child;  // (node << 8 | byte) -> node
    std::vector<std::uint32_t> code;                         // node -> code or none
    std::size_t entries = 0;

    Trie() {
        code.push_back(none);  // root, the empty string
        for (unsigned b = 0; b < 256; ++b) insert_child(0, static_cast<std::uint8_t>(b), true);
    }

    std::uint32_t insert_child(std::uint32_t node, std::uint8_t b, bool entry) {
        const auto key = (std::uint64_t{node} << 8) | b;
        auto it = child.find(key);
        std::uint32_t id;
        if (it == child.end()) {
            id = static_cast<std::uint32_t>(code.size());
            code.push_back(none);
            child.emplace(key, id);
        } else {
            id = it->second;
        }
        if (entry && code[id] == none) code[id] = static_cast<std::uint32_t>(entries++);
        return id;
    }

    void add(std::span<const std::uint8_t> s) {
        std::uint32_t node = 0;
        for (std::size_t i = 0; i < s.size(); ++i) node = insert_child(node, s[i], i + 1 == s.size());
    }

    // Longest entry that prefixes s: (length, code).
    std::pair<std::size_t, std::uint32_t> longest(std::span<const std::uint8_t> s) const {
        std::uint32_t node = 0;
        std::size_t best_len = 0;
        std::uint32_t best = none;
        for (std::size_t i = 0; i < s.size(); ++i) {
            auto it = child.find((std::uint64_t{node} << 8) | s[i]);
            if (it == child.end()) break;
            node = it->second;
            if (code[node] != none) {
                best_len = i + 1;
                best = code[node];
            }
        }
        return {best_len, best};
    }
};

} // namespace

std::vector<std::uint8_t> lzmw_compress(std::span<const std::uint8_t> data) {
    Trie trie;
    BitWriter out;
    std::size_t prev_start = 0, prev_len = 0;
    for (std::size_t i = 0; i < data.size();) {
        const auto [len, code] = trie.longest(data.subspan(i));
        out.put(code, code_width(trie.entries));
        // prev and cur are adjacent in the input, so their concatenation is a
        // slice of it.
        if (prev_len) trie.add(data.subspan(prev_start, prev_len + len));
        prev_start = i;
        prev_len = len;
        i += len;
    }
    return out.take();
}

std::vector<std::uint8_t> lzmw_decompress(std::span<const std::uint8_t> packed) {
    std::vector<std::vector<std::uint8_t>> dict;
    std::map<std::vector<std::uint8_t>, bool> known;
    for (unsigned b = 0; b < 256; ++b) {
        dict.push_back({static_cast<std::uint8_t>(b)});
        known[dict.back()] = true;
    }
    BitReader in(packed);
    std::vector<std::uint8_t> out;
    std::vector<std::uint8_t> prev;
    while (true) {
        const auto w = code_width(dict.size());
        // trailing pad bits are shorter than any code
        if (in.remaining() < w || w == 0) break;
        const auto code = in.get(w);
        if (code >= dict.size()) throw Error("corrupt compressed stream");
        const auto cur = dict[code];
        out.insert(out.end(), cur.begin(), cur.end());
        if (!prev.empty()) {
            auto joined = prev;
            joined.insert(joined.end(), cur.begin(), cur.end());
            if (!known.count(joined)) {
                known[joined] = true;
                dict.push_back(std::move(joined));
            }
        }
        prev = cur;
    }
    return out;
}

std::vector<std::uint8_t> serialize(const SpaceTime& st) {
    Cell top = 0;
    for (const auto& row : st.rows())
        for (Cell c : row.cells()) top = std::max(top, c);
    const unsigned bits = std::max(1u, static_cast<unsigned>(std::bit_width(static_cast<unsigned>(top))));
    BitWriter out;
    for (const auto& row : st.rows())
        for (Cell c : row.cells()) out.put(c, bits);
    return out.take();
}

Configuration gray_initial(std::uint64_t index, std::size_t width) {
    const auto g = index ^ (index >> 1);
    const auto len = static_cast<std::size_t>(std::bit_width(g));
    if (len > width) throw Error("Gray code word longer than the lattice");
    std::vector<Cell> cells(width, 0);
    const auto start = (width - len) / 2;
    for (std::size_t i = 0; i < len; ++i) cells[start + i] = static_cast<Cell>((g >> (len - 1 - i)) & 1u);
    return Configuration(std::move(cells), Boundary::cyclic);
}

double block_entropy(const SpaceTime& st, std::size_t n) {
    if (n == 0) throw Error("block size must be positive");
    if (!st.rectangular()) throw Error("block entropy needs a rectangular space-time");
    const auto h = st.height();
    const auto w = h ? st.row(0).width() : 0;
    if (h < n || w < n) throw Error("space-time smaller than the block");
    std::map<std::vector<Cell>, std::size_t> counts;
    std::vector<Cell> key(n * n);
    std::size_t total = 0;
    for (std::size_t t = 0; t + n <= h; t += n)
        for (std::size_t x = 0; x + n <= w; x += n) {
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) key[i * n + j] = st.row(t + i)[x + j];
            ++counts[key];
            ++total;
        }
    double hsum = 0;
    for (const auto& [k, c] : counts) {
        const double p = static_cast<double>(c) / static_cast<double>(total);
        hsum -= p * std::log2(p);
    }
    // -0.0 and rounding noise
    return std::max(0.0, hsum / static_cast<double>(n * n));
}

double nc_index(std::span<const std::uint8_t> raw) {
    if (raw.empty()) throw Error("nothing to compress");
    const auto packed = lzmw_compress(raw);
    return std::clamp(static_cast<double>(packed.size()) / static_cast<double>(raw.size()), 0.0, 1.0);
}

double nc_index(const SpaceTime& st) {
    const auto raw = serialize(st);
    return nc_index(std::span<const std::uint8_t>(raw));
}

Thresholds Thresholds::parse(const std::string& text) {
    Thresholds t;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        if (trim(line).empty()) continue;
        if (eq == std::string::npos) throw Error("threshold line without '=': " + line);
        const auto key = trim(line.substr(0, eq));
        const auto text_v = trim(line.substr(eq + 1));
        double v = 0;
        auto [end, ec] = std::from_chars(text_v.data(), text_v.data() + text_v.size(), v);
        if (ec != std::errc() || end != text_v.data() + text_v.size() || text_v.empty())
            throw Error("bad threshold value '" + text_v + "'");
        if (key == "nc_low")
            t.nc_low = v;
        else if (key == "nc_high")
            t.nc_high = v;
        else
            throw Error("unknown threshold '" + key + "'");
    }
    if (!(t.nc_low <= t.nc_high)) throw Error("nc_low must not exceed nc_high");
    return t;
}

Thresholds Thresholds::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error("cannot read thresholds from " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse(ss.str());
}

bool ComplexityProfile::complex() const {
    return class_label == "3" || class_label == "4" || class_label == "high";
}

Measurement measure(const RuleSpec& rule, const Configuration& init, const ClassifyOptions& opt) {
    const auto st = evolve(rule, init.with_boundary(Boundary::cyclic), opt.steps);
    Measurement m;
    for (std::size_t n = 1; n <= opt.n_max; ++n) m.entropy_rate = std::max(m.entropy_rate, block_entropy(st, n));
    m.nc_index = nc_index(st);
    const auto& last = st.row(st.steps());
    const auto cells = last.cells();
    const bool uniform = std::all_of(cells.begin(), cells.end(), [&](Cell c) { return c == cells[0]; });
    m.settles_uniform = uniform && step(rule, last) == last;
    return m;
}

std::string label_for(Family f, std::uint64_t rule, const Measurement& m, const Thresholds& t) {
    if (f == Family::eca || f == Family::pca) {
        if (m.nc_index < t.nc_high) return m.settles_uniform ? "1" : "2";
        const auto rep = representative(RuleSpec::of(f, rule));
        const auto seeded = seeded_wolfram_class(f, rep);
        return seeded == WolframClass::four ? "4" : "3";
    }
    if (m.nc_index < t.nc_low) return "low";
    if (m.nc_index < t.nc_high) return "medium";
    return "high";
}

namespace {

Measurement combine(Measurement a, const Measurement& b) {
    a.entropy_rate = std::max(a.entropy_rate, b.entropy_rate);
    a.nc_index = std::max(a.nc_index, b.nc_index);
    a.settles_uniform = a.settles_uniform && b.settles_uniform;
    return a;
}

ComplexityProfile finish(const RuleSpec& rule, const Measurement& m, const Thresholds& t) {
    ComplexityProfile p;
    p.rule = rule.number();
    p.entropy_rate = m.entropy_rate;
    p.nc_index = m.nc_index;
    p.settles_uniform = m.settles_uniform;
    p.class_label = label_for(rule.family(), p.rule, m, t);
    return p;
}

void check_budget(const ClassifyOptions& opt) {
    if (!opt.width || !opt.steps || !opt.n_inits || !opt.n_max) throw Error("classification budgets must be positive");
}

} // namespace

ComplexityProfile classify_serial(const RuleSpec& rule, const ClassifyOptions& opt, const Thresholds& t) {
    check_budget(opt);
    Measurement acc{0, 0, true};
    for (std::size_t i = 0; i < opt.n_inits; ++i) acc = combine(acc, measure(rule, gray_initial(i, opt.width), opt));
    return finish(rule, acc, t);
}

ComplexityProfile classify(const RuleSpec& rule, const ClassifyOptions& opt, const Thresholds& t) {
    check_budget(opt);
    std::vector<Measurement> parts(opt.n_inits);
    const auto n = static_cast<std::int64_t>(opt.n_inits);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < n; ++i)
        parts[static_cast<std::size_t>(i)] = measure(rule, gray_initial(static_cast<std::uint64_t>(i), opt.width), opt);
    Measurement acc{0, 0, true};
    for (const auto& m : parts) acc = combine(acc, m);
    return finish(rule, acc, t);
}

std::vector<ComplexityProfile> classify_space(Family f, const ClassifyOptions& opt, const Thresholds& t) {
    const auto reps = essential_rules(f);
    std::vector<ComplexityProfile> out(reps.size());
    const auto n = static_cast<std::int64_t>(reps.size());
    // rules are independent; the per-rule loop stays serial inside
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < n; ++i)
        out[static_cast<std::size_t>(i)] = classify_serial(RuleSpec::of(f, reps[static_cast<std::size_t>(i)]), opt, t);
    return out;
}

} // namespace caemu

namespace caemu {

Calibration calibrate(const std::vector<ComplexityProfile>& profiles, const std::vector<WolframClass>& truth) {
    if (profiles.size() != truth.size() || profiles.empty()) throw Error("calibration needs one class per profile");
    auto is_complex = [](WolframClass w) { return w == WolframClass::three || w == WolframClass::four; };
    std::vector<double> cuts{0.0};
    for (const auto& p : profiles) cuts.push_back(p.nc_index);
    cuts.push_back(2.0);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    Calibration best;
    best.total = profiles.size();
    double best_gap = -1;
    // candidate thresholds: midpoints between consecutive distinct values
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double theta = (cuts[i] + cuts[i + 1]) / 2;
        std::size_t agree = 0;
        for (std::size_t j = 0; j < profiles.size(); ++j)
            agree += (profiles[j].nc_index >= theta) == is_complex(truth[j]);
        const double gap = cuts[i + 1] - cuts[i];
        if (agree > best.agreement || (agree == best.agreement && gap > best_gap)) {
            best.agreement = agree;
            best.thresholds.nc_high = theta;
            best_gap = gap;
        }
    }
    double max1 = 0, min2 = 1;
    for (std::size_t j = 0; j < profiles.size(); ++j) {
        if (truth[j] == WolframClass::one) max1 = std::max(max1, profiles[j].nc_index);
        if (truth[j] == WolframClass::two) min2 = std::min(min2, profiles[j].nc_index);
    }
    best.thresholds.nc_low = std::min((max1 + min2) / 2, best.thresholds.nc_high);
    return best;
}

std::size_t split_agreement(Family f, const std::vector<ComplexityProfile>& profiles) {
    std::size_t agree = 0;
    for (const auto& p : profiles) {
        const auto w = seeded_wolfram_class(f, representative(RuleSpec::of(f, p.rule)));
        if (!w) continue;
        const bool truth = *w == WolframClass::three || *w == WolframClass::four;
        agree += p.complex() == truth;
    }
    return agree;
}

} // namespace caemu
