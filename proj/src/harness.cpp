#include "caemu/harness.hpp"

#include "caemu/io.hpp"
#include "caemu/rulespace.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace caemu {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    const auto b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::uint64_t fnv1a(const std::string& bytes, std::size_t n) {
    std::uint64_t h = 1469598103934665603ull;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= static_cast<unsigned char>(bytes[i]);
        h *= 1099511628211ull;
    }
    return h;
}

void put_le(std::string& out, std::uint64_t v, int bytes) {
    for (int i = 0; i < bytes; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint64_t get_le(const std::string& in, std::size_t pos, int bytes) {
    std::uint64_t v = 0;
    for (int i = 0; i < bytes; ++i) v |= std::uint64_t{static_cast<unsigned char>(in[pos + i])} << (8 * i);
    return v;
}

constexpr char magic[] = "CAEMUCK1";

std::uint64_t to_u64(const std::string& s) {
    std::uint64_t v = 0;
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || end != s.data() + s.size() || s.empty()) throw Error("bad number '" + s + "'");
    return v;
}

} // namespace

Config Config::parse(const std::string& text) {
    Config c;
    std::istringstream in(text);
    std::string line;
    std::size_t no = 0;
    while (std::getline(in, line)) {
        ++no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw Error("config line " + std::to_string(no) + " has no '='");
        c.values_[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return c;
}

Config Config::load(const std::string& path) { return parse(read_file(path)); }

std::string Config::get(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::uint64_t v = 0;
    const auto& s = it->second;
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || end != s.data() + s.size() || s.empty())
        throw Error("config value for '" + key + "' is not a non-negative integer");
    return v;
}

std::size_t resolve_workers(std::size_t configured) {
    if (const char* env = std::getenv("CAEMU_WORKERS"); env && *env) {
        char* end = nullptr;
        const auto v = std::strtoull(env, &end, 10);
        if (*end != '\0' || v == 0) throw Error("CAEMU_WORKERS must be a positive integer");
        return static_cast<std::size_t>(v);
    }
    return std::max<std::size_t>(1, configured);
}

std::string Checkpoint::serialize() const {
    std::string out(magic, 8);
    put_le(out, static_cast<std::uint64_t>(family), 1);
    put_le(out, done.size(), 8);
    for (const auto& [rule, k] : done) {
        put_le(out, rule, 8);
        put_le(out, k, 4);
    }
    put_le(out, fnv1a(out, out.size()), 8);
    return out;
}

Checkpoint Checkpoint::deserialize(const std::string& bytes) {
    auto corrupt = [](const std::string& why) { return Error("corrupt checkpoint: " + why); };
    if (bytes.size() < 8 + 1 + 8 + 8) throw corrupt("truncated header");
    if (std::memcmp(bytes.data(), magic, 8) != 0) throw corrupt("bad magic");
    const auto count = get_le(bytes, 9, 8);
    if (count > (bytes.size() - 25) / 12 || bytes.size() != 25 + count * 12) throw corrupt("length mismatch");
    const auto body = bytes.size() - 8;
    if (get_le(bytes, body, 8) != fnv1a(bytes, body)) throw corrupt("checksum mismatch");
    const auto fam = get_le(bytes, 8, 1);
    if (fam > static_cast<std::uint64_t>(Family::custom)) throw corrupt("unknown rule space");
    Checkpoint cp;
    cp.family = static_cast<Family>(fam);
    for (std::uint64_t i = 0; i < count; ++i) {
        const std::size_t pos = 17 + i * 12;
        cp.done.emplace(get_le(bytes, pos, 8), static_cast<std::size_t>(get_le(bytes, pos + 8, 4)));
    }
    return cp;
}

void Checkpoint::save(const std::string& path) const { save_text(path, serialize()); }

std::optional<Checkpoint> Checkpoint::load(const std::string& path) {
    if (!std::filesystem::exists(path)) return std::nullopt;
    return deserialize(read_file(path));
}

std::vector<std::uint64_t> job_rules(const SearchJob& job) {
    if (!job.rules.empty()) {
        auto r = job.rules;
        std::sort(r.begin(), r.end());
        r.erase(std::unique(r.begin(), r.end()), r.end());
        const auto size = RuleSpec::of(job.space, 0).space_size();
        for (auto x : r)
            if (x >= size) throw Error("rule " + std::to_string(x) + " outside the space");
        return r;
    }
    return essential_rules(job.space);
}

namespace {

struct Journal {
    std::map<GridCell, std::set<EmulationRecord>> records;
    std::set<GridCell> done;
    std::vector<std::string> valid_lines;
    bool torn = false;
};

Journal read_journal(const std::string& path, Family f) {
    Journal j;
    if (!std::filesystem::exists(path)) return j;
    std::ifstream in(path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    const std::string text = read_file(path);
    const bool ends_clean = text.empty() || text.back() == '\n';
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const bool last = i + 1 == lines.size();
        try {
            const auto& l = lines[i];
            if (l.rfind("R,", 0) == 0) {
                auto r = parse_record_csv_line(l.substr(2), f);
                if (last && !ends_clean) throw Error("torn");
                j.records[{r.emulator, r.block_size}].insert(std::move(r));
            } else if (l.rfind("D,", 0) == 0) {
                const auto cols = split_csv(l.substr(2));
                if (cols.size() != 3 || (last && !ends_clean)) throw Error("torn");
                const GridCell cell{to_u64(cols[0]), to_u64(cols[1])};
                const auto n = to_u64(cols[2]);
                if (j.records[cell].size() != n)
                    throw Error("journal: cell " + cols[0] + "/" + cols[1] + " has the wrong record count");
                j.done.insert(cell);
            } else {
                throw Error("torn");
            }
            j.valid_lines.push_back(l);
        } catch (const Error& e) {
            if (!last) throw Error(std::string("corrupt journal ") + path + ": " + e.what());
            j.torn = true;  // interrupted mid-write; the cell reruns
        } catch (const std::exception&) {
            if (!last) throw Error("corrupt journal " + path);
            j.torn = true;
        }
    }
    return j;
}

} // namespace

std::vector<EmulationRecord> search_grid(Family f, const std::vector<std::uint64_t>& rules, std::size_t k_min,
                                         std::size_t k_max, std::size_t workers) {
    if (k_min == 0 || k_min > k_max) throw Error("empty block size range");
    std::vector<GridCell> grid;
    for (auto r : rules)
        for (auto k = k_min; k <= k_max; ++k) grid.emplace_back(r, k);
    std::vector<std::vector<EmulationRecord>> parts(grid.size());
    const auto n = static_cast<std::int64_t>(grid.size());
#pragma omp parallel for schedule(dynamic) num_threads(static_cast<int>(std::max<std::size_t>(1, workers)))
    for (std::int64_t i = 0; i < n; ++i) {
        const auto& [rule, k] = grid[static_cast<std::size_t>(i)];
        parts[static_cast<std::size_t>(i)] = search_emulations(RuleSpec::of(f, rule), k);
    }
    std::vector<EmulationRecord> out;
    for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    std::sort(out.begin(), out.end());
    return out;
}

SearchSummary run_search(const SearchJob& job) {
    const auto t0 = std::chrono::steady_clock::now();
    if (job.k_min == 0 || job.k_min > job.k_max) throw Error("empty block size range");
    if (job.workers == 0) throw Error("workers must be at least 1");
    if (job.checkpoint_path.empty() || job.output_path.empty()) throw Error("checkpoint and output paths are required");

    const auto rules = job_rules(job);
    std::vector<GridCell> grid;
    for (auto r : rules)
        for (auto k = job.k_min; k <= job.k_max; ++k) grid.emplace_back(r, k);

    const auto journal_path = job.checkpoint_path + ".journal";
    Checkpoint cp;
    cp.family = job.space;
    if (auto loaded = Checkpoint::load(job.checkpoint_path)) {
        if (loaded->family != job.space) throw Error("checkpoint belongs to another rule space");
        cp = *loaded;
    }
    auto journal = read_journal(journal_path, job.space);
    for (const auto& cell : cp.done)
        if (!journal.done.count(cell))
            throw Error("checkpoint lists cell " + std::to_string(cell.first) + "/" + std::to_string(cell.second) +
                        " that the journal does not hold");
    // the journal may be ahead of the last checkpoint write
    cp.done.insert(journal.done.begin(), journal.done.end());
    if (journal.torn) {
        std::string clean;
        for (const auto& l : journal.valid_lines) clean += l + '\n';
        save_text(journal_path, clean);
    }

    SearchSummary summary;
    summary.cells_total = grid.size();
    std::vector<GridCell> pending;
    for (const auto& c : grid) {
        if (cp.done.count(c))
            ++summary.cells_resumed;
        else
            pending.push_back(c);
    }
    if (job.stop_after && pending.size() > job.stop_after) pending.resize(job.stop_after);

    std::ofstream jout(journal_path, std::ios::app | std::ios::binary);
    if (!jout) throw Error("cannot append to " + journal_path);
    std::size_t since_save = 0;
    const auto n = static_cast<std::int64_t>(pending.size());
    const Family fam = job.space;
    std::string failure;
#pragma omp parallel for schedule(dynamic) num_threads(static_cast<int>(job.workers))
    for (std::int64_t i = 0; i < n; ++i) {
        const auto cell = pending[static_cast<std::size_t>(i)];
        std::vector<EmulationRecord> recs;
        try {
            recs = search_emulations(RuleSpec::of(fam, cell.first), cell.second);
        } catch (const std::exception& e) {
#pragma omp critical(caemu_journal)
            failure = e.what();
            continue;
        }
        std::string chunk;
        for (const auto& r : recs) chunk += "R," + record_csv_line(r) + '\n';
        chunk += "D," + std::to_string(cell.first) + ',' + std::to_string(cell.second) + ',' +
                 std::to_string(recs.size()) + '\n';
#pragma omp critical(caemu_journal)
        {
            jout << chunk;
            jout.flush();
            cp.done.insert(cell);
            if (++since_save >= 64) {
                cp.save(job.checkpoint_path);
                since_save = 0;
            }
        }
    }
    jout.close();
    cp.save(job.checkpoint_path);
    if (!failure.empty()) throw Error("search failed: " + failure);

    for (const auto& c : grid) summary.cells_completed += cp.done.count(c);
    summary.finished = summary.cells_completed == grid.size();
    if (summary.finished) {
        // sort-merge from the journal, the single source of truth
        const auto final_journal = read_journal(journal_path, job.space);
        std::set<GridCell> in_grid(grid.begin(), grid.end());
        std::vector<EmulationRecord> all;
        for (const auto& [cell, recs] : final_journal.records)
            if (in_grid.count(cell) && final_journal.done.count(cell)) all.insert(all.end(), recs.begin(), recs.end());
        std::sort(all.begin(), all.end());
        summary.records = all.size();
        std::ostringstream csv;
        write_records_csv(csv, all);
        save_text(job.output_path, csv.str());
        if (!job.json_path.empty()) {
            std::ostringstream js;
            write_records_json(js, all);
            save_text(job.json_path, js.str());
        }
    }
    summary.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return summary;
}

std::vector<CumulativePoint> cumulative_emulators(const std::vector<EmulationRecord>& records) {
    if (records.empty()) return {};
    std::size_t kmin = records.front().block_size, kmax = kmin;
    for (const auto& r : records) {
        kmin = std::min(kmin, r.block_size);
        kmax = std::max(kmax, r.block_size);
    }
    std::vector<CumulativePoint> out;
    for (auto k = kmin; k <= kmax; ++k) {
        std::set<std::uint64_t> any, nontrivial;
        for (const auto& r : records) {
            if (r.block_size > k) continue;
            any.insert(r.emulator);
            if (!trivial_target(r.family, r.emulated)) nontrivial.insert(r.emulator);
        }
        out.push_back({k, any.size(), nontrivial.size()});
    }
    return out;
}

std::vector<CollapsePoint> collapse_curve(const std::vector<EmulationRecord>& records) {
    std::map<std::size_t, std::map<std::uint64_t, std::pair<std::size_t, std::set<std::uint64_t>>>> by_k;
    for (const auto& r : records) {
        auto& slot = by_k[r.block_size][r.emulator];
        ++slot.first;
        slot.second.insert(r.emulated);
    }
    std::vector<CollapsePoint> out;
    for (const auto& [k, rules] : by_k) {
        double recs = 0, distinct = 0;
        for (const auto& [rule, slot] : rules) {
            recs += static_cast<double>(slot.first);
            distinct += static_cast<double>(slot.second.size());
        }
        const auto m = static_cast<double>(rules.size());
        out.push_back({k, recs / m, distinct / m});
    }
    return out;
}

CompilerStats compiler_stats(const Projection& p) {
    CompilerStats s;
    const auto& a = p.block(0);
    const auto& b = p.block(1);
    for (std::size_t i = 0; i < a.size(); ++i) s.code_hamming += a[i] != b[i];
    SpaceTime st;
    st.push(Configuration(p.concatenated(), Boundary::cyclic));
    s.entropy = block_entropy(st, 1);
    s.nc = nc_index(st);
    return s;
}

std::optional<std::size_t> compiler_distance(const Projection& a, const Projection& b) {
    const auto x = a.concatenated();
    const auto y = b.concatenated();
    if (x.size() != y.size()) return std::nullopt;
    std::size_t d = 0;
    for (std::size_t i = 0; i < x.size(); ++i) d += x[i] != y[i];
    return d;
}

namespace {

std::map<std::uint64_t, std::string> labels_for(Family f, const std::vector<ComplexityProfile>& profiles,
                                                const std::set<std::uint64_t>& rules) {
    std::map<std::uint64_t, std::string> by_rule;
    for (const auto& p : profiles) by_rule[p.rule] = p.class_label;
    std::map<std::uint64_t, std::string> out;
    for (auto r : rules) {
        auto it = by_rule.find(r);
        if (it == by_rule.end()) it = by_rule.find(representative(RuleSpec::of(f, r)));
        if (it == by_rule.end()) throw Error("profiles lack rule " + std::to_string(r));
        out[r] = it->second;
    }
    return out;
}

std::string join(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

} // namespace

std::vector<std::string> report(const std::string& kind, const ReportInputs& in) {
    static const std::set<std::string> kinds{"network", "ranking", "degree", "frequency-curves", "compiler-stats"};
    if (!kinds.count(kind)) throw Error("unknown report kind '" + kind + "'");
    const bool needs_profiles = kind == "degree" || kind == "frequency-curves" || kind == "compiler-stats";
    std::vector<std::string> missing;
    if (in.records_path.empty() || !std::filesystem::exists(in.records_path))
        missing.push_back("records (" + (in.records_path.empty() ? std::string("--records") : in.records_path) + ")");
    if (needs_profiles && (in.profiles_path.empty() || !std::filesystem::exists(in.profiles_path)))
        missing.push_back("profiles (" + (in.profiles_path.empty() ? std::string("--profiles") : in.profiles_path) +
                          ")");
    if (!missing.empty()) {
        std::string msg = "report " + kind + " is missing required inputs:";
        for (const auto& m : missing) msg += "\n  " + m;
        throw Error(msg);
    }
    std::filesystem::create_directories(in.out_dir);

    auto records = load_records(in.records_path, in.space);
    std::vector<ComplexityProfile> profiles;
    if (needs_profiles) {
        std::ifstream pf(in.profiles_path);
        profiles = read_profiles_csv(pf);
    }
    std::vector<EmulationRecord> kept;
    for (auto& r : records)
        if (r.status == Status::verified && !(in.nontrivial_only && trivial_target(r.family, r.emulated)))
            kept.push_back(std::move(r));
    std::sort(kept.begin(), kept.end());
    const auto net = build_network(kept);

    std::vector<std::string> written;
    auto emit = [&](const std::string& name, const std::string& body) {
        const auto path = join(in.out_dir, name);
        save_text(path, body);
        written.push_back(path);
    };

    if (kind == "network") {
        std::ostringstream dot, gml;
        write_dot(dot, net);
        write_graphml(gml, net);
        emit("network.dot", dot.str());
        emit("network.graphml", gml.str());
    } else if (kind == "ranking") {
        std::ostringstream raw, collapsed;
        write_ranking_csv(raw, emulated_ranking(net, false));
        write_ranking_csv(collapsed, emulated_ranking(net, true));
        emit("ranking.csv", raw.str());
        emit("ranking_collapsed.csv", collapsed.str());
    } else if (kind == "degree") {
        const auto labels = labels_for(in.space, profiles, net.nodes());
        std::ostringstream din, dout;
        write_histogram_csv(din, degree_by_class(net, labels, Direction::in));
        write_histogram_csv(dout, degree_by_class(net, labels, Direction::out));
        emit("degree_in.csv", din.str());
        emit("degree_out.csv", dout.str());
    } else if (kind == "frequency-curves") {
        std::ostringstream cum, grp, col;
        cum << "k,emulators,emulators_nontrivial\n";
        for (const auto& p : cumulative_emulators(kept)) cum << p.k << ',' << p.emulators << ',' << p.emulators_nontrivial << '\n';
        std::set<std::uint64_t> emulators;
        for (const auto& r : kept) emulators.insert(r.emulator);
        const auto labels = labels_for(in.space, profiles, emulators);
        std::map<std::pair<std::size_t, std::string>, std::size_t> freq;
        for (const auto& r : kept) ++freq[{r.block_size, labels.at(r.emulator)}];
        grp << "k,group,records\n";
        for (const auto& [key, c] : freq) grp << key.first << ',' << key.second << ',' << c << '\n';
        col << "k,mean_records,mean_distinct\n";
        for (const auto& p : collapse_curve(kept)) col << p.k << ',' << p.mean_records << ',' << p.mean_distinct << '\n';
        emit("cumulative_emulators.csv", cum.str());
        emit("frequency_by_group.csv", grp.str());
        emit("collapse.csv", col.str());
    } else {
        std::set<std::uint64_t> rules;
        for (const auto& r : kept) {
            rules.insert(r.emulator);
            rules.insert(r.emulated);
        }
        const auto labels = labels_for(in.space, profiles, rules);
        std::map<std::uint64_t, double> nc;
        for (const auto& p : profiles) nc[p.rule] = p.nc_index;
        auto nc_of = [&](std::uint64_t r) {
            auto it = nc.find(r);
            if (it == nc.end()) it = nc.find(representative(RuleSpec::of(in.space, r)));
            return it->second;
        };
        // mean distance to the other compilers of the same block size
        std::map<std::size_t, std::vector<std::size_t>> by_k;
        for (std::size_t i = 0; i < kept.size(); ++i) by_k[kept[i].block_size].push_back(i);
        std::vector<double> mean_dist(kept.size(), 0);
        std::map<std::pair<std::size_t, std::size_t>, std::size_t> hist;
        for (const auto& [k, idx] : by_k) {
            std::vector<std::uint64_t> packed(idx.size());
            for (std::size_t a = 0; a < idx.size(); ++a) {
                const auto cat = kept[idx[a]].projection.concatenated();
                for (std::size_t j = 0; j < cat.size() && j < 64; ++j)
                    if (cat[j]) packed[a] |= std::uint64_t{1} << j;
            }
            std::vector<std::size_t> sum(idx.size(), 0);
            for (std::size_t a = 0; a < idx.size(); ++a)
                for (std::size_t b = a + 1; b < idx.size(); ++b) {
                    const auto d = 2 * k <= 64 ? static_cast<std::size_t>(std::popcount(packed[a] ^ packed[b]))
                                               : *compiler_distance(kept[idx[a]].projection, kept[idx[b]].projection);
                    sum[a] += d;
                    sum[b] += d;
                    ++hist[{k, d}];
                }
            for (std::size_t a = 0; a < idx.size(); ++a)
                mean_dist[idx[a]] = idx.size() > 1 ? static_cast<double>(sum[a]) / static_cast<double>(idx.size() - 1) : 0;
        }
        std::ostringstream st, pairs;
        st << "emulator,emulated,k,code_for_0,code_for_1,code_hamming,compiler_entropy,compiler_nc,"
              "mean_pair_distance,emulator_class,emulated_class,emulator_nc,emulated_nc\n";
        for (std::size_t i = 0; i < kept.size(); ++i) {
            const auto& r = kept[i];
            const auto s = compiler_stats(r.projection);
            st << r.emulator << ',' << r.emulated << ',' << r.block_size << ',' << r.projection.code(0) << ','
               << r.projection.code(1) << ',' << s.code_hamming << ',' << s.entropy << ',' << s.nc << ','
               << mean_dist[i] << ',' << labels.at(r.emulator) << ',' << labels.at(r.emulated) << ','
               << nc_of(r.emulator) << ',' << nc_of(r.emulated) << '\n';
        }
        pairs << "k,distance,pairs\n";
        for (const auto& [key, c] : hist) pairs << key.first << ',' << key.second << ',' << c << '\n';
        emit("compiler_stats.csv", st.str());
        emit("compiler_pairs.csv", pairs.str());
    }
    return written;
}

} // namespace caemu
