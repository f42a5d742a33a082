// One line per acceptance criterion. Exit status is 0 when every criterion
// passes except those listed in `known_unattainable`, and only when those
// still fail the same way; anything else is a regression.

#include "caemu/basis.hpp"
#include "caemu/complexity.hpp"
#include "caemu/engine.hpp"
#include "caemu/harness.hpp"
#include "caemu/io.hpp"
#include "caemu/network.hpp"
#include "caemu/rulespace.hpp"
#include "caemu/search.hpp"
#include "caemu/verify.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>

#include <unistd.h>

using namespace caemu;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

// Criterion 2 asks for 45 -> 15 with the ten-cell codes to verify. The
// verifier refutes it with the window 000, and direct simulation agrees, so
// the line stays FAIL. It only counts as expected while that exact
// counterexample is what breaks it.
const std::set<int> known_unattainable{2};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Block bits_of(unsigned v, std::size_t k) {
    Block b(k);
    for (std::size_t i = 0; i < k; ++i) b[i] = static_cast<Cell>((v >> i) & 1u);
    return b;
}

const std::vector<EmulationRecord>& eca_records(std::size_t k_max) {
    static std::map<std::size_t, std::vector<EmulationRecord>> cache;
    auto it = cache.find(k_max);
    if (it == cache.end())
        it = cache.emplace(k_max, search_grid(Family::eca, essential_rules(Family::eca), 2, k_max, 1)).first;
    return it->second;
}

Outcome c1() {
    const auto p = build_catalog(Family::pca).classes.size();
    const auto e = build_catalog(Family::eca).classes.size();
    const auto g = build_catalog(Family::gca).classes.size();
    return {p == 7 && e == 88 && g == 16704, fmt("pca=%zu eca=%zu gca=%zu", p, e, g)};
}

bool c2_expected_failure = false;

Outcome c2() {
    struct Pair {
        Family f;
        std::uint64_t a, b;
        const char *c0, *c1;
    };
    const Pair pairs[] = {
        {Family::pca, 13, 12, "01", "11"},      {Family::eca, 94, 90, "00", "11"},
        {Family::eca, 54, 50, "00", "01"},      {Family::eca, 54, 50, "00", "10"},
        {Family::eca, 164, 90, "1111", "1010"}, {Family::eca, 45, 15, "1111001001", "1111110001"},
        {Family::gca, 4086, 782, "00", "01"},   {Family::gca, 17910, 4382, "00", "10"},
        {Family::gca, 13960, 27030, "010", "011"}, {Family::gca, 2966, 25542, "00", "01"},
    };
    std::size_t ok = 0;
    double slowest = 0;
    std::string failed;
    bool only_45 = true;
    for (const auto& p : pairs) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto v = verify_emulation(RuleSpec::of(p.f, p.a), RuleSpec::of(p.f, p.b), Projection::binary(p.c0, p.c1));
        slowest = std::max(slowest, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
        if (v.verified) {
            ++ok;
            continue;
        }
        failed += fmt(" %llu->%llu", (unsigned long long)p.a, (unsigned long long)p.b);
        if (v.counterexample)
            failed += " (window " + block_string(v.counterexample->window) + " expects " +
                      block_string(v.counterexample->expected) + ", cone gives " +
                      block_string(v.counterexample->observed) + ")";
        const bool is_45 = p.a == 45 && v.counterexample && block_string(v.counterexample->window) == "000" &&
                           block_string(v.counterexample->observed) == "1111010000";
        only_45 = only_45 && is_45;
    }
    c2_expected_failure = ok == std::size(pairs) - 1 && only_45;
    const bool pass = ok == std::size(pairs) && slowest < 1.0;
    return {pass, fmt("%zu/%zu verified, slowest %.3f s;", ok, std::size(pairs), slowest) +
                      (failed.empty() ? std::string(" none refuted") : " refuted:" + failed)};
}

Outcome c3() {
    std::size_t mismatched = 0, triples = 0;
    for (auto r : essential_rules(Family::eca)) {
        const auto rule = RuleSpec::eca(r);
        for (std::size_t k = 2; k <= 3; ++k) {
            std::set<std::tuple<std::uint64_t, std::string, std::string>> brute, found;
            for (unsigned a = 0; a < (1u << k); ++a)
                for (unsigned b = 0; b < (1u << k); ++b) {
                    if (a == b) continue;
                    const Projection p({bits_of(a, k), bits_of(b, k)});
                    // direct verification against every candidate target
                    for (std::uint64_t t = 0; t < 256; ++t)
                        if (verify_emulation(rule, RuleSpec::eca(t), p).verified)
                            brute.emplace(t, p.code(0), p.code(1));
                }
            for (const auto& rec : search_emulations(rule, k))
                found.emplace(rec.emulated, rec.projection.code(0), rec.projection.code(1));
            triples += brute.size();
            mismatched += brute != found;
        }
    }
    return {mismatched == 0, fmt("%zu verified triples, %zu (rule, k) cells differ", triples, mismatched)};
}

Outcome c4() {
    std::vector<std::uint64_t> all(16);
    std::iota(all.begin(), all.end(), 0);
    const auto recs = search_grid(Family::pca, all, 2, 3, 1);
    const auto loops = build_network(recs, {true}).self_loops();
    const bool loops_ok = loops == std::set<std::uint64_t>{3, 5, 6, 8, 9, 10, 12, 14};

    // per emulator, the largest minimal block size over its targets
    const auto net = build_network(recs);
    std::map<std::uint64_t, std::size_t> worst;
    bool sizes_ok = true;
    for (const auto& [key, e] : net.edges()) {
        worst[key.first] = std::max(worst[key.first], e.min_block_size);
        sizes_ok = sizes_ok && (e.min_block_size == 2 || e.min_block_size == 3);
    }
    std::set<std::uint64_t> three;
    for (auto [r, k] : worst)
        if (k == 3) three.insert(r);
    const bool named_ok = net.edge(4, 0) && net.edge(4, 0)->min_block_size == 3 && net.edge(3, 3) &&
                          net.edge(3, 3)->min_block_size == 3 && net.edge(5, 5) && net.edge(5, 5)->min_block_size == 3;
    const bool rules_ok = three == std::set<std::uint64_t>{2, 3, 4, 5, 11, 13};
    std::string loops_s, three_s;
    for (auto r : loops) loops_s += fmt(" %llu", (unsigned long long)r);
    for (auto r : three) three_s += fmt(" %llu", (unsigned long long)r);
    return {loops_ok && sizes_ok && named_ok && rules_ok,
            "self-emulators {" + loops_s + " }, rules reaching block size 3 {" + three_s +
                " }, 4->0 3->3 5->5 at 3: " + (named_ok ? "yes" : "no")};
}

Outcome c5() {
    const auto& recs = eca_records(6);
    const auto net = build_network(recs);
    const auto collapsed = emulated_ranking(net, true);
    const auto raw = emulated_ranking(net, false);
    std::set<std::uint64_t> top;
    std::string top_s, raw_s;
    for (std::size_t i = 0; i < 5 && i < collapsed.size(); ++i) {
        top.insert(collapsed[i].rule);
        top_s += fmt(" %llu:%zu", (unsigned long long)collapsed[i].rule, collapsed[i].count);
    }
    for (std::size_t i = 0; i < 5 && i < raw.size(); ++i)
        raw_s += fmt(" %llu:%zu", (unsigned long long)raw[i].rule, raw[i].count);
    const bool contains = top.count(170) && top.count(204) && top.count(150);
    const auto cum = cumulative_emulators(recs);
    bool monotone = !cum.empty();
    for (std::size_t i = 1; i < cum.size(); ++i)
        monotone = monotone && cum[i].emulators >= cum[i - 1].emulators &&
                   cum[i].emulators_nontrivial >= cum[i - 1].emulators_nontrivial;
    std::string cum_s;
    for (const auto& p : cum) cum_s += fmt(" %zu", p.emulators_nontrivial);
    return {contains && monotone, "top 5 by representative {" + top_s + " }, raw targets {" + raw_s +
                                      " }, non-trivial emulators by k {" + cum_s + " }"};
}

Outcome c6() {
    const auto t = Thresholds::load(CAEMU_SOURCE_DIR "/config/thresholds.conf");
    const auto profiles = classify_space(Family::eca, {}, t);
    const auto agree = split_agreement(Family::eca, profiles);
    return {agree >= 80 && profiles.size() == 88, fmt("%zu/%zu agree", agree, profiles.size())};
}

Outcome c7() {
    using V = std::vector<std::uint64_t>;
    std::vector<std::string> bad;
    auto req = [&](bool ok, const char* what) {
        if (!ok) bad.push_back(what);
    };
    req(lambda(4, 1) == 3 && lambda(4, 2) == 11 && lambda(8, 2) == 55, "lambda");
    req(delta_vector(4, 3) == V{1, 3, 1, 11, 1, 3, 1}, "delta");
    req(basis_01(4, 3).exponents == V{0, 1, 4, 5, 16, 17, 20, 21}, "b01");
    req(basis_xy(8, 3, 1, 5).exponents == V{73, 77, 105, 109, 329, 333, 361, 365}, "b15");
    req(lift_rule(RuleSpec::eca(50), basis_01(4, 3)).number().to_string() == "21474836484", "lift 50");
    const std::map<std::pair<unsigned, unsigned>, V> table{
        {{0, 1}, {0, 1, 4, 5, 16, 17, 20, 21}},     {{0, 2}, {0, 2, 8, 10, 32, 34, 40, 42}},
        {{0, 3}, {0, 3, 12, 15, 48, 51, 60, 63}},   {{1, 2}, {21, 22, 25, 26, 37, 38, 41, 42}},
        {{1, 3}, {21, 23, 29, 31, 53, 55, 61, 63}}, {{2, 3}, {42, 43, 46, 47, 58, 59, 62, 63}},
    };
    const auto all = all_bases(4, 3);
    bool t_ok = all.size() == table.size();
    for (const auto& b : all) t_ok = t_ok && table.count({b.x, b.y}) && table.at({b.x, b.y}) == b.exponents;
    req(t_ok, "table");
    std::string s = "lambda, delta, b01, b15, lift(50), 6-row basis table";
    for (const auto& b : bad) s += " [" + b + " wrong]";
    return {bad.empty(), s};
}

Outcome c8() {
    const auto census = lifted_census(RuleSpec::eca(54), 2);
    std::size_t in = 0;
    for (const auto& e : census) in += e.result.in_basis;
    return {in == 28 && census.size() == 256, fmt("%zu of %zu block maps stay in a two-color basis", in, census.size())};
}

Outcome c9() {
    const auto net = build_network(eca_records(4));
    double lo = 0, hi = 0;
    std::size_t nlo = 0, nhi = 0;
    for (auto [rule, d] : degrees(net, Direction::in)) {
        const auto c = seeded_wolfram_class(Family::eca, representative(RuleSpec::eca(rule)));
        if (!c) return {false, fmt("no class for %llu", (unsigned long long)rule)};
        if (static_cast<int>(*c) <= 2) {
            lo += d;
            ++nlo;
        } else {
            hi += d;
            ++nhi;
        }
    }
    double dlo = 0, dhi = 0;
    for (auto [rule, d] : degrees(net, Direction::in, true))
        (static_cast<int>(*seeded_wolfram_class(Family::eca, representative(RuleSpec::eca(rule)))) <= 2 ? dlo : dhi) += d;
    const double a = lo / nlo, b = hi / nhi;
    return {a > b, fmt("mean in-degree {1,2} %.2f over %zu nodes, {3,4} %.2f over %zu nodes "
                       "(distinct emulators: %.2f vs %.2f)",
                       a, nlo, b, nhi, dlo / nlo, dhi / nhi)};
}

Outcome c10() {
    std::vector<std::string> bad;
    // involutions on all of GCA
    for (std::uint64_t r = 0; r < 65536; ++r) {
        const auto s = RuleSpec::gca(r);
        if (reflect(RuleSpec::gca(reflect(s))) != r || conjugate(RuleSpec::gca(conjugate(s))) != r ||
            conjugate(RuleSpec::gca(reflect(s))) != reflect(RuleSpec::gca(conjugate(s)))) {
            bad.push_back("involution");
            break;
        }
    }
    // additivity on the listed linear rules
    std::mt19937_64 rng(20190527);
    auto row = [&](std::size_t w) {
        std::vector<Cell> v(w);
        for (auto& c : v) c = static_cast<Cell>(rng() & 1u);
        return Configuration(v);
    };
    auto x_or = [](const Configuration& a, const Configuration& b) {
        std::vector<Cell> v(a.width());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] ^ b[i];
        return Configuration(v);
    };
    std::vector<RuleSpec> listed;
    for (std::uint64_t r : {0u, 3u, 6u, 10u}) listed.push_back(RuleSpec::pca(r));
    for (std::uint64_t r : {0u, 15u, 51u, 60u, 90u, 105u, 150u, 170u, 204u}) listed.push_back(RuleSpec::eca(r));
    for (std::uint64_t r : {0u, 255u, 3855u, 4080u, 13260u, 15420u, 15555u, 21930u, 23205u, 27030u, 38550u, 39270u,
                            43690u, 52428u})
        listed.push_back(RuleSpec::gca(r));
    for (const auto& rule : listed)
        for (int t = 0; t < 100; ++t) {
            const auto a = row(40), b = row(40), z = Configuration(std::vector<Cell>(40, 0));
            if (x_or(step(rule, x_or(a, b)), step(rule, z)) != x_or(step(rule, a), step(rule, b))) {
                bad.push_back("additivity " + to_string(rule));
                t = 100;
            }
        }
    // soundness of every verified record on random initial conditions
    std::vector<EmulationRecord> recs = eca_records(4);
    std::vector<std::uint64_t> pca(16);
    std::iota(pca.begin(), pca.end(), 0);
    const auto p = search_grid(Family::pca, pca, 2, 4, 1);
    recs.insert(recs.end(), p.begin(), p.end());
    for (std::uint64_t g : {4086u, 17910u, 13960u, 2966u}) {
        const auto gr = search_emulations(RuleSpec::gca(g), 2);
        recs.insert(recs.end(), gr.begin(), gr.end());
    }
    std::size_t failures = 0;
    for (const auto& r : recs) {
        const auto a = RuleSpec::of(r.family, r.emulator), b = RuleSpec::of(r.family, r.emulated);
        for (int t = 0; t < 100; ++t) {
            const auto init = row(4 + rng() % 12);
            auto fine = block_encode(r.projection, init);
            auto coarse = init;
            for (int s = 0; s < 3; ++s) {
                for (std::size_t j = 0; j < r.block_size; ++j) fine = step(a, fine);
                coarse = step(b, coarse);
            }
            failures += fine != block_encode(r.projection, coarse);
        }
    }
    if (failures) bad.push_back(fmt("%zu soundness failures", failures));
    // determinism across worker counts
    const auto rules = essential_rules(Family::eca);
    const auto one = search_grid(Family::eca, rules, 2, 4, 1);
    bool same = true;
    for (std::size_t w : {2u, 4u, 8u}) same = same && search_grid(Family::eca, rules, 2, 4, w) == one;
    same = same && build_catalog_serial(Family::gca).classes == build_catalog(Family::gca).classes;
    const Thresholds th;
    for (std::uint64_t r : {30u, 110u, 4u})
        same = same && classify_serial(RuleSpec::eca(r), {}, th) == classify(RuleSpec::eca(r), {}, th);
    const auto dir = std::filesystem::temp_directory_path() / ("caemu_acceptance_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    std::string first;
    for (std::size_t w : {1u, 3u}) {
        SearchJob job;
        job.space = Family::eca;
        job.k_min = 2;
        job.k_max = 4;
        job.workers = w;
        job.checkpoint_path = (dir / fmt("w%zu.ck", w)).string();
        job.output_path = (dir / fmt("w%zu.csv", w)).string();
        job.stop_after = 100;
        run_search(job);
        job.stop_after = 0;
        run_search(job);
        std::ifstream in(job.output_path, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        if (first.empty())
            first = ss.str();
        else
            same = same && ss.str() == first;
    }
    std::filesystem::remove_all(dir);
    if (!same) bad.push_back("worker-count determinism");
    std::string s = fmt("involutions on 65536 rules, additivity on %zu listed rules, %zu records x 100 random "
                        "initial conditions, determinism over 1-8 workers",
                        listed.size(), recs.size());
    for (const auto& b : bad) s += " [" + b + "]";
    return {bad.empty(), s};
}

} // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"essential rule counts", c1},   {"golden emulation pairs", c2},   {"search completeness", c3},
        {"PCA network facts", c4},       {"emulated ranking", c5},         {"classifier agreement", c6},
        {"color-basis identities", c7},  {"ECA 54 census", c8},            {"degree vs complexity", c9},
        {"property suites", c10},
    };
    int unexpected = 0, failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i + 1);
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("criterion %2d %s  %s: %s (%.2f s)\n", id, o.pass ? "PASS" : "FAIL", criteria[i].first,
                    o.detail.c_str(), secs);
        std::fflush(stdout);
        failed += !o.pass;
        const bool listed = known_unattainable.count(id) != 0;
        if (o.pass && listed) {
            std::printf("             listed as unattainable but passes; update the list\n");
            ++unexpected;
        } else if (!o.pass && !(listed && c2_expected_failure)) {
            ++unexpected;
        }
    }
    std::printf("%zu of %zu criteria pass; %d unexpected result(s)\n", criteria.size() - failed, criteria.size(),
                unexpected);
    return unexpected ? 1 : 0;
}
