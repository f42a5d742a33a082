// caemu command line: enumerate, search, verify, classify, network, basis,
// report, evolve.

#include "caemu/basis.hpp"
#include "caemu/complexity.hpp"
#include "caemu/engine.hpp"
#include "caemu/harness.hpp"
#include "caemu/io.hpp"
#include "caemu/network.hpp"
#include "caemu/rulespace.hpp"
#include "caemu/verify.hpp"

#include "CLI11.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

using namespace caemu;

namespace {

// Writes to `path`, or stdout for "" and "-".
void output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-")
        std::cout << text;
    else
        save_text(path, text);
}

std::uint64_t to_u64(const std::string& s) {
    std::uint64_t v = 0;
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || end != s.data() + s.size() || s.empty()) throw Error("not a non-negative integer: '" + s + "'");
    return v;
}

std::vector<std::uint64_t> parse_rule_list(const std::string& s, Family f) {
    if (s.empty() || s == "essential") return {};
    if (s == "all") {
        std::vector<std::uint64_t> all;
        for (std::uint64_t r = 0; r < RuleSpec::of(f, 0).space_size(); ++r) all.push_back(r);
        return all;
    }
    std::vector<std::uint64_t> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_u64(item));
    return out;
}

Config load_config(const std::string& path) {
    if (path.empty()) return Config{};
    return Config::load(path);
}

Thresholds load_thresholds(const std::string& explicit_path, const Config& cfg) {
    const auto path = explicit_path.empty() ? cfg.get("thresholds", "") : explicit_path;
    if (path.empty()) return Thresholds{};
    return Thresholds::load(path);
}

ClassifyOptions classify_options(const Config& cfg) {
    ClassifyOptions o;
    o.width = cfg.get_u64("width", o.width);
    o.steps = cfg.get_u64("steps", o.steps);
    o.n_inits = cfg.get_u64("n_inits", o.n_inits);
    o.n_max = cfg.get_u64("n_max", o.n_max);
    return o;
}

std::pair<unsigned, unsigned> parse_pair(const std::string& s) {
    const auto comma = s.find(',');
    if (comma == std::string::npos) throw Error("expected x,y");
    return {static_cast<unsigned>(to_u64(s.substr(0, comma))), static_cast<unsigned>(to_u64(s.substr(comma + 1)))};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"caemu: block emulation search for one-dimensional cellular automata"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "key=value configuration file");

    // enumerate / rulespace dump
    std::string space = "eca", format = "text", out;
    auto* enumerate = app.add_subcommand("enumerate", "essential rules of a rule space");
    enumerate->add_option("--space", space, "pca, eca or gca")->capture_default_str();
    enumerate->add_option("--format", format, "text or csv")->capture_default_str();
    enumerate->add_option("--out", out, "output file");
    auto* rulespace = app.add_subcommand("rulespace", "rule space tools");
    auto* dump = rulespace->add_subcommand("dump", "catalog of symmetry classes");
    dump->add_option("--space", space)->capture_default_str();
    dump->add_option("--format", format)->capture_default_str();
    dump->add_option("--out", out);
    rulespace->require_subcommand(1);

    // search
    std::string rules_arg = "essential", checkpoint, json_out;
    std::size_t kmin = 2, kmax = 2, workers = 0, stop_after = 0;
    auto* search = app.add_subcommand("search", "find and verify block emulations over a (rule, k) grid");
    search->add_option("--space", space)->capture_default_str();
    search->add_option("--rules", rules_arg, "essential, all, or a comma list")->capture_default_str();
    search->add_option("--kmin", kmin)->capture_default_str();
    search->add_option("--kmax", kmax)->capture_default_str();
    search->add_option("--workers", workers, "worker threads (CAEMU_WORKERS overrides)");
    search->add_option("--checkpoint", checkpoint, "checkpoint file")->required();
    search->add_option("--out", out, "record CSV")->required();
    search->add_option("--json", json_out, "record JSON");
    search->add_option("--stop-after", stop_after, "process at most this many cells, then stop");

    // verify
    std::uint64_t emulator = 0, emulated = 0;
    std::string code0, code1;
    auto* verify = app.add_subcommand("verify", "prove or refute one block emulation");
    verify->add_option("--space", space)->capture_default_str();
    verify->add_option("--emulator", emulator)->required();
    verify->add_option("--emulated", emulated)->required();
    verify->add_option("--code0", code0)->required();
    verify->add_option("--code1", code1)->required();

    // classify
    std::string thresholds_path, rule_arg;
    bool calibrate_flag = false;
    auto* classify_cmd = app.add_subcommand("classify", "complexity profiles");
    classify_cmd->add_option("--space", space)->capture_default_str();
    classify_cmd->add_option("--rules", rule_arg, "comma list; default essential rules");
    classify_cmd->add_option("--thresholds", thresholds_path);
    classify_cmd->add_option("--out", out);
    classify_cmd->add_flag("--calibrate", calibrate_flag, "fit thresholds on the ECA lists and print them");

    // network
    std::string records_path, dot_path, graphml_path, ranking_path;
    bool nontrivial = false, collapse = false;
    auto* network = app.add_subcommand("network", "emulation network from verified records");
    network->add_option("--space", space)->capture_default_str();
    network->add_option("--records", records_path)->required();
    network->add_option("--dot", dot_path);
    network->add_option("--graphml", graphml_path);
    network->add_option("--ranking", ranking_path);
    network->add_flag("--nontrivial", nontrivial, "drop emulations of the zero rule and its complement");
    network->add_flag("--collapse", collapse, "rank symmetry representatives");

    // basis
    std::uint64_t ell = 4, rule = 0;
    std::size_t arity = 3;
    std::string basis_arg = "0,1", inputs_arg;
    auto* basis = app.add_subcommand("basis", "two-color bases in 2^n color rule spaces");
    basis->require_subcommand(1);
    auto* table = basis->add_subcommand("table", "basis vectors as CSV");
    table->add_option("--ell", ell)->capture_default_str();
    table->add_option("--arity", arity)->capture_default_str();
    auto* lift = basis->add_subcommand("lift", "lifted rule number");
    lift->add_option("--rule", rule)->required();
    lift->add_option("--basis", basis_arg)->capture_default_str();
    lift->add_option("--ell", ell)->capture_default_str();
    lift->add_option("--space", space)->capture_default_str();
    auto* census = basis->add_subcommand("census", "classify every size-2 block map of a rule");
    census->add_option("--rule", rule)->required();
    census->add_option("--space", space)->capture_default_str();
    auto* decompose = basis->add_subcommand("decompose", "causal decomposition of a projection");
    decompose->add_option("--rule", rule)->required();
    decompose->add_option("--space", space)->capture_default_str();
    decompose->add_option("--code0", code0)->required();
    decompose->add_option("--code1", code1)->required();

    // report
    std::string kind, profiles_path, out_dir = ".";
    auto* report_cmd = app.add_subcommand("report", "CSV and graph reports");
    report_cmd->add_option("--kind", kind, "network, ranking, degree, frequency-curves, compiler-stats")->required();
    report_cmd->add_option("--space", space)->capture_default_str();
    report_cmd->add_option("--records", records_path);
    report_cmd->add_option("--profiles", profiles_path);
    report_cmd->add_option("--out-dir", out_dir)->capture_default_str();
    report_cmd->add_flag("--nontrivial", nontrivial);

    // evolve
    std::size_t width = 64, steps = 64;
    std::string init = "gray:1", pbm;
    auto* evolve_cmd = app.add_subcommand("evolve", "space-time diagram");
    evolve_cmd->add_option("--space", space)->capture_default_str();
    evolve_cmd->add_option("--rule", rule)->required();
    evolve_cmd->add_option("--width", width)->capture_default_str();
    evolve_cmd->add_option("--steps", steps)->capture_default_str();
    evolve_cmd->add_option("--init", init, "gray:N, random:SEED or a 0/1 string")->capture_default_str();
    evolve_cmd->add_option("--pbm", pbm, "write a PBM bitmap instead of text");

    CLI11_PARSE(app, argc, argv);

    try {
        const auto cfg = load_config(config_path);
        const Family fam = parse_family(space);

        if (*enumerate || *dump) {
            const auto cat = build_catalog(fam);
            std::ostringstream os;
            if (format == "csv") {
                write_catalog_csv(os, cat);
            } else if (format == "text") {
                os << family_name(fam) << ": " << cat.space_size() << " rules, " << cat.classes.size()
                   << " essential, Burnside count " << orbit_count(RuleSpec::of(fam, 0).arity()) << '\n';
            } else {
                throw Error("unknown format '" + format + "'");
            }
            output(out, os.str());
        } else if (*search) {
            SearchJob job;
            job.space = fam;
            job.rules = parse_rule_list(rules_arg, fam);
            job.k_min = kmin;
            job.k_max = kmax;
            job.workers = resolve_workers(workers ? workers : cfg.get_u64("workers", 1));
            job.checkpoint_path = checkpoint;
            job.output_path = out;
            job.json_path = json_out;
            job.stop_after = stop_after;
            const auto s = run_search(job);
            std::cerr << "cells " << s.cells_completed << "/" << s.cells_total << " (" << s.cells_resumed
                      << " resumed), records " << s.records << ", " << s.wall_seconds << " s"
                      << (s.finished ? "" : ", unfinished") << '\n';
            return s.finished ? 0 : 3;
        } else if (*verify) {
            const auto a = RuleSpec::of(fam, emulator);
            const auto b = RuleSpec::of(fam, emulated);
            const auto p = Projection::binary(code0, code1);
            const auto v = verify_emulation(a, b, p);
            if (v) {
                std::cout << "verified " << emulator << " -> " << emulated << " k=" << p.block_size() << '\n';
                return 0;
            }
            const auto& c = *v.counterexample;
            std::cout << "refuted: window " << block_string(c.window) << " expected " << block_string(c.expected)
                      << " observed " << block_string(c.observed) << '\n';
            if (auto r = induced_rule(a, p)) std::cout << "the projection emulates rule " << r->number() << '\n';
            return 1;
        } else if (*classify_cmd) {
            const auto opt = classify_options(cfg);
            if (calibrate_flag) {
                const auto profiles = classify_space(Family::eca, opt, Thresholds{});
                std::vector<WolframClass> truth;
                for (const auto& p : profiles) truth.push_back(*seeded_wolfram_class(Family::eca, p.rule));
                const auto c = calibrate(profiles, truth);
                std::cout << "nc_low = " << c.thresholds.nc_low << "\nnc_high = " << c.thresholds.nc_high
                          << "\n# agreement " << c.agreement << "/" << c.total << '\n';
                return 0;
            }
            const auto th = load_thresholds(thresholds_path, cfg);
            std::vector<ComplexityProfile> profiles;
            if (rule_arg.empty()) {
                profiles = classify_space(fam, opt, th);
            } else {
                for (auto r : parse_rule_list(rule_arg, fam)) profiles.push_back(classify(RuleSpec::of(fam, r), opt, th));
            }
            std::ostringstream os;
            write_profiles_csv(os, profiles);
            output(out, os.str());
        } else if (*network) {
            NetworkOptions nopt;
            nopt.nontrivial_only = nontrivial;
            const auto net = build_network(load_records(records_path, fam), nopt);
            if (!dot_path.empty()) {
                std::ostringstream os;
                write_dot(os, net);
                output(dot_path, os.str());
            }
            if (!graphml_path.empty()) {
                std::ostringstream os;
                write_graphml(os, net);
                output(graphml_path, os.str());
            }
            if (!ranking_path.empty()) {
                std::ostringstream os;
                write_ranking_csv(os, emulated_ranking(net, collapse));
                output(ranking_path, os.str());
            }
            std::cerr << net.nodes().size() << " nodes, " << net.edges().size() << " edges, " << net.record_count()
                      << " emulations\n";
        } else if (*table) {
            std::ostringstream os;
            os << "x,y,exponents\n";
            for (const auto& b : all_bases(ell, arity)) {
                os << b.x << ',' << b.y << ',';
                for (std::size_t i = 0; i < b.exponents.size(); ++i) os << (i ? " " : "") << b.exponents[i];
                os << '\n';
            }
            std::cout << os.str();
        } else if (*lift) {
            const auto [x, y] = parse_pair(basis_arg);
            const auto r2 = RuleSpec::of(fam, rule);
            std::cout << lift_rule(r2, basis_xy(ell, r2.arity(), x, y)).number().to_string() << '\n';
        } else if (*census) {
            std::size_t in = 0;
            for (const auto& e : lifted_census(RuleSpec::of(fam, rule), 2)) {
                std::cout << block_string(e.map.blocks[0]);
                for (std::size_t c = 1; c < e.map.blocks.size(); ++c) std::cout << ' ' << block_string(e.map.blocks[c]);
                std::cout << " -> {";
                bool first = true;
                for (auto c : e.result.observed) {
                    std::cout << (first ? "" : ",") << c;
                    first = false;
                }
                std::cout << "}" << (e.result.in_basis ? " in basis" : "") << '\n';
                in += e.result.in_basis;
            }
            std::cout << in << " of 256 block maps stay in a two-color basis\n";
        } else if (*decompose) {
            const auto d = causal_decomposition_check(RuleSpec::of(fam, rule), Projection::binary(code0, code1));
            if (d.decomposable) {
                std::cout << "decomposable, emulates rule " << d.emulated->number() << '\n';
            } else {
                std::cout << "not decomposable";
                if (d.witness) std::cout << ": window " << *d.witness << " ends in " << block_string(d.futures[*d.witness]);
                std::cout << '\n';
                return 1;
            }
        } else if (*report_cmd) {
            ReportInputs in;
            in.space = fam;
            in.records_path = records_path;
            in.profiles_path = profiles_path;
            in.out_dir = out_dir;
            in.nontrivial_only = nontrivial;
            for (const auto& f : report(kind, in)) std::cout << f << '\n';
        } else if (*evolve_cmd) {
            const auto r = RuleSpec::of(fam, rule);
            Configuration c = gray_initial(0, width);
            if (init.rfind("gray:", 0) == 0) {
                c = gray_initial(to_u64(init.substr(5)), width);
            } else if (init.rfind("random:", 0) == 0) {
                std::mt19937_64 rng(to_u64(init.substr(7)));
                std::vector<Cell> cells(width);
                for (auto& x : cells) x = static_cast<Cell>(rng() % static_cast<std::uint64_t>(r.colors()));
                c = Configuration(std::move(cells), Boundary::cyclic);
            } else {
                c = Configuration::parse(init, Boundary::cyclic);
            }
            const auto st = evolve(r, c, steps);
            std::ostringstream os;
            if (!pbm.empty()) {
                write_pbm(os, st);
                output(pbm, os.str());
            } else {
                for (const auto& row : st.rows()) os << row.to_string() << '\n';
                std::cout << os.str();
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "caemu: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
