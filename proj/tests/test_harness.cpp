#include "doctest.h"

#include "caemu/harness.hpp"
#include "caemu/io.hpp"
#include "caemu/rulespace.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

using namespace caemu;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("caemu_test_" + tag + "_" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& p, const std::string& body) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << body;
}

SearchJob pca_job(const TempDir& d, const std::string& tag) {
    SearchJob job;
    job.space = Family::pca;
    for (std::uint64_t r = 0; r < 16; ++r) job.rules.push_back(r);
    job.k_min = 2;
    job.k_max = 4;
    job.checkpoint_path = d / (tag + ".ck");
    job.output_path = d / (tag + ".csv");
    job.json_path = d / (tag + ".json");
    return job;
}

} // namespace

TEST_CASE("config files") {
    const auto c = Config::parse("# top\nworkers = 4\nseed=7 # trailing\n\nthresholds = a b.conf\n");
    CHECK(c.get_u64("workers", 1) == 4);
    CHECK(c.get_u64("seed", 0) == 7);
    CHECK(c.get("thresholds", "") == "a b.conf");
    CHECK(c.get_u64("missing", 9) == 9);
    CHECK_FALSE(c.has("missing"));
    CHECK_THROWS_AS(Config::parse("workers 4\n"), Error);
    CHECK_THROWS_AS(Config::parse("workers = -1\n").get_u64("workers", 1), Error);
    CHECK_THROWS_AS(Config::parse("workers = 4x\n").get_u64("workers", 1), Error);
    const auto shipped = Config::load(CAEMU_SOURCE_DIR "/config/caemu.conf");
    CHECK(shipped.get_u64("width", 0) == 129);
}

TEST_CASE("worker count from the environment") {
    ::unsetenv("CAEMU_WORKERS");
    CHECK(resolve_workers(0) == 1);
    CHECK(resolve_workers(3) == 3);
    ::setenv("CAEMU_WORKERS", "5", 1);
    CHECK(resolve_workers(3) == 5);
    ::setenv("CAEMU_WORKERS", "zero", 1);
    CHECK_THROWS_AS(resolve_workers(3), Error);
    ::unsetenv("CAEMU_WORKERS");
}

TEST_CASE("checkpoint encoding") {
    Checkpoint cp;
    cp.family = Family::gca;
    cp.done = {{4086, 2}, {17910, 3}, {0, 12}};
    const auto bytes = cp.serialize();
    CHECK(bytes.size() == 8 + 1 + 8 + 3 * 12 + 8);
    CHECK(bytes.substr(0, 8) == "CAEMUCK1");
    const auto back = Checkpoint::deserialize(bytes);
    CHECK(back.family == Family::gca);
    CHECK(back.done == cp.done);

    for (std::size_t i = 0; i < bytes.size(); ++i) {
        auto bad = bytes;
        bad[i] = static_cast<char>(bad[i] ^ 0x10);
        CHECK_THROWS_AS(Checkpoint::deserialize(bad), Error);
    }
    CHECK_THROWS_AS(Checkpoint::deserialize(bytes.substr(0, bytes.size() - 1)), Error);
    CHECK_THROWS_AS(Checkpoint::deserialize(bytes + "x"), Error);
    CHECK_THROWS_AS(Checkpoint::deserialize(""), Error);

    TempDir d("ck");
    CHECK_FALSE(Checkpoint::load(d / "none").has_value());
    cp.save(d / "c");
    CHECK(Checkpoint::load(d / "c")->done == cp.done);
    CHECK_FALSE(fs::exists(d / "c.tmp"));
}

TEST_CASE("interrupted searches resume to identical output") {
    TempDir d("resume");
    auto full = pca_job(d, "full");
    full.workers = 1;
    const auto s_full = run_search(full);
    CHECK(s_full.finished);
    CHECK(s_full.cells_total == 48);
    CHECK(s_full.cells_completed == 48);

    auto part = pca_job(d, "part");
    part.workers = 2;
    part.stop_after = 7;
    auto s = run_search(part);
    CHECK_FALSE(s.finished);
    CHECK(s.cells_completed == 7);
    CHECK_FALSE(fs::exists(part.output_path));
    part.stop_after = 20;
    part.workers = 3;
    s = run_search(part);
    CHECK(s.cells_resumed == 7);
    CHECK(s.cells_completed == 27);
    part.stop_after = 0;
    part.workers = 1;
    s = run_search(part);
    CHECK(s.finished);
    CHECK(s.records == s_full.records);
    CHECK(slurp(part.output_path) == slurp(full.output_path));
    CHECK(slurp(part.json_path) == slurp(full.json_path));

    // a finished job reruns without new work and rewrites the same bytes
    s = run_search(part);
    CHECK(s.cells_resumed == 48);
    CHECK(slurp(part.output_path) == slurp(full.output_path));

    std::ifstream csv(full.output_path);
    CHECK(read_records_csv(csv, Family::pca) == search_grid(Family::pca, full.rules, 2, 4, 1));
}

TEST_CASE("outputs do not depend on the worker count") {
    const auto rules = essential_rules(Family::eca);
    const auto one = search_grid(Family::eca, rules, 2, 4, 1);
    for (std::size_t w : {2u, 3u, 8u}) CHECK(search_grid(Family::eca, rules, 2, 4, w) == one);
    TempDir d("workers");
    std::string first;
    for (std::size_t w : {1u, 4u}) {
        SearchJob job;
        job.space = Family::eca;
        job.k_min = 2;
        job.k_max = 3;
        job.workers = w;
        job.checkpoint_path = d / ("w" + std::to_string(w) + ".ck");
        job.output_path = d / ("w" + std::to_string(w) + ".csv");
        run_search(job);
        if (first.empty())
            first = slurp(job.output_path);
        else
            CHECK(slurp(job.output_path) == first);
    }
}

TEST_CASE("torn journal tails are dropped and rerun") {
    TempDir d("torn");
    auto ref = pca_job(d, "ref");
    run_search(ref);

    auto job = pca_job(d, "t");
    job.stop_after = 10;
    run_search(job);
    const auto jpath = job.checkpoint_path + ".journal";
    auto text = slurp(jpath);
    spit(jpath, text + "R,13,12,2,0");  // interrupted mid-line
    job.stop_after = 0;
    const auto s = run_search(job);
    CHECK(s.finished);
    CHECK(slurp(job.output_path) == slurp(ref.output_path));
}

TEST_CASE("corruption is refused") {
    TempDir d("corrupt");
    auto job = pca_job(d, "c");
    job.stop_after = 10;
    run_search(job);
    const auto jpath = job.checkpoint_path + ".journal";
    const auto journal = slurp(jpath);

    SUBCASE("garbage in the middle of the journal") {
        spit(jpath, "R,garbage\n" + journal);
        CHECK_THROWS_AS(run_search(job), Error);
    }
    SUBCASE("done marker with the wrong count") {
        const auto pos = journal.find("D,");
        const auto eol = journal.find('\n', pos);
        spit(jpath, journal.substr(0, pos) + "D,0,2,999" + journal.substr(eol));
        CHECK_THROWS_AS(run_search(job), Error);
    }
    SUBCASE("checkpoint ahead of the journal") {
        spit(jpath, "");
        CHECK_THROWS_AS(run_search(job), Error);
    }
    SUBCASE("flipped checkpoint byte") {
        auto ck = slurp(job.checkpoint_path);
        ck[12] ^= 1;
        spit(job.checkpoint_path, ck);
        CHECK_THROWS_AS(run_search(job), Error);
    }
    SUBCASE("checkpoint from another space") {
        job.space = Family::eca;
        job.rules = {0};
        CHECK_THROWS_AS(run_search(job), Error);
    }
}

TEST_CASE("job validation") {
    TempDir d("jobs");
    auto job = pca_job(d, "v");
    job.k_min = 4;
    job.k_max = 3;
    CHECK_THROWS_AS(run_search(job), Error);
    CHECK_THROWS_AS(search_grid(Family::eca, {30}, 3, 2, 1), Error);
    job = pca_job(d, "v");
    job.rules = {16};
    CHECK_THROWS_AS(run_search(job), Error);
    job = pca_job(d, "v");
    job.output_path.clear();
    CHECK_THROWS_AS(run_search(job), Error);
    SearchJob ess;
    ess.space = Family::eca;
    CHECK(job_rules(ess).size() == 88);
}

TEST_CASE("record and profile files") {
    CHECK_THROWS_AS(parse_record_csv_line("94,90,2,00,11", Family::eca), Error);
    CHECK_THROWS_AS(parse_record_csv_line("94,90,3,00,11,verified", Family::eca), Error);
    CHECK_THROWS_AS(parse_record_csv_line("94,x,2,00,11,verified", Family::eca), Error);
    const auto r = parse_record_csv_line("94,90,2,00,11,verified", Family::eca);
    CHECK(record_csv_line(r) == "94,90,2,00,11,verified");
    std::istringstream nohdr("94,90,2,00,11,verified\n");
    CHECK_THROWS_AS(read_records_csv(nohdr, Family::eca), Error);

    std::vector<ComplexityProfile> ps(2);
    ps[0].rule = 30;
    ps[0].entropy_rate = 0.1 + 0.2;
    ps[0].nc_index = 1.0 / 3.0;
    ps[0].class_label = "3";
    ps[1].rule = 0;
    ps[1].class_label = "1";
    ps[1].settles_uniform = true;
    std::stringstream ss;
    write_profiles_csv(ss, ps);
    CHECK(read_profiles_csv(ss) == ps);

    std::ostringstream cat;
    write_catalog_csv(cat, build_catalog(Family::pca));
    CHECK(cat.str().rfind("representative,members,is_linear,wolfram_class\n0,0 15,true,1\n1,1 7,false,2\n", 0) == 0);
}

TEST_CASE("reports") {
    TempDir d("report");
    const auto recs = search_grid(Family::eca, essential_rules(Family::eca), 2, 4, 1);
    {
        std::ofstream out(d / "recs.csv");
        write_records_csv(out, recs);
    }
    std::vector<ComplexityProfile> ps;
    for (auto r : essential_rules(Family::eca)) {
        ComplexityProfile p;
        p.rule = r;
        p.class_label = std::to_string(static_cast<int>(*seeded_wolfram_class(Family::eca, r)));
        p.nc_index = 0.5;
        ps.push_back(p);
    }
    {
        std::ofstream out(d / "prof.csv");
        write_profiles_csv(out, ps);
    }
    ReportInputs in;
    in.space = Family::eca;
    in.records_path = d / "recs.csv";
    in.profiles_path = d / "prof.csv";
    in.out_dir = d / "out";

    const std::map<std::string, std::vector<std::string>> expected{
        {"network", {"network.dot", "network.graphml"}},
        {"ranking", {"ranking.csv", "ranking_collapsed.csv"}},
        {"degree", {"degree_in.csv", "degree_out.csv"}},
        {"frequency-curves", {"cumulative_emulators.csv", "frequency_by_group.csv", "collapse.csv"}},
        {"compiler-stats", {"compiler_stats.csv", "compiler_pairs.csv"}},
    };
    for (const auto& [kind, files] : expected) {
        const auto written = report(kind, in);
        REQUIRE(written.size() == files.size());
        for (std::size_t i = 0; i < files.size(); ++i) {
            CHECK(fs::path(written[i]).filename() == files[i]);
            CHECK(fs::file_size(written[i]) > 0);
        }
    }
    CHECK(slurp(d / "out/cumulative_emulators.csv").rfind("k,emulators,emulators_nontrivial\n2,", 0) == 0);
    CHECK(slurp(d / "out/compiler_stats.csv").find("\n94,90,2,00,11,2,") != std::string::npos);

    ReportInputs missing = in;
    missing.profiles_path = d / "nope.csv";
    missing.records_path.clear();
    try {
        report("degree", missing);
        FAIL("expected an error");
    } catch (const Error& e) {
        const std::string msg = e.what();
        CHECK(msg.find("--records") != std::string::npos);
        CHECK(msg.find("nope.csv") != std::string::npos);
    }
    CHECK_NOTHROW(report("ranking", ReportInputs{Family::eca, in.records_path, "", d / "o2", false}));
    CHECK_THROWS_AS(report("bogus", in), Error);
}

TEST_CASE("frequency curve pieces") {
    const auto recs = search_grid(Family::eca, essential_rules(Family::eca), 2, 6, 1);
    const auto cum = cumulative_emulators(recs);
    REQUIRE(cum.size() == 5);
    for (std::size_t i = 1; i < cum.size(); ++i) {
        CHECK(cum[i].emulators >= cum[i - 1].emulators);
        CHECK(cum[i].emulators_nontrivial >= cum[i - 1].emulators_nontrivial);
    }
    for (const auto& p : collapse_curve(recs)) CHECK(p.mean_records >= p.mean_distinct);

    const auto s = compiler_stats(Projection::binary("00", "11"));
    CHECK(s.code_hamming == 2);
    CHECK(s.entropy == doctest::Approx(1.0));
    CHECK(compiler_distance(Projection::binary("00", "11"), Projection::binary("01", "11")) == std::size_t{1});
    CHECK_FALSE(compiler_distance(Projection::binary("00", "11"), Projection::binary("000", "111")).has_value());
}
