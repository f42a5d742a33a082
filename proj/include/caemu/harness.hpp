#pragma once

#include "caemu/complexity.hpp"
#include "caemu/network.hpp"
#include "caemu/search.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace caemu {

// key = value lines, '#' comments.
class Config {
public:
    static Config parse(const std::string& text);
    static Config load(const std::string& path);

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    std::string get(const std::string& key, const std::string& fallback) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    void set(const std::string& key, const std::string& value) { values_[key] = value; }

private:
    std::map<std::string, std::string> values_;
};

// CAEMU_WORKERS wins over the configured value; the result is at least 1.
std::size_t resolve_workers(std::size_t configured);

using GridCell = std::pair<std::uint64_t, std::size_t>;  // (rule, k)

// Set of completed grid cells, stored as
//   magic "CAEMUCK1" | u8 family | u64 count | count x (u64 rule, u32 k) | u64 FNV-1a
// all little endian. Anything else is rejected as corrupt.
struct Checkpoint {
    Family family = Family::eca;
    std::set<GridCell> done;

    std::string serialize() const;
    static Checkpoint deserialize(const std::string& bytes);
    void save(const std::string& path) const;
    // nullopt when the file does not exist; Error when it is corrupt
    static std::optional<Checkpoint> load(const std::string& path);
};

struct SearchJob {
    Family space = Family::eca;
    std::vector<std::uint64_t> rules;  // empty: essential rules of the space
    std::size_t k_min = 2;
    std::size_t k_max = 2;
    std::size_t workers = 1;
    std::string checkpoint_path;  // journal lives next to it as <path>.journal
    std::string output_path;      // CSV
    std::string json_path;        // optional
    std::size_t stop_after = 0;   // process at most this many new cells (0: all)
};

struct SearchSummary {
    std::size_t records = 0;
    std::size_t cells_total = 0;
    std::size_t cells_completed = 0;
    std::size_t cells_resumed = 0;
    double wall_seconds = 0;
    bool finished = false;
};

std::vector<std::uint64_t> job_rules(const SearchJob& job);

// Processes the (rule, k) grid with `workers` threads. Each finished cell
// appends its records and a done marker to the journal; the checkpoint is
// rewritten periodically and at the end. A rerun resumes from both. The
// output files are written only once every cell is done, sorted, so they
// do not depend on worker count or interruptions.
SearchSummary run_search(const SearchJob& job);

// In-memory search over a grid, same result as run_search's output.
std::vector<EmulationRecord> search_grid(Family f, const std::vector<std::uint64_t>& rules, std::size_t k_min,
                                         std::size_t k_max, std::size_t workers);

struct ReportInputs {
    Family space = Family::eca;
    std::string records_path;
    std::string profiles_path;  // needed by degree, frequency-curves and compiler-stats
    std::string out_dir = ".";
    bool nontrivial_only = false;
};

// kind: network, ranking, degree, frequency-curves, compiler-stats.
// Returns the files written.
std::vector<std::string> report(const std::string& kind, const ReportInputs& in);

// Pieces of the reports, exposed for testing.
struct CumulativePoint {
    std::size_t k = 0;
    std::size_t emulators = 0;             // rules with any emulation at block size <= k
    std::size_t emulators_nontrivial = 0;  // ... emulating a rule other than the zero rule or its complement
};
std::vector<CumulativePoint> cumulative_emulators(const std::vector<EmulationRecord>& records);

struct CollapsePoint {
    std::size_t k = 0;
    double mean_records = 0;   // projections per emulator
    double mean_distinct = 0;  // distinct emulated rules per emulator
};
std::vector<CollapsePoint> collapse_curve(const std::vector<EmulationRecord>& records);

struct CompilerStats {
    std::size_t code_hamming = 0;  // between the code blocks
    double entropy = 0;            // of the concatenated code, per cell
    double nc = 0;                 // of the concatenated code
};
CompilerStats compiler_stats(const Projection& p);

// Per-bit distance of the concatenated codes; nullopt for different k.
std::optional<std::size_t> compiler_distance(const Projection& a, const Projection& b);

} // namespace caemu
