#pragma once

#include "caemu/configuration.hpp"
#include "caemu/rulespace.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace caemu {

// LZMW: the LZ78 variant that adds the concatenation of the last two phrases
// to the dictionary. Codes are written MSB-first with width ceil(log2 of the
// dictionary size), starting from the 256 single bytes. No header.
std::vector<std::uint8_t> lzmw_compress(std::span<const std::uint8_t> data);
std::vector<std::uint8_t> lzmw_decompress(std::span<const std::uint8_t> packed);

// Row-major bit packing, MSB first; ceil(log2 colors) bits per cell where the
// color count is taken from the largest cell value present.
std::vector<std::uint8_t> serialize(const SpaceTime& st);

// Reflected-binary Gray word of `index` without leading zeros, centered in a
// cyclic row of `width` cells (start at (width - length) / 2).
Configuration gray_initial(std::uint64_t index, std::size_t width);

// Shannon entropy (bits) of the non-overlapping N x N blocks, per cell.
double block_entropy(const SpaceTime& st, std::size_t n);

// Compressed over raw length, clamped to [0, 1].
double nc_index(const SpaceTime& st);
double nc_index(std::span<const std::uint8_t> raw);

struct Thresholds {
    double nc_low = 0.1;   // GCA low / medium cut
    double nc_high = 0.5;  // {1,2} below, {3,4} at or above; GCA medium / high cut

    // key=value text; unknown keys are an error
    static Thresholds load(const std::string& path);
    static Thresholds parse(const std::string& text);
};

struct ClassifyOptions {
    std::size_t width = 129;
    std::size_t steps = 200;
    std::size_t n_inits = 32;
    std::size_t n_max = 4;
};

struct ComplexityProfile {
    std::uint64_t rule = 0;
    double entropy_rate = 0;
    double nc_index = 0;
    bool settles_uniform = false;  // every initial condition reaches a uniform fixed row
    std::string class_label;      // "1".."4" for PCA/ECA, low/medium/high otherwise

    // Wolfram-style bucket: true for {3,4} (or GCA "high").
    bool complex() const;
    friend bool operator==(const ComplexityProfile&, const ComplexityProfile&) = default;
};

// Measurements only, one initial condition at a time.
struct Measurement {
    double entropy_rate = 0;
    double nc_index = 0;
    bool settles_uniform = false;
};
Measurement measure(const RuleSpec& rule, const Configuration& init, const ClassifyOptions& opt);

std::string label_for(Family f, std::uint64_t rule, const Measurement& m, const Thresholds& t);

ComplexityProfile classify_serial(const RuleSpec& rule, const ClassifyOptions& opt, const Thresholds& t);
// OpenMP over initial conditions, max-aggregated; equals classify_serial.
ComplexityProfile classify(const RuleSpec& rule, const ClassifyOptions& opt, const Thresholds& t);

// Threshold fit on labelled profiles: nc_high maximizes agreement of the
// {1,2} / {3,4} split (midpoint of the widest best gap), nc_low sits midway
// between the class 1 and class 2 nc ranges.
struct Calibration {
    Thresholds thresholds;
    std::size_t agreement = 0;
    std::size_t total = 0;
};
Calibration calibrate(const std::vector<ComplexityProfile>& profiles, const std::vector<WolframClass>& truth);

// Agreement of the {1,2} / {3,4} split with the seeded lists.
std::size_t split_agreement(Family f, const std::vector<ComplexityProfile>& profiles);

// Profiles of the essential rules of a space, by representative.
std::vector<ComplexityProfile> classify_space(Family f, const ClassifyOptions& opt, const Thresholds& t);

} // namespace caemu
