#pragma once

#include "xdpre/indcpa.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace xdpre::bench {

struct BenchConfig {
    groups::Backend backend;
    // Named attribute sets; each set doubles as the setup universe and the
    // conjunction policy (t-of-t over its members) for the cell.
    std::vector<std::pair<std::string, std::vector<std::string>>> attribute_sets;
    std::vector<std::string> messages;
    std::vector<std::size_t> trial_counts;
    std::size_t samples = 10;
    std::uint64_t seed = 0;
    // Free-form note rendered in the report header; filled with
    // "<hostname>, backend=<name>" when left empty.
    std::string environment;
};

// A1/A2 sets, the two symposium messages, trial counts 1000/1500/2000,
// 10 samples, seed 0.
BenchConfig default_config(const groups::Backend& backend);

struct BenchCell {
    std::string set_name;
    std::string message;
    std::size_t trials = 0;
    double mean_ms = 0.0;             // per-round mean over all samples
    double win_rate = 0.0;            // fraction in [0,1]
    std::vector<double> sample_means_ms;
    std::uint64_t seed = 0;
    std::string error;                // nonempty when the cell failed
};

struct BenchReport {
    std::string environment;
    std::string timing_note;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    std::vector<BenchCell> cells;
};

// Seed for the cell at (set, message, trial-count) position in the config.
std::uint64_t cell_seed(std::uint64_t seed, std::size_t set_index,
                        std::size_t message_index, std::size_t count_index);

// Adversary that exercises the full per-trial pipeline: an oracle key for a
// proper subset of `attrs`, a trial encryption of `message` under `pol`,
// then a fair-coin guess.
indcpa::AdversaryStrategy pipeline_strategy(const policy::PolicyNode& pol,
                                            const std::vector<std::string>& attrs,
                                            const Bytes& message);

// The game a cell runs; bench timings wrap repeated calls of this.
indcpa::GameConfig cell_game(const BenchConfig& config, std::size_t set_index,
                             std::size_t message_index, std::size_t count_index);

// Runs every configured cell; a failing cell is recorded via BenchCell::error
// instead of aborting the suite.  Empty sets/messages/trial_counts or
// samples < 1 -> InvalidParameter.
BenchReport run_suite(const BenchConfig& config);

enum class TableFormat { markdown, csv };

// markdown: rows are trial counts, columns are set x message grouped by
// message.  csv: one cell per line under a header.  Both deterministic
// functions of the report.
std::string emit_table(const BenchReport& report, TableFormat format);

// "415.69449" -> "415.6945"; win rates render with two decimals.
std::string format_ms(double ms);
std::string format_pct(double fraction);

}  // namespace xdpre::bench
