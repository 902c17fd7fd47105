#include "xdpre/bench.hpp"

#include "xdpre/errors.hpp"

#include <algorithm>
#include <cstdio>
#include <ctime>
#include <map>
#include <optional>
#include <set>
#include <unistd.h>

namespace xdpre::bench {

namespace {

double cpu_now_ms() {
    timespec ts;
    clock_gettime(CLOCK_PROCESS_CPUTIME_ID, &ts);
    return double(ts.tv_sec) * 1e3 + double(ts.tv_nsec) * 1e-6;
}

policy::PolicyNode conjunction(const std::vector<std::string>& attrs) {
    if (attrs.size() == 1) return policy::leaf(attrs[0]);
    std::vector<policy::PolicyNode> leaves;
    leaves.reserve(attrs.size());
    for (const auto& a : attrs) leaves.push_back(policy::leaf(a));
    uint32_t fanin = uint32_t(leaves.size());
    return policy::gate(fanin, std::move(leaves));
}

Bytes partner_message(const Bytes& m) {
    Bytes out = m;
    for (auto& b : out) b ^= 0x55;
    return out;
}

std::string backend_name(const groups::Backend& backend) {
    return backend.id() == groups::BackendId::debug ? "debug" : "curve";
}

std::string default_environment(const groups::Backend& backend) {
    char host[256] = {0};
    if (gethostname(host, sizeof(host) - 1) != 0) std::snprintf(host, sizeof(host), "unknown-host");
    return std::string(host) + ", backend=" + backend_name(backend);
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace

BenchConfig default_config(const groups::Backend& backend) {
    BenchConfig config{
        backend,
        {{"A1", {"Doctor", "Professor", "Researcher"}},
         {"A2", {"Doctor", "Professor", "Researcher", "Student"}}},
        {"OISP Symposium", "The 9th Student Conference"},
        {1000, 1500, 2000},
        10,
        0,
        "",
    };
    return config;
}

std::uint64_t cell_seed(std::uint64_t seed, std::size_t set_index,
                        std::size_t message_index, std::size_t count_index) {
    return derive_seed(seed, set_index, message_index, count_index);
}

indcpa::AdversaryStrategy pipeline_strategy(const policy::PolicyNode& pol,
                                            const std::vector<std::string>& attrs,
                                            const Bytes& message) {
    return indcpa::AdversaryStrategy{
        "pipeline",
        [pol, attrs, message](indcpa::StrategyContext& ctx) {
            // Oracle keygen for a non-satisfying subset, then a trial
            // encrypt+seal of the cell message, then a fair-coin guess.
            std::set<std::string> subset(attrs.begin(),
                                         attrs.empty() ? attrs.end() : attrs.end() - 1);
            ctx.oracle(subset);
            scheme::SymmetricKey key = scheme::random_symmetric_key(ctx.pk.backend, ctx.rng);
            scheme::Ciphertext trial = scheme::encrypt(ctx.pk, pol, key, ctx.rng);
            (void)trial;
            Bytes sealed = scheme::dem_seal(scheme::kdf(key), message);
            (void)sealed;
            return coin(ctx.rng) ? 1 : 0;
        }};
}

indcpa::GameConfig cell_game(const BenchConfig& config, std::size_t set_index,
                             std::size_t message_index, std::size_t count_index) {
    const auto& [name, attrs] = config.attribute_sets.at(set_index);
    (void)name;
    Bytes m0 = to_bytes(config.messages.at(message_index));
    policy::PolicyNode pol = conjunction(attrs);
    return indcpa::GameConfig{
        config.trial_counts.at(count_index),
        config.backend,
        attrs,
        pol,
        m0,
        partner_message(m0),
        pipeline_strategy(pol, attrs, m0),
        cell_seed(config.seed, set_index, message_index, count_index),
    };
}

BenchReport run_suite(const BenchConfig& config) {
    if (config.samples < 1) throw InvalidParameter("bench needs at least one sample");
    if (config.trial_counts.empty()) throw InvalidParameter("bench needs at least one trial count");
    if (config.attribute_sets.empty()) throw InvalidParameter("bench needs at least one attribute set");
    if (config.messages.empty()) throw InvalidParameter("bench needs at least one message");

    BenchReport report;
    report.environment =
        config.environment.empty() ? default_environment(config.backend) : config.environment;
    report.timing_note =
        "per-round mean (ms) of setup, challenge embedding, oracle keygen, trial encrypt+seal, guess";
    report.samples = config.samples;
    report.seed = config.seed;

    std::vector<std::optional<indcpa::GameConfig>> games;
    for (std::size_t i = 0; i < config.attribute_sets.size(); ++i) {
        for (std::size_t j = 0; j < config.messages.size(); ++j) {
            for (std::size_t k = 0; k < config.trial_counts.size(); ++k) {
                BenchCell cell;
                cell.set_name = config.attribute_sets[i].first;
                cell.message = config.messages[j];
                cell.trials = config.trial_counts[k];
                cell.seed = cell_seed(config.seed, i, j, k);
                report.cells.push_back(std::move(cell));
                try {
                    games.emplace_back(cell_game(config, i, j, k));
                } catch (const Error& e) {
                    report.cells.back().error = e.what();
                    games.emplace_back(std::nullopt);
                }
            }
        }
    }

    // Untimed warm-up pass; it also records win rates and turns failing
    // cells into error entries.
    for (std::size_t c = 0; c < games.size(); ++c) {
        try {
            report.cells[c].win_rate = indcpa::run_game(*games[c]).win_rate;
        } catch (const Error& e) {
            report.cells[c].error = e.what();
            games[c].reset();
        }
    }

    // Timed samples interleave short chunks across cells so clock-rate
    // drift hits every cell alike; the CPU-time clock keeps scheduler
    // noise out.  Each sample still times exactly `trials` rounds per
    // cell, accumulated over its chunks.
    constexpr std::size_t kChunk = 25;
    std::size_t max_chunks = 0;
    for (std::size_t c = 0; c < games.size(); ++c) {
        if (!games[c]) continue;
        std::size_t n = (report.cells[c].trials + kChunk - 1) / kChunk;
        max_chunks = std::max(max_chunks, n);
    }
    for (std::size_t s = 0; s < config.samples; ++s) {
        std::vector<double> elapsed(games.size(), 0.0);
        for (std::size_t q = 0; q < max_chunks; ++q) {
            for (std::size_t cc = 0; cc < games.size(); ++cc) {
                std::size_t c = (cc + s) % games.size();
                if (!games[c]) continue;
                std::size_t done = q * kChunk;
                if (done >= report.cells[c].trials) continue;
                indcpa::GameConfig piece = *games[c];
                piece.trials = std::min(kChunk, report.cells[c].trials - done);
                piece.seed = derive_seed(report.cells[c].seed, s, q);
                double ms = cpu_now_ms();
                (void)indcpa::run_game(piece);
                elapsed[c] += cpu_now_ms() - ms;
            }
        }
        for (std::size_t c = 0; c < games.size(); ++c) {
            if (!games[c]) continue;
            report.cells[c].sample_means_ms.push_back(elapsed[c] / double(report.cells[c].trials));
        }
    }
    for (auto& cell : report.cells) {
        if (!cell.error.empty()) continue;
        double total = 0.0;
        for (double m : cell.sample_means_ms) total += m;
        cell.mean_ms = total / double(cell.sample_means_ms.size());
    }
    return report;
}

std::string format_ms(double ms) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f", ms);
    return buf;
}

std::string format_pct(double fraction) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2f", fraction * 100.0);
    return buf;
}

namespace {

// Grid axes in first-appearance order.
struct Grid {
    std::vector<std::string> sets;
    std::vector<std::string> messages;
    std::vector<std::size_t> counts;
    std::map<std::pair<std::pair<std::string, std::string>, std::size_t>, const BenchCell*> at;
};

Grid make_grid(const BenchReport& report) {
    Grid grid;
    auto push_unique = [](auto& vec, const auto& v) {
        for (const auto& e : vec)
            if (e == v) return;
        vec.push_back(v);
    };
    for (const auto& cell : report.cells) {
        push_unique(grid.sets, cell.set_name);
        push_unique(grid.messages, cell.message);
        push_unique(grid.counts, cell.trials);
        grid.at[{{cell.set_name, cell.message}, cell.trials}] = &cell;
    }
    return grid;
}

std::string cell_text(const BenchCell* cell) {
    if (!cell) return "";
    if (!cell->error.empty()) return "error: " + cell->error;
    return format_ms(cell->mean_ms) + " ms, " + format_pct(cell->win_rate) + "%";
}

std::string emit_markdown(const BenchReport& report) {
    Grid grid = make_grid(report);
    std::string out = "# Bench report\n\n";
    out += "- environment: " + report.environment + "\n";
    out += "- samples: " + std::to_string(report.samples) + "\n";
    out += "- seed: " + std::to_string(report.seed) + "\n";
    out += "- timing: " + report.timing_note + "\n\n";

    out += "| trials |";
    std::string rule = "| --- |";
    for (const auto& message : grid.messages) {
        for (const auto& set : grid.sets) {
            out += " " + set + " / " + message + " |";
            rule += " --- |";
        }
    }
    out += "\n" + rule + "\n";
    for (std::size_t count : grid.counts) {
        out += "| " + std::to_string(count) + " |";
        for (const auto& message : grid.messages) {
            for (const auto& set : grid.sets) {
                auto it = grid.at.find({{set, message}, count});
                out += " " + cell_text(it == grid.at.end() ? nullptr : it->second) + " |";
            }
        }
        out += "\n";
    }
    return out;
}

std::string emit_csv(const BenchReport& report) {
    std::string out = "set,message,trials,mean_ms,win_rate_pct,error\n";
    for (const auto& cell : report.cells) {
        out += csv_field(cell.set_name) + "," + csv_field(cell.message) + "," +
               std::to_string(cell.trials) + ",";
        if (cell.error.empty())
            out += format_ms(cell.mean_ms) + "," + format_pct(cell.win_rate) + ",";
        else
            out += ",,";
        out += csv_field(cell.error) + "\n";
    }
    return out;
}

}  // namespace

std::string emit_table(const BenchReport& report, TableFormat format) {
    return format == TableFormat::markdown ? emit_markdown(report) : emit_csv(report);
}

}  // namespace xdpre::bench
