#pragma once

#include "pwlab/errors.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace pwlab {

/// Stage names in run order.
const std::vector<std::string>& pipeline_stages();

struct RunConfig {
    /// Geometric mode builds Q(5,q); abstract mode reads `scheme_file`.
    std::uint32_t q = 3;
    std::optional<std::filesystem::path> scheme_file;
    std::uint32_t q_bound = 7;
    /// Stages to report; empty means all. Unselected stages still run when a
    /// selected one needs their data, without records.
    std::set<std::string> stages;
    unsigned threads = 1;
    /// Sampled sweeps for the clique hypotheses and the brute-force triples.
    bool sample = false;
    std::uint64_t seed = 1;
    std::size_t per_item = 32;
    long long isomorphism_budget = 1'000'000;
    /// Written after the run when set.
    std::optional<std::filesystem::path> emit_cliques;
    std::optional<std::filesystem::path> emit_structure;
    std::optional<std::filesystem::path> emit_scheme;

    bool geometric() const { return !scheme_file; }
    Json to_json() const;
};

struct Record {
    std::string stage;
    std::string check;
    /// The claim checked, in words.
    std::string statement;
    bool pass = true;
    bool skipped = false;
    Json witness;
    Json values;
    double seconds = 0;
};

struct Report {
    Json config;
    std::vector<Record> records;

    bool pass() const;
    /// {"format_version", "config", "summary", "records"}; seconds only with
    /// `timings`, so the default output is reproducible.
    Json to_json(bool timings = false) const;
    /// One line per record, with timings.
    std::string to_text() const;
};

/// Throws InputError for an unknown stage name, a bad q, or an unreadable
/// scheme file. Check failures are recorded; a failing stage blocks the
/// stages after it, each reported as one skipped record.
Report run_pipeline(const RunConfig& config);

/// Triple-system solve for the CLI: the system with the requested rows, the
/// solution space, and the values pinned by nonnegativity. Parameters come
/// from the closed forms at order r.
struct TripleRequest {
    std::array<int, 3> triple{3, 3, 3};
    bool krein = false;
    bool symmetry = false;
    bool zero_sums = false;
};
/// {"format_version", "r", "triple", "rows", "dimension", "space",
/// "propagated": {"pinned": {"[l m n]": "v"}, "rounds"} or {"failure"}}.
Json solve_triple_request(long long r, const TripleRequest& request);

}  // namespace pwlab
