#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "secharq/channel.hpp"
#include "secharq/closedform.hpp"
#include "secharq/optimizer.hpp"
#include "secharq/protocols.hpp"

namespace secharq {

// Flat key-value experiment description parsed from an INI-style file:
// one `key = value` per line, `#` starts a comment. Discrete state tables use
// `mi:prob` pairs separated by commas, e.g. `d_states = 4:0.5, 5:0.5`.
// Average SNRs are linear by default; keys with a `_db` suffix take decibels.
struct experiment_config {
    std::optional<protocol> variant;            // `protocol`, default asr
    int rounds = 1;                             // `L`
    std::optional<rayleigh_params> gamma_d;     // `gamma_d` or `gamma_d_db`
    std::optional<rayleigh_params> gamma_e;     // `gamma_e` or `gamma_e_db`
    std::optional<discrete_state_dist> d_states;
    std::optional<discrete_state_dist> e_states;
    std::vector<outage_constraints> constraints;  // `constraints = xi_c:xi_s, ...`
    sweep_grids grids;
    std::uint64_t trials = 1'000'000;   // `trials`: decode-leg / re-scoring budget
    std::uint64_t sweep_trials = 0;     // `sweep_trials`, 0 means trials / 10
    std::uint64_t e_trials = 0;         // `e_trials`, 0 defers to the sweep rule
    std::uint64_t enum_budget = 10'000'000;  // `enum_budget`
    std::uint64_t seed = 0;             // overridden by --seed
    tradeoff_grids tradeoff;
    std::vector<int> rounds_list;  // `rounds_list`, tradeoff curves; default {L}
    double fixed_r = 0.0;          // `r`, used by the tradeoff command

    // Raw key-value view retained for hashing and diagnostics.
    std::map<std::string, std::string> raw;
};

// Throws config_error on unknown keys, malformed numbers, or invalid tables.
experiment_config parse_config_text(const std::string& text);
experiment_config load_config(const std::string& path);

// FNV-1a over the canonical `key=value` serialization (excluding output paths),
// so identical semantics hash identically across runs.
std::uint64_t config_hash(const experiment_config& cfg);

}  // namespace secharq
