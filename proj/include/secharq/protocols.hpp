#pragma once

#include <string>
#include <vector>

#include "secharq/channel.hpp"

namespace secharq {

enum class protocol {
    asr,      // dummy-message rate split across rounds (R_1, R_2, ..., R_L)
    tang,     // single dummy rate in round one, R_2 = ... = R_L = 0
    tomasin,  // per-round rates; decoder discards rounds where the dummy rate
              // exceeds the observed mutual information
};

std::string to_string(protocol p);

// Rates in bits per channel use. dummy[j] is the dummy-message rate of round
// j+1; its size fixes the maximum number of rounds L.
struct rate_schedule {
    protocol variant = protocol::asr;
    double r = 0.0;             // secrecy (message) rate
    std::vector<double> dummy;  // per-round dummy rates, all >= 0

    int rounds() const { return static_cast<int>(dummy.size()); }
    double total_dummy() const;
};

// Three-parameter family used by the optimizer: R_1 in round one, R_2 repeated
// in every later round.
struct tied_schedule {
    double r = 0.0;
    double r1 = 0.0;
    double r2 = 0.0;
    int rounds = 1;

    rate_schedule expand(protocol variant) const;
    double total_dummy() const { return r1 + (rounds - 1) * r2; }
};

// Throws std::invalid_argument for negative rates, empty schedules, or a tang
// schedule with nonzero dummy rates after round one.
void validate(const rate_schedule& s);

// True when the legitimate decoder succeeds at round l (1-based). Ties count
// as success. asr/tang: r + sum_{j<=l} dummy[j] <= sum_{j<=l} i_d[j];
// tomasin: r <= sum_{j<=l} max(i_d[j] - dummy[j], 0).
bool decode_event(const rate_schedule& s, const mi_trace& i_d, int l);

// True when the eavesdropper stays starved through round l (1-based). Ties
// count as secure. asr/tang: sum_{j<=l} dummy[j] >= sum_{j<=l} i_e[j]. For
// tomasin every round must individually satisfy dummy[j] >= i_e[j]; note the
// condition is evaluated against the eavesdropper informations i_e for all
// three variants, mirroring the asr semantics.
bool secrecy_event(const rate_schedule& s, const mi_trace& i_e, int l);

struct tx_outcome {
    int rounds_used = 0;
    bool decoded = false;
};

// First round whose decode event fires; if none fires within s.rounds() the
// message is dropped after all rounds were sent.
tx_outcome transmission_count(const rate_schedule& s, const mi_trace& i_d);

// All secrecy events hold over the rounds actually used.
bool session_secure(const rate_schedule& s, const mi_trace& i_e, int rounds_used);

}  // namespace secharq
