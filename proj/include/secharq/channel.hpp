#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "secharq/rng.hpp"

namespace secharq {

// Average SNR of a Rayleigh block-fading link; the per-block SNR is
// exponentially distributed with this mean (linear scale, not dB).
struct rayleigh_params {
    double mean_snr = 1.0;
};

// Finite distribution of per-block mutual information values (bits/channel use).
struct discrete_state_dist {
    std::vector<double> mi;    // per-block mutual information of each state
    std::vector<double> prob;  // matching probabilities, must sum to 1

    std::size_t size() const { return mi.size(); }
};

using channel_model = std::variant<rayleigh_params, discrete_state_dist>;

// Per-round accumulated mutual information observed by one link over a session.
using mi_trace = std::vector<double>;

double db_to_linear(double db);

// I = log2(1 + snr), bits per channel use. Throws std::domain_error for
// negative or non-finite snr.
double mutual_info_from_snr(double snr);

// P(SNR > x) for an exponential SNR with the given mean.
double snr_tail(double x, double mean_snr);

double sample_snr(const rayleigh_params& p, rng::stream& g);

// Draws the per-round mutual informations of one session (length rounds).
mi_trace sample_trace(const channel_model& model, int rounds, rng::stream& g);

// Validates state lists: equal sizes, nonnegative mi, probabilities in [0,1]
// summing to 1 within 1e-12. Throws std::invalid_argument otherwise.
void validate(const discrete_state_dist& d);
void validate(const rayleigh_params& p);

}  // namespace secharq
