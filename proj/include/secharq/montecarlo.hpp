#pragma once

#include <cstdint>
#include <vector>

#include "secharq/analytics.hpp"
#include "secharq/channel.hpp"
#include "secharq/protocols.hpp"

namespace secharq {

struct mc_config {
    std::uint64_t n_trials = 1'000'000;
    std::uint64_t seed = 0;
};

struct mc_estimate {
    double value = 0.0;
    double stderr_ = 0.0;
    std::uint64_t n_trials = 0;
};

// Prefix probabilities with per-round binomial standard errors. The decode leg
// and the secrecy leg are sampled on separate substreams, exploiting the
// independence of the two event families.
struct prefix_estimate {
    prefix_probs probs;
    std::vector<double> p_ac_stderr;
    std::vector<double> p_b_stderr;
    std::uint64_t n_trials = 0;
};

prefix_estimate estimate_prefix_probs(const rayleigh_params& legit,
                                      const rayleigh_params& eaves,
                                      const rate_schedule& s, const mc_config& cfg);

// Factorized estimator: composes the sampled prefix legs exactly like the
// discrete evaluator, with first-order (delta method) standard errors.
performance_report evaluate_rayleigh(const rayleigh_params& legit,
                                     const rayleigh_params& eaves,
                                     const rate_schedule& s, const mc_config& cfg);

// Validation path: simulates whole sessions jointly (both links drawn per
// trial) and scores session_secure over the rounds actually used.
mc_estimate estimate_joint_secrecy_outage(const rayleigh_params& legit,
                                          const rayleigh_params& eaves,
                                          const rate_schedule& s,
                                          const mc_config& cfg);

}  // namespace secharq
