#pragma once

#include <cstdint>
#include <vector>

#include "secharq/channel.hpp"
#include "secharq/protocols.hpp"

namespace secharq {

// Prefix event probabilities, index l-1 holds round l:
//   p_ac[l-1] = P(decode failed at every round 1..l)
//   p_b[l-1]  = P(secrecy held at every round 1..l)
struct prefix_probs {
    std::vector<double> p_ac;
    std::vector<double> p_b;

    int rounds() const { return static_cast<int>(p_ac.size()); }
};

struct performance_report {
    double p_co = 0.0;  // connection outage
    double p_so = 0.0;  // secrecy outage
    double e_l = 1.0;   // expected number of rounds
    double eta = 0.0;   // secrecy throughput r * (1 - p_co) / e_l
    double p_co_stderr = 0.0;
    double p_so_stderr = 0.0;
    double e_l_stderr = 0.0;
    double eta_stderr = 0.0;
    std::uint64_t n_trials = 0;  // 0 marks an exact computation
};

// Exact prefix probabilities by depth-first enumeration over state tuples.
// Throws enumeration_budget_error when sum_l |states|^l would exceed budget.
prefix_probs prefix_probs_discrete(const discrete_state_dist& d_states,
                                   const discrete_state_dist& e_states,
                                   const rate_schedule& s,
                                   std::uint64_t budget = 10'000'000);

// P(L = l) for l = 1..L, derived from the decode-failure prefixes.
std::vector<double> transmission_pmf(const prefix_probs& pp);

// P_so = 1 - sum_l P(secure through l) P(L = l). The secrecy events are
// independent of the decode events, so the two prefix legs factor. Secrecy is
// evaluated over all L rounds when the message is dropped. Throws
// std::domain_error when a prefix list is not nonincreasing in [0, 1].
double secrecy_outage(const prefix_probs& pp);

double connection_outage(const prefix_probs& pp);

// E[L] = 1 + sum_{l<L} p_ac[l].
double expected_transmissions(const prefix_probs& pp);

// eta = r (1 - p_co) / e_l; zero rounds-used denominator cannot occur (e_l >= 1).
double throughput(double r, double p_co, double e_l);

// Exact end-to-end evaluation of a schedule on a discrete-state pair of links.
performance_report evaluate_discrete(const discrete_state_dist& d_states,
                                     const discrete_state_dist& e_states,
                                     const rate_schedule& s,
                                     std::uint64_t budget = 10'000'000);

}  // namespace secharq
