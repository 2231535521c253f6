#include "secharq/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "secharq/errors.hpp"

namespace secharq {

namespace {

std::uint64_t enumeration_cost(std::size_t states, int rounds) {
    std::uint64_t total = 0, level = 1;
    for (int l = 0; l < rounds; ++l) {
        if (level > (std::uint64_t(1) << 62) / states) return UINT64_MAX;
        level *= states;
        if (UINT64_MAX - total < level) return UINT64_MAX;
        total += level;
    }
    return total;
}

void check_budget(const discrete_state_dist& d, const discrete_state_dist& e,
                  int rounds, std::uint64_t budget) {
    const std::uint64_t cost = enumeration_cost(d.size(), rounds);
    const std::uint64_t cost_e = enumeration_cost(e.size(), rounds);
    if (cost == UINT64_MAX || cost_e == UINT64_MAX || cost + cost_e > budget)
        throw enumeration_budget_error(
            "exact enumeration would exceed the tuple budget; use Monte Carlo estimation instead");
}

// Depth-first sweep over state tuples of one link. At depth l the callback
// decides whether the running prefix still satisfies the tracked event family;
// the path probability is accumulated into out[l-1] and pruned branches
// contribute to no deeper level.
template <typename KeepPrefix>
void prefix_dfs(const discrete_state_dist& states, int rounds, mi_trace& trace,
                std::vector<double>& out, double prob, int depth, KeepPrefix&& keep) {
    if (depth == rounds) return;
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (states.prob[i] == 0.0) continue;
        trace[depth] = states.mi[i];
        const double p = prob * states.prob[i];
        if (keep(trace, depth + 1)) {
            out[depth] += p;
            prefix_dfs(states, rounds, trace, out, p, depth + 1, keep);
        }
    }
}

void check_prefix_list(const std::vector<double>& v, const char* name) {
    double prev = 1.0;
    for (double p : v) {
        if (!(p >= -1e-12) || p > 1.0 + 1e-12)
            throw std::domain_error(std::string(name) + ": probabilities must lie in [0, 1]");
        if (p > prev + 1e-9)
            throw std::domain_error(std::string(name) + ": prefix probabilities must be nonincreasing");
        prev = p;
    }
}

}  // namespace

prefix_probs prefix_probs_discrete(const discrete_state_dist& d_states,
                                   const discrete_state_dist& e_states,
                                   const rate_schedule& s, std::uint64_t budget) {
    validate(s);
    validate(d_states);
    validate(e_states);
    const int rounds = s.rounds();
    check_budget(d_states, e_states, rounds, budget);

    prefix_probs pp;
    pp.p_ac.assign(rounds, 0.0);
    pp.p_b.assign(rounds, 0.0);

    mi_trace trace(static_cast<std::size_t>(rounds));
    prefix_dfs(d_states, rounds, trace, pp.p_ac, 1.0, 0,
               [&](const mi_trace& t, int l) { return !decode_event(s, t, l); });
    prefix_dfs(e_states, rounds, trace, pp.p_b, 1.0, 0,
               [&](const mi_trace& t, int l) { return secrecy_event(s, t, l); });
    return pp;
}

std::vector<double> transmission_pmf(const prefix_probs& pp) {
    const int rounds = pp.rounds();
    std::vector<double> w(rounds, 0.0);
    double prev = 1.0;
    for (int l = 0; l + 1 < rounds; ++l) {
        w[l] = prev - pp.p_ac[l];
        prev = pp.p_ac[l];
    }
    w[rounds - 1] = rounds > 1 ? pp.p_ac[rounds - 2] : 1.0;
    return w;
}

double secrecy_outage(const prefix_probs& pp) {
    if (pp.p_ac.size() != pp.p_b.size() || pp.p_ac.empty())
        throw std::domain_error("secrecy_outage: prefix lists must be nonempty and equally long");
    check_prefix_list(pp.p_ac, "p_ac");
    check_prefix_list(pp.p_b, "p_b");
    const auto w = transmission_pmf(pp);
    double secure = 0.0;
    for (int l = 0; l < pp.rounds(); ++l) secure += pp.p_b[l] * w[l];
    return std::clamp(1.0 - secure, 0.0, 1.0);
}

double connection_outage(const prefix_probs& pp) {
    if (pp.p_ac.empty()) throw std::domain_error("connection_outage: empty prefix list");
    return std::clamp(pp.p_ac.back(), 0.0, 1.0);
}

double expected_transmissions(const prefix_probs& pp) {
    if (pp.p_ac.empty()) throw std::domain_error("expected_transmissions: empty prefix list");
    double e = 1.0;
    for (int l = 0; l + 1 < pp.rounds(); ++l) e += pp.p_ac[l];
    return e;
}

double throughput(double r, double p_co, double e_l) {
    if (!(r >= 0.0)) throw std::domain_error("throughput: rate must be >= 0");
    if (!(e_l >= 1.0)) throw std::domain_error("throughput: expected rounds must be >= 1");
    return r * (1.0 - p_co) / e_l;
}

performance_report evaluate_discrete(const discrete_state_dist& d_states,
                                     const discrete_state_dist& e_states,
                                     const rate_schedule& s, std::uint64_t budget) {
    const auto pp = prefix_probs_discrete(d_states, e_states, s, budget);
    performance_report rep;
    rep.p_co = connection_outage(pp);
    rep.p_so = secrecy_outage(pp);
    rep.e_l = expected_transmissions(pp);
    rep.eta = throughput(s.r, rep.p_co, rep.e_l);
    return rep;
}

}  // namespace secharq
