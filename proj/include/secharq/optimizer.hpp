#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "secharq/analytics.hpp"
#include "secharq/channel.hpp"
#include "secharq/closedform.hpp"
#include "secharq/montecarlo.hpp"
#include "secharq/protocols.hpp"

namespace secharq {

struct discrete_links {
    discrete_state_dist legit;
    discrete_state_dist eaves;
};

struct rayleigh_links {
    rayleigh_params legit;
    rayleigh_params eaves;
};

using link_model = std::variant<discrete_links, rayleigh_links>;

struct sweep_grids {
    double r_min = 0.0;
    double r_max = 8.0;
    double r_step = 0.1;
    double r1_step = 0.05;   // dummy-rate resolution near the optimum
    double r1_coarse = 0.4;  // first-pass dummy-rate resolution
    double rate_tol = 1e-3;  // bisection width on dummy-rate roots (bits)
    double eta_tie = 5e-3;   // rows this close to the best count as tied
};

struct sweep_budget {
    std::uint64_t n_d = 100'000;         // decode-leg trials inside the sweep
    std::uint64_t n_d_final = 1'000'000; // decode-leg trials for re-scoring
    std::uint64_t n_e = 1'000'000;       // secrecy-leg trials (raised to 1e7
                                         // automatically when xi_s <= 1e-5)
    std::uint64_t seed = 0;
    std::uint64_t enum_budget = 10'000'000;  // tuple cap for exact evaluation
};

struct eval_point {
    double r = 0.0;
    double r1 = 0.0;
    double r2 = 0.0;
    double eta = 0.0;
    double p_co = 0.0;
    double p_so = 0.0;
    double e_l = 1.0;
    bool feasible = false;
    bool cap_bound = false;  // round-one budget solved onto the reliability cap
};

struct opt_result {
    protocol variant = protocol::asr;
    tied_schedule schedule;
    performance_report report;
    bool feasible = false;
    std::vector<eval_point> search_log;
};

struct tradeoff_point {
    double r1 = 0.0;
    double r2 = 0.0;
    double p_co = 0.0;
    double p_so = 0.0;
    double p_co_stderr = 0.0;
    double p_so_stderr = 0.0;
};

struct tradeoff_grids {
    double r1_max = 24.0;
    double r1_step = 0.25;
    double r2_max = 4.0;
    double r2_step = 0.25;  // asr only; tang fixes r2 = 0
};

struct r2_solve_options {
    double rate_tol = 1e-3;  // final bracket width in bits
    double r2_cap = 64.0;    // give up beyond this dummy rate
    double lo = 0.0;
    bool snap = true;  // try rounding the root to short decimals that stay feasible
};

// Smallest r2 >= 0 whose secrecy outage meets xi_s, by bisection on the
// supplied monotone evaluator (P_so is nonincreasing in r2). Returns nullopt
// when even the round-one floor cannot meet the constraint.
std::optional<double> find_r2_star(const std::function<double(double)>& pso_at_r2,
                                   double xi_s, const r2_solve_options& opts = {});

// Convenience wrapper solving r2 for a tied schedule on a concrete model.
std::optional<double> find_r2_star(protocol v, const link_model& m, double r,
                                   double r1, double xi_s, int rounds,
                                   const sweep_budget& b,
                                   const r2_solve_options& opts = {});

// One row per grid R: the best dummy rates at that message rate. For asr the
// round-two-onward rate is driven to the secrecy boundary per (r, r1); for
// tang the single dummy rate is solved directly; tomasin mirrors asr with its
// per-round semantics. Discrete models are evaluated exactly on rate points
// derived from the achievable mutual-information sums.
std::vector<eval_point> throughput_curve(protocol v, const link_model& m,
                                         const outage_constraints& c, int rounds,
                                         const sweep_grids& g, const sweep_budget& b);

// Best feasible point of the curve; ties broken by smaller E[L], then smaller
// total dummy rate. The winner is re-scored at higher precision and the
// constraints re-checked before it is reported feasible.
opt_result optimize(protocol v, const link_model& m, const outage_constraints& c,
                    int rounds, const sweep_grids& g, const sweep_budget& b);

// Pareto front of (P_co, P_so) pairs reachable at the fixed message rate r by
// varying the dummy rates. The asr grid includes r2 = 0, so the tang front is
// never below it.
std::vector<tradeoff_point> tradeoff_curve(protocol v, const rayleigh_links& m,
                                           int rounds, double r,
                                           const tradeoff_grids& g,
                                           const sweep_budget& b);

}  // namespace secharq
