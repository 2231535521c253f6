#pragma once

#include <cstdint>

namespace secharq {

struct outage_constraints {
    double xi_c = 1.0;  // connection outage bound; 1 disables the constraint
    double xi_s = 1.0;  // secrecy outage bound; 1 disables the constraint
};

void validate(const outage_constraints& c);

// Single-transmission connection outage: 1 - exp(-(2^(r+r1) - 1) / gamma_d).
double pco_one_tx(double r, double r1, double gamma_d);

// Single-transmission secrecy outage: exp(-(2^r1 - 1) / gamma_e).
double pso_one_tx(double r1, double gamma_e);

// Single-transmission constraints are jointly satisfiable iff
// xi_s >= (1 - xi_c)^(gamma_d / gamma_e); only the SNR ratio matters.
bool compatible(const outage_constraints& c, double gamma_d, double gamma_e);

// Largest secrecy rate meeting both single-transmission constraints:
// log2((1 - gamma_d ln(1 - xi_c)) / (1 - gamma_e ln(xi_s))).
// Requires compatible(c, gamma_d, gamma_e).
double max_secrecy_rate_one_tx(const outage_constraints& c, double gamma_d,
                               double gamma_e);

// Smallest dummy rate whose round-one secrecy outage meets xi_s:
// log2(1 - gamma_e ln(xi_s)) (natural log).
double r1_min(double xi_s, double gamma_e);

enum class tail_method {
    monte_carlo,  // seeded empirical tail of the L-fold sum
    quadrature,   // deterministic convolution of the per-round density
};

struct tail_config {
    tail_method method = tail_method::monte_carlo;
    std::uint64_t n_samples = 1'000'000;
    std::uint64_t seed = 0x5eecc0de;
    double bits_tol = 1e-4;   // bisection interval width
    int grid_points = 8192;   // quadrature resolution
};

// Dummy rate at which secrecy over all L rounds holds with probability
// 1 - xi_s even with no dummy bits in retransmissions: the root x of
// P(sum_{j<=L} log2(1 + SNR_e,j) >= x) = xi_s, by bisection on a numerically
// estimated tail. For L = 1 the tail is analytic and the result equals r1_min.
double r1_max(double xi_s, double gamma_e, int rounds, const tail_config& cfg = {});

// Tail of the L-fold sum of log2(1 + SNR) informations, exposed for
// cross-validation of the two r1_max estimation routes.
double sum_mi_tail(double x, double gamma_e, int rounds, const tail_config& cfg = {});

}  // namespace secharq
