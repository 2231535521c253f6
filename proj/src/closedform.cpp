#include "secharq/closedform.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "secharq/channel.hpp"
#include "secharq/errors.hpp"
#include "secharq/rng.hpp"

namespace secharq {

void validate(const outage_constraints& c) {
    if (!(c.xi_c > 0.0) || c.xi_c > 1.0)
        throw std::domain_error("outage_constraints: xi_c must lie in (0, 1]");
    if (!(c.xi_s > 0.0) || c.xi_s > 1.0)
        throw std::domain_error("outage_constraints: xi_s must lie in (0, 1]");
}

double pco_one_tx(double r, double r1, double gamma_d) {
    if (!(r >= 0.0) || !(r1 >= 0.0))
        throw std::domain_error("pco_one_tx: rates must be >= 0");
    if (!(gamma_d > 0.0)) throw std::domain_error("pco_one_tx: mean SNR must be > 0");
    return -std::expm1(-(std::exp2(r + r1) - 1.0) / gamma_d);
}

double pso_one_tx(double r1, double gamma_e) {
    if (!(r1 >= 0.0)) throw std::domain_error("pso_one_tx: rate must be >= 0");
    if (!(gamma_e > 0.0)) throw std::domain_error("pso_one_tx: mean SNR must be > 0");
    return std::exp(-(std::exp2(r1) - 1.0) / gamma_e);
}

bool compatible(const outage_constraints& c, double gamma_d, double gamma_e) {
    validate(c);
    if (!(gamma_d > 0.0) || !(gamma_e > 0.0))
        throw std::domain_error("compatible: mean SNRs must be > 0");
    if (c.xi_c == 1.0) return true;
    // xi_s >= (1 - xi_c)^(gamma_d / gamma_e), compared in log space.
    return std::log(c.xi_s) >= (gamma_d / gamma_e) * std::log1p(-c.xi_c);
}

double max_secrecy_rate_one_tx(const outage_constraints& c, double gamma_d,
                               double gamma_e) {
    if (!compatible(c, gamma_d, gamma_e))
        throw std::domain_error(
            "max_secrecy_rate_one_tx: constraints are incompatible at this SNR pair");
    const double num = 1.0 - gamma_d * std::log1p(-c.xi_c);
    const double den = 1.0 - gamma_e * std::log(c.xi_s);
    return std::log2(num / den);
}

double r1_min(double xi_s, double gamma_e) {
    if (!(xi_s > 0.0) || xi_s > 1.0)
        throw std::domain_error("r1_min: xi_s must lie in (0, 1]");
    if (!(gamma_e > 0.0)) throw std::domain_error("r1_min: mean SNR must be > 0");
    return std::log2(1.0 - gamma_e * std::log(xi_s));
}

namespace {

void check_tail_args(double gamma_e, int rounds, const tail_config& cfg) {
    if (!(gamma_e > 0.0)) throw std::domain_error("sum tail: mean SNR must be > 0");
    if (rounds < 1) throw std::domain_error("sum tail: rounds must be >= 1");
    if (cfg.n_samples < 2) throw std::domain_error("sum tail: need at least 2 samples");
    if (!(cfg.bits_tol > 0.0)) throw std::domain_error("sum tail: tolerance must be > 0");
    if (cfg.grid_points < 16) throw std::domain_error("sum tail: grid too small");
}

// Seeded draws of sum_{j<=L} log2(1 + SNR_j), sorted ascending so repeated
// tail queries reduce to binary search.
std::vector<double> sum_samples(double gamma_e, int rounds, const tail_config& cfg) {
    std::vector<double> sums(cfg.n_samples);
    for (std::uint64_t i = 0; i < cfg.n_samples; ++i) {
        auto gen = rng::substream(cfg.seed, rng::streams::sum_tail, i);
        double s = 0.0;
        for (int l = 0; l < rounds; ++l)
            s += mutual_info_from_snr(gen.next_exponential(gamma_e));
        sums[i] = s;
    }
    std::sort(sums.begin(), sums.end());
    return sums;
}

double tail_from_sorted(const std::vector<double>& sorted, double x) {
    const auto it = std::lower_bound(sorted.begin(), sorted.end(), x);
    return static_cast<double>(sorted.end() - it) / static_cast<double>(sorted.size());
}

// Tail of the L-fold sum by discretized convolution of the density of
// log2(1 + SNR) with itself. The single-round CDF is analytic, so the
// per-round mass in each bin is exact up to the binning itself.
std::vector<double> convolved_mass(double gamma_e, int rounds, int grid_points,
                                   double bin_width) {
    std::vector<double> one(grid_points, 0.0);
    double cdf_prev = 0.0;
    for (int k = 0; k < grid_points; ++k) {
        const double hi = bin_width * (k + 1);
        const double cdf = -std::expm1(-(std::exp2(hi) - 1.0) / gamma_e);
        one[k] = cdf - cdf_prev;
        cdf_prev = cdf;
    }
    std::vector<double> acc = one;
    for (int l = 1; l < rounds; ++l) {
        std::vector<double> next(grid_points, 0.0);
        for (int i = 0; i < grid_points; ++i) {
            if (acc[i] == 0.0) continue;
            const int lim = grid_points - i;
            for (int j = 0; j < lim; ++j) next[i + j] += acc[i] * one[j];
        }
        acc = std::move(next);
    }
    return acc;
}

double quantile_upper(double gamma_e, int rounds, double xi_s) {
    // Generous bracket: the per-round tail is exp(-(2^x - 1)/gamma), so the
    // sum tail at rounds * x is at least the single-round tail at x.
    double hi = rounds * std::max(1.0, std::log2(1.0 - gamma_e * std::log(xi_s)));
    return hi + 1.0;
}

}  // namespace

double sum_mi_tail(double x, double gamma_e, int rounds, const tail_config& cfg) {
    check_tail_args(gamma_e, rounds, cfg);
    if (x <= 0.0) return 1.0;
    if (rounds == 1) return std::exp(-(std::exp2(x) - 1.0) / gamma_e);
    if (cfg.method == tail_method::monte_carlo) {
        return tail_from_sorted(sum_samples(gamma_e, rounds, cfg), x);
    }
    const double span = quantile_upper(gamma_e, rounds, 1e-12);
    const double bin = span / cfg.grid_points;
    const auto mass = convolved_mass(gamma_e, rounds, cfg.grid_points, bin);
    // Bin k spans (k*bin, (k+1)*bin]; count all mass at or above the bin
    // containing x, a half-bin-accurate upper Riemann tail.
    double tail = 0.0;
    const int k0 = std::min(static_cast<int>(x / bin), cfg.grid_points);
    for (int k = k0; k < cfg.grid_points; ++k) tail += mass[k];
    return tail;
}

double r1_max(double xi_s, double gamma_e, int rounds, const tail_config& cfg) {
    if (!(xi_s > 0.0) || xi_s >= 1.0)
        throw std::domain_error("r1_max: xi_s must lie in (0, 1)");
    check_tail_args(gamma_e, rounds, cfg);
    if (rounds == 1) return r1_min(xi_s, gamma_e);

    double lo = 0.0, hi = quantile_upper(gamma_e, rounds, xi_s);
    if (cfg.method == tail_method::monte_carlo) {
        const auto sorted = sum_samples(gamma_e, rounds, cfg);
        if (tail_from_sorted(sorted, hi) > xi_s)
            throw numeric_error("r1_max: bracket upper bound too small for this tail");
        while (hi - lo > cfg.bits_tol) {
            const double mid = 0.5 * (lo + hi);
            (tail_from_sorted(sorted, mid) <= xi_s ? hi : lo) = mid;
        }
    } else {
        const double span = quantile_upper(gamma_e, rounds, 1e-12);
        const double bin = span / cfg.grid_points;
        const auto mass = convolved_mass(gamma_e, rounds, cfg.grid_points, bin);
        std::vector<double> tail(cfg.grid_points + 1, 0.0);
        for (int k = cfg.grid_points - 1; k >= 0; --k) tail[k] = tail[k + 1] + mass[k];
        auto tail_at = [&](double x) {
            const int k0 = std::min(static_cast<int>(x / bin), cfg.grid_points);
            return tail[k0];
        };
        if (tail_at(hi) > xi_s)
            throw numeric_error("r1_max: bracket upper bound too small for this tail");
        while (hi - lo > std::max(cfg.bits_tol, bin)) {
            const double mid = 0.5 * (lo + hi);
            (tail_at(mid) <= xi_s ? hi : lo) = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace secharq
