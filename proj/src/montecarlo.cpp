#include "secharq/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "secharq/rng.hpp"

namespace secharq {

namespace {

void check_cfg(const mc_config& cfg) {
    if (cfg.n_trials < 2) throw std::domain_error("mc_config: need at least 2 trials");
}

mi_trace sample_round_infos(const rayleigh_params& p, int rounds, rng::stream& gen) {
    mi_trace t(static_cast<std::size_t>(rounds));
    for (int l = 0; l < rounds; ++l)
        t[l] = mutual_info_from_snr(gen.next_exponential(p.mean_snr));
    return t;
}

// A whole decode leg is summarized by the round the decoder first succeeds
// (rounds + 1 when it never does); a whole secrecy leg by the round the
// accumulated leak first exceeds the dummy budget. Histograms over those stop
// rounds carry every prefix probability and, because the prefix indicators are
// monotone, every second moment needed for the error bars.
struct stop_histogram {
    std::vector<std::uint64_t> count;  // index 0 .. rounds; last bin = never
    std::uint64_t n = 0;

    explicit stop_histogram(int rounds)
        : count(static_cast<std::size_t>(rounds) + 1, 0) {}

    void record(int stop_round_or_never) {
        ++count[static_cast<std::size_t>(
            std::min<int>(stop_round_or_never, static_cast<int>(count.size())) - 1)];
        ++n;
    }

    // P(stop round > l), the probability the tracked prefix family still holds
    // after round l.
    double survival(int l) const {
        std::uint64_t c = 0;
        for (std::size_t k = static_cast<std::size_t>(l); k < count.size(); ++k)
            c += count[k];
        return static_cast<double>(c) / static_cast<double>(n);
    }

    // Mean and variance of an arbitrary function of the stop round.
    template <typename F>
    std::pair<double, double> moments(F&& f) const {
        double m1 = 0.0, m2 = 0.0;
        for (std::size_t k = 0; k < count.size(); ++k) {
            if (count[k] == 0) continue;
            const double v = f(static_cast<int>(k) + 1);
            const double p = static_cast<double>(count[k]) / static_cast<double>(n);
            m1 += p * v;
            m2 += p * v * v;
        }
        return {m1, m2 - m1 * m1};
    }
};

int first_decode_round(const rate_schedule& s, const mi_trace& t) {
    const int rounds = s.rounds();
    for (int l = 1; l <= rounds; ++l)
        if (decode_event(s, t, l)) return l;
    return rounds + 1;
}

int first_secrecy_break(const rate_schedule& s, const mi_trace& t) {
    const int rounds = s.rounds();
    for (int l = 1; l <= rounds; ++l)
        if (!secrecy_event(s, t, l)) return l;
    return rounds + 1;
}

stop_histogram run_leg(const rayleigh_params& link, const rate_schedule& s,
                       std::uint64_t n, std::uint64_t seed, std::uint64_t stream_id,
                       int (*stopper)(const rate_schedule&, const mi_trace&)) {
    const int rounds = s.rounds();
    stop_histogram h(rounds);
    for (std::uint64_t i = 0; i < n; ++i) {
        auto gen = rng::substream(seed, stream_id, i);
        const auto t = sample_round_infos(link, rounds, gen);
        h.record(stopper(s, t));
    }
    return h;
}

double binom_stderr(double p, std::uint64_t n) {
    return std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(n));
}

}  // namespace

prefix_estimate estimate_prefix_probs(const rayleigh_params& legit,
                                      const rayleigh_params& eaves,
                                      const rate_schedule& s, const mc_config& cfg) {
    validate(s);
    validate(legit);
    validate(eaves);
    check_cfg(cfg);
    const int rounds = s.rounds();
    const auto hd = run_leg(legit, s, cfg.n_trials, cfg.seed,
                            rng::streams::legitimate, &first_decode_round);
    const auto he = run_leg(eaves, s, cfg.n_trials, cfg.seed,
                            rng::streams::eavesdropper, &first_secrecy_break);

    prefix_estimate est;
    est.n_trials = cfg.n_trials;
    est.probs.p_ac.resize(rounds);
    est.probs.p_b.resize(rounds);
    est.p_ac_stderr.resize(rounds);
    est.p_b_stderr.resize(rounds);
    for (int l = 1; l <= rounds; ++l) {
        est.probs.p_ac[l - 1] = hd.survival(l);
        est.probs.p_b[l - 1] = he.survival(l);
        est.p_ac_stderr[l - 1] = binom_stderr(est.probs.p_ac[l - 1], cfg.n_trials);
        est.p_b_stderr[l - 1] = binom_stderr(est.probs.p_b[l - 1], cfg.n_trials);
    }
    return est;
}

performance_report evaluate_rayleigh(const rayleigh_params& legit,
                                     const rayleigh_params& eaves,
                                     const rate_schedule& s, const mc_config& cfg) {
    validate(s);
    validate(legit);
    validate(eaves);
    check_cfg(cfg);
    const int rounds = s.rounds();
    const auto hd = run_leg(legit, s, cfg.n_trials, cfg.seed,
                            rng::streams::legitimate, &first_decode_round);
    const auto he = run_leg(eaves, s, cfg.n_trials, cfg.seed,
                            rng::streams::eavesdropper, &first_secrecy_break);
    const double n = static_cast<double>(cfg.n_trials);

    std::vector<double> p_b(rounds);
    for (int l = 1; l <= rounds; ++l) p_b[l - 1] = he.survival(l);

    performance_report rep;
    rep.n_trials = cfg.n_trials;
    rep.p_co = hd.survival(rounds);
    rep.p_co_stderr = binom_stderr(rep.p_co, cfg.n_trials);

    const auto [e_l, var_len] = hd.moments(
        [&](int d) { return static_cast<double>(std::min(d, rounds)); });
    rep.e_l = e_l;
    rep.e_l_stderr = std::sqrt(var_len / n);

    // Secure sessions: the secrecy leg survives for as long as the decode leg
    // keeps transmitting. Both legs contribute first-order variance; the legs
    // themselves are independent.
    const auto [secure_d, var_d] =
        hd.moments([&](int d) { return p_b[static_cast<std::size_t>(std::min(d, rounds)) - 1]; });
    std::vector<double> w(rounds, 0.0);
    {
        double prev = 1.0;
        for (int l = 1; l < rounds; ++l) {
            w[l - 1] = prev - hd.survival(l);
            prev = hd.survival(l);
        }
        w[rounds - 1] = rounds > 1 ? hd.survival(rounds - 1) : 1.0;
    }
    const auto [secure_e, var_e] = he.moments([&](int f) {
        double acc = 0.0;
        for (int l = 1; l < f && l <= rounds; ++l) acc += w[l - 1];
        return acc;
    });
    (void)secure_e;
    rep.p_so = std::clamp(1.0 - secure_d, 0.0, 1.0);
    rep.p_so_stderr = std::sqrt((var_d + var_e) / n);

    rep.eta = throughput(s.r, rep.p_co, rep.e_l);
    // Connection outage and session length come from the same leg; their
    // coupling reduces to Cov = p_co (rounds - E[L]) for monotone prefixes.
    const double d_pco = -s.r / rep.e_l;
    const double d_el = -s.r * (1.0 - rep.p_co) / (rep.e_l * rep.e_l);
    const double cov = rep.p_co * (static_cast<double>(rounds) - rep.e_l);
    const double var_eta = d_pco * d_pco * rep.p_co * (1.0 - rep.p_co) / n +
                           d_el * d_el * var_len / n + 2.0 * d_pco * d_el * cov / n;
    rep.eta_stderr = std::sqrt(std::max(0.0, var_eta));
    return rep;
}

mc_estimate estimate_joint_secrecy_outage(const rayleigh_params& legit,
                                          const rayleigh_params& eaves,
                                          const rate_schedule& s,
                                          const mc_config& cfg) {
    validate(s);
    validate(legit);
    validate(eaves);
    check_cfg(cfg);
    const int rounds = s.rounds();
    std::uint64_t leaks = 0;
    for (std::uint64_t i = 0; i < cfg.n_trials; ++i) {
        auto gd = rng::substream(cfg.seed, rng::streams::joint_legitimate, i);
        auto ge = rng::substream(cfg.seed, rng::streams::joint_eavesdropper, i);
        const auto td = sample_round_infos(legit, rounds, gd);
        const auto te = sample_round_infos(eaves, rounds, ge);
        const auto out = transmission_count(s, td);
        if (!session_secure(s, te, out.rounds_used)) ++leaks;
    }
    mc_estimate est;
    est.n_trials = cfg.n_trials;
    est.value = static_cast<double>(leaks) / static_cast<double>(cfg.n_trials);
    est.stderr_ = binom_stderr(est.value, cfg.n_trials);
    return est;
}

}  // namespace secharq
