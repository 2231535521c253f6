#include "secharq/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace secharq {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double mutual_info_from_snr(double snr) {
    if (!(snr >= 0.0) || !std::isfinite(snr))
        throw std::domain_error("mutual_info_from_snr: snr must be finite and >= 0");
    return std::log2(1.0 + snr);
}

double snr_tail(double x, double mean_snr) {
    if (!(mean_snr > 0.0)) throw std::domain_error("snr_tail: mean snr must be > 0");
    if (x <= 0.0) return 1.0;
    return std::exp(-x / mean_snr);
}

double sample_snr(const rayleigh_params& p, rng::stream& g) {
    return g.next_exponential(p.mean_snr);
}

void validate(const rayleigh_params& p) {
    if (!(p.mean_snr > 0.0) || !std::isfinite(p.mean_snr))
        throw std::invalid_argument("rayleigh_params: mean snr must be finite and > 0");
}

void validate(const discrete_state_dist& d) {
    if (d.mi.empty() || d.mi.size() != d.prob.size())
        throw std::invalid_argument("discrete_state_dist: need matching nonempty lists");
    double total = 0.0;
    for (std::size_t i = 0; i < d.mi.size(); ++i) {
        if (!(d.mi[i] >= 0.0) || !std::isfinite(d.mi[i]))
            throw std::invalid_argument("discrete_state_dist: mutual informations must be >= 0");
        if (!(d.prob[i] >= 0.0) || d.prob[i] > 1.0)
            throw std::invalid_argument("discrete_state_dist: probabilities must be in [0, 1]");
        total += d.prob[i];
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("discrete_state_dist: probabilities must sum to 1");
}

namespace {

std::size_t pick_state(const discrete_state_dist& d, double u) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < d.prob.size(); ++i) {
        acc += d.prob[i];
        if (u < acc) return i;
    }
    return d.prob.size() - 1;
}

}  // namespace

mi_trace sample_trace(const channel_model& model, int rounds, rng::stream& g) {
    if (rounds < 1) throw std::domain_error("sample_trace: rounds must be >= 1");
    mi_trace trace(static_cast<std::size_t>(rounds));
    if (const auto* p = std::get_if<rayleigh_params>(&model)) {
        for (auto& v : trace) v = mutual_info_from_snr(sample_snr(*p, g));
    } else {
        const auto& d = std::get<discrete_state_dist>(model);
        for (auto& v : trace) v = d.mi[pick_state(d, g.next_unit())];
    }
    return trace;
}

}  // namespace secharq
