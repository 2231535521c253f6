#include "secharq/protocols.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace secharq {

std::string to_string(protocol p) {
    switch (p) {
        case protocol::asr: return "asr";
        case protocol::tang: return "tang";
        case protocol::tomasin: return "tomasin";
    }
    return "?";
}

double rate_schedule::total_dummy() const {
    return std::accumulate(dummy.begin(), dummy.end(), 0.0);
}

rate_schedule tied_schedule::expand(protocol variant) const {
    rate_schedule s;
    s.variant = variant;
    s.r = r;
    s.dummy.assign(static_cast<std::size_t>(rounds), r2);
    if (!s.dummy.empty()) s.dummy[0] = r1;
    return s;
}

void validate(const rate_schedule& s) {
    if (s.dummy.empty()) throw std::invalid_argument("rate_schedule: need at least one round");
    if (!(s.r >= 0.0)) throw std::invalid_argument("rate_schedule: message rate must be >= 0");
    for (double d : s.dummy)
        if (!(d >= 0.0)) throw std::invalid_argument("rate_schedule: dummy rates must be >= 0");
    if (s.variant == protocol::tang)
        for (std::size_t j = 1; j < s.dummy.size(); ++j)
            if (s.dummy[j] != 0.0)
                throw std::invalid_argument("rate_schedule: tang uses a single round-one dummy rate");
}

namespace {

void check_round(const rate_schedule& s, const mi_trace& trace, int l) {
    if (l < 1 || l > s.rounds()) throw std::domain_error("round index out of schedule range");
    if (static_cast<int>(trace.size()) < l) throw std::domain_error("trace shorter than round index");
}

}  // namespace

bool decode_event(const rate_schedule& s, const mi_trace& i_d, int l) {
    check_round(s, i_d, l);
    if (s.variant == protocol::tomasin) {
        double usable = 0.0;
        for (int j = 0; j < l; ++j) usable += std::max(i_d[j] - s.dummy[j], 0.0);
        return s.r <= usable;
    }
    double info = 0.0, rate = s.r;
    for (int j = 0; j < l; ++j) {
        info += i_d[j];
        rate += s.dummy[j];
    }
    return rate <= info;
}

bool secrecy_event(const rate_schedule& s, const mi_trace& i_e, int l) {
    check_round(s, i_e, l);
    if (s.variant == protocol::tomasin) {
        for (int j = 0; j < l; ++j)
            if (s.dummy[j] < i_e[j]) return false;
        return true;
    }
    double dummy = 0.0, leak = 0.0;
    for (int j = 0; j < l; ++j) {
        dummy += s.dummy[j];
        leak += i_e[j];
    }
    return dummy >= leak;
}

tx_outcome transmission_count(const rate_schedule& s, const mi_trace& i_d) {
    const int rounds = s.rounds();
    for (int l = 1; l <= rounds; ++l)
        if (decode_event(s, i_d, l)) return {l, true};
    return {rounds, false};
}

bool session_secure(const rate_schedule& s, const mi_trace& i_e, int rounds_used) {
    if (rounds_used < 1 || rounds_used > s.rounds())
        throw std::domain_error("rounds_used out of schedule range");
    for (int l = 1; l <= rounds_used; ++l)
        if (!secrecy_event(s, i_e, l)) return false;
    return true;
}

}  // namespace secharq
