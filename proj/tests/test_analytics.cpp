#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "secharq/analytics.hpp"
#include "secharq/errors.hpp"
#include "secharq/protocols.hpp"
#include "secharq/rng.hpp"

using namespace secharq;

namespace {

// Two-state example model: legitimate informations {4,5}, eavesdropper
// informations {2,3.5}, all equiprobable.
const discrete_state_dist kD{{4.0, 5.0}, {0.5, 0.5}};
const discrete_state_dist kE{{2.0, 3.5}, {0.5, 0.5}};

rate_schedule asr(double r, std::vector<double> dummy) {
    rate_schedule s;
    s.variant = protocol::asr;
    s.r = r;
    s.dummy = std::move(dummy);
    return s;
}

// Brute-force oracle over the full joint state space: walks every pair of
// state tuples, applies the session logic directly, and aggregates without
// the independence factorization.
struct joint_report {
    double p_co = 0.0;
    double p_so = 0.0;
    double e_l = 0.0;
};

joint_report enumerate_joint(const discrete_state_dist& d, const discrete_state_dist& e,
                             const rate_schedule& s) {
    const int rounds = s.rounds();
    const std::size_t nd = d.size(), ne = e.size();
    std::size_t d_tuples = 1, e_tuples = 1;
    for (int l = 0; l < rounds; ++l) {
        d_tuples *= nd;
        e_tuples *= ne;
    }

    joint_report rep;
    mi_trace i_d(rounds), i_e(rounds);
    for (std::size_t a = 0; a < d_tuples; ++a) {
        double wd = 1.0;
        std::size_t x = a;
        for (int l = 0; l < rounds; ++l) {
            i_d[l] = d.mi[x % nd];
            wd *= d.prob[x % nd];
            x /= nd;
        }
        const auto out = transmission_count(s, i_d);
        rep.p_co += wd * !out.decoded;
        rep.e_l += wd * out.rounds_used;
        for (std::size_t b = 0; b < e_tuples; ++b) {
            double we = 1.0;
            std::size_t y = b;
            for (int l = 0; l < rounds; ++l) {
                i_e[l] = e.mi[y % ne];
                we *= e.prob[y % ne];
                y /= ne;
            }
            rep.p_so += wd * we * !session_secure(s, i_e, out.rounds_used);
        }
    }
    return rep;
}

discrete_state_dist random_states(rng::stream& g, int max_states) {
    const int n = 1 + int(g.next_u64() % max_states);
    discrete_state_dist d;
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        d.mi.push_back(0.5 * double(g.next_u64() % 12));  // ties on purpose
        d.prob.push_back(0.05 + g.next_unit());
        total += d.prob.back();
    }
    for (auto& p : d.prob) p /= total;
    return d;
}

}  // namespace

TEST_CASE("exact prefix probabilities on the two-state example") {
    const auto pp = prefix_probs_discrete(kD, kE, asr(1.5, {3.5, 2.0}));
    REQUIRE(pp.rounds() == 2);
    CHECK(pp.p_ac[0] == 0.5);
    CHECK(pp.p_ac[1] == 0.0);
    CHECK(pp.p_b[0] == 1.0);
    CHECK(pp.p_b[1] == 0.75);
}

TEST_CASE("prefix edge cases") {
    const discrete_state_dist one{{6.0}, {1.0}};
    auto pp = prefix_probs_discrete(one, kE, asr(1.5, {3.5, 2.0}));
    CHECK(pp.p_ac[0] == 0.0);  // 6 > 5 decodes immediately

    // with no dummy rate the first round is secret only when nothing leaks
    const discrete_state_dist e0{{0.0, 1.0}, {0.3, 0.7}};
    pp = prefix_probs_discrete(kD, e0, asr(1.5, {0.0, 0.0}));
    CHECK(pp.p_b[0] == doctest::Approx(0.3).epsilon(1e-15));
}

TEST_CASE("secrecy outage composes the two prefix legs") {
    const auto pp = prefix_probs_discrete(kD, kE, asr(1.5, {3.5, 2.0}));
    CHECK(secrecy_outage(pp) == 0.125);
    CHECK(connection_outage(pp) == 0.0);
    CHECK(expected_transmissions(pp) == 1.5);

    prefix_probs all_secret{{0.4, 0.1}, {1.0, 1.0}};
    CHECK(secrecy_outage(all_secret) == 0.0);

    prefix_probs bad{{0.4, 0.6}, {1.0, 1.0}};  // nonmonotone decode prefix
    CHECK_THROWS_AS(secrecy_outage(bad), std::domain_error);
}

TEST_CASE("transmission pmf telescopes to one") {
    auto g = rng::substream(3, 7, 0);
    for (int it = 0; it < 200; ++it) {
        const int rounds = 1 + int(g.next_u64() % 6);
        std::vector<double> p_ac(rounds);
        for (auto& p : p_ac) p = g.next_unit();
        std::sort(p_ac.rbegin(), p_ac.rend());
        const auto w = transmission_pmf(prefix_probs{p_ac, p_ac});
        double total = 0.0;
        for (double x : w) {
            CHECK(x >= 0.0);
            total += x;
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("connection outage and expected rounds") {
    prefix_probs never{{1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}};
    CHECK(connection_outage(never) == 1.0);
    CHECK(expected_transmissions(never) == 3.0);

    prefix_probs instant{{0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}};
    CHECK(connection_outage(instant) == 0.0);
    CHECK(expected_transmissions(instant) == 1.0);

    prefix_probs single{{0.37}, {1.0}};
    CHECK(connection_outage(single) == 0.37);
}

TEST_CASE("throughput formula") {
    CHECK(throughput(1.5, 0.0, 1.5) == 1.0);
    CHECK(throughput(2.0, 1.0, 3.0) == 0.0);
    CHECK(throughput(0.0, 0.3, 2.0) == 0.0);
    CHECK_THROWS_AS(throughput(-1.0, 0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(throughput(1.0, 0.0, 0.5), std::domain_error);
}

TEST_CASE("end-to-end exact report on the two-state example") {
    const auto rep = evaluate_discrete(kD, kE, asr(1.5, {3.5, 2.0}));
    CHECK(rep.p_co == 0.0);
    CHECK(rep.p_so == 0.125);
    CHECK(rep.e_l == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(rep.eta == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.n_trials == 0);
    CHECK(rep.p_so_stderr == 0.0);
}

TEST_CASE("single-rate baseline equals asr with trailing zeros") {
    auto a = asr(1.5, {3.5, 0.0});
    rate_schedule t = a;
    t.variant = protocol::tang;
    const auto ra = evaluate_discrete(kD, kE, a);
    const auto rt = evaluate_discrete(kD, kE, t);
    CHECK(ra.p_co == rt.p_co);
    CHECK(ra.p_so == rt.p_so);
    CHECK(ra.e_l == rt.e_l);
    CHECK(ra.eta == rt.eta);
}

// The compact sum form against the expanded three-term form with separated
// first and last rounds.
TEST_CASE("expanded secrecy outage form agrees with the compact sum") {
    auto g = rng::substream(4, 7, 0);
    for (int it = 0; it < 1000; ++it) {
        const int rounds = 2 + int(g.next_u64() % 7);
        std::vector<double> p_ac(rounds), p_b(rounds);
        for (auto& p : p_ac) p = g.next_unit();
        for (auto& p : p_b) p = g.next_unit();
        std::sort(p_ac.rbegin(), p_ac.rend());
        std::sort(p_b.rbegin(), p_b.rend());

        double expanded = 1.0 - p_b[0] * (1.0 - p_ac[0]) - p_b[rounds - 1] * p_ac[rounds - 2];
        for (int j = 2; j <= rounds - 1; ++j)
            expanded -= p_b[j - 1] * (p_ac[j - 2] - p_ac[j - 1]);

        const double compact = secrecy_outage(prefix_probs{p_ac, p_b});
        CHECK(std::abs(compact - expanded) <= 1e-12);
    }
}

// Factorized aggregates must equal direct enumeration over the joint state
// space for every protocol variant.
TEST_CASE("factorized outage equals joint enumeration on random instances") {
    auto g = rng::substream(5, 7, 0);
    for (int it = 0; it < 1000; ++it) {
        const int rounds = 1 + int(g.next_u64() % 4);
        const auto d = random_states(g, 3);
        const auto e = random_states(g, 3);
        rate_schedule s;
        const auto pick = g.next_u64() % 3;
        s.variant = pick == 0   ? protocol::asr
                    : pick == 1 ? protocol::tang
                                : protocol::tomasin;
        s.r = 2.0 * g.next_unit();
        s.dummy.assign(rounds, 0.0);
        s.dummy[0] = 4.0 * g.next_unit();
        if (s.variant != protocol::tang)
            for (int l = 1; l < rounds; ++l) s.dummy[l] = 2.0 * g.next_unit();

        const auto pp = prefix_probs_discrete(d, e, s);
        const auto oracle = enumerate_joint(d, e, s);
        CHECK(std::abs(secrecy_outage(pp) - oracle.p_so) <= 1e-12);
        CHECK(std::abs(connection_outage(pp) - oracle.p_co) <= 1e-12);
        CHECK(std::abs(expected_transmissions(pp) - oracle.e_l) <= 1e-12);
    }
}

TEST_CASE("outage moves the right way as rates grow") {
    double prev_so = 1.0, prev_co = -1.0, prev_el = 0.0;
    for (double r1 = 0.0; r1 <= 6.0; r1 += 0.5) {
        const auto rep = evaluate_discrete(kD, kE, asr(1.0, {r1, 1.0}));
        CHECK(rep.p_so <= prev_so + 1e-12);
        CHECK(rep.p_co >= prev_co - 1e-12);
        CHECK(rep.e_l >= prev_el - 1e-12);
        prev_so = rep.p_so;
        prev_co = rep.p_co;
        prev_el = rep.e_l;
    }
}

TEST_CASE("report invariants on random instances") {
    auto g = rng::substream(6, 7, 0);
    for (int it = 0; it < 300; ++it) {
        const int rounds = 1 + int(g.next_u64() % 4);
        const auto d = random_states(g, 3);
        const auto e = random_states(g, 3);
        rate_schedule s;
        s.r = 2.0 * g.next_unit();
        s.dummy.assign(rounds, 0.0);
        for (int l = 0; l < rounds; ++l) s.dummy[l] = 3.0 * g.next_unit();
        const auto rep = evaluate_discrete(d, e, s);
        CHECK(rep.p_co >= 0.0);
        CHECK(rep.p_co <= 1.0);
        CHECK(rep.p_so >= 0.0);
        CHECK(rep.p_so <= 1.0);
        CHECK(rep.e_l >= 1.0);
        CHECK(rep.e_l <= double(rounds) + 1e-12);
        CHECK(rep.eta <= s.r * (1.0 - rep.p_co) + 1e-12);
        CHECK(rep.eta <= s.r + 1e-12);
    }
}

TEST_CASE("enumeration budget is enforced") {
    discrete_state_dist wide;
    for (int i = 0; i < 4; ++i) {
        wide.mi.push_back(double(i));
        wide.prob.push_back(0.25);
    }
    rate_schedule s;
    s.r = 1.0;
    s.dummy.assign(5, 1.0);
    CHECK_THROWS_AS(prefix_probs_discrete(wide, wide, s, 1000),
                    enumeration_budget_error);
    CHECK_NOTHROW(prefix_probs_discrete(wide, wide, s));
}
