#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "secharq/channel.hpp"
#include "secharq/closedform.hpp"
#include "secharq/errors.hpp"
#include "secharq/rng.hpp"

using namespace secharq;

namespace {
const double kGammaD = db_to_linear(15.0);
const double kGammaE = db_to_linear(5.0);
}  // namespace

TEST_CASE("single-transmission connection outage") {
    CHECK(pco_one_tx(0.0, 0.0, 3.0) == 0.0);
    CHECK(pco_one_tx(0.0, 1.0, 1.0) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
    CHECK_THROWS_AS(pco_one_tx(-1.0, 0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(pco_one_tx(0.0, 0.0, 0.0), std::domain_error);
}

TEST_CASE("connection outage complements the snr tail") {
    for (double r = 0.0; r <= 4.0; r += 0.5)
        for (double r1 = 0.0; r1 <= 6.0; r1 += 0.75) {
            const double tail = snr_tail(std::exp2(r + r1) - 1.0, kGammaD);
            CHECK(std::abs(pco_one_tx(r, r1, kGammaD) + tail - 1.0) <= 1e-15);
        }
}

TEST_CASE("single-transmission secrecy outage") {
    CHECK(pso_one_tx(0.0, 3.0) == 1.0);
    CHECK(pso_one_tx(3.0, 3.162) ==
          doctest::Approx(std::exp(-(std::exp2(3.0) - 1.0) / 3.162)).epsilon(1e-12));
    CHECK_THROWS_AS(pso_one_tx(-0.1, 3.0), std::domain_error);
}

TEST_CASE("closed forms match simulation") {
    const std::size_t n = 1'000'000;

    std::size_t outages = 0;
    for (std::size_t i = 0; i < n; ++i) {
        auto g = rng::substream(17, 30, i);
        outages += mutual_info_from_snr(g.next_exponential(kGammaD)) < 3.5;
    }
    double est = double(outages) / double(n);
    double ref = pco_one_tx(1.5, 2.0, kGammaD);
    CHECK(std::abs(est - ref) <= 3.0 * std::sqrt(ref * (1.0 - ref) / double(n)));

    std::size_t leaks = 0;
    for (std::size_t i = 0; i < n; ++i) {
        auto g = rng::substream(17, 31, i);
        leaks += mutual_info_from_snr(g.next_exponential(3.162)) > 3.0;
    }
    est = double(leaks) / double(n);
    ref = pso_one_tx(3.0, 3.162);
    CHECK(std::abs(est - ref) <= 3.0 * std::sqrt(ref * (1.0 - ref) / double(n)));
}

TEST_CASE("constraint compatibility") {
    // equal mean SNRs reduce the condition to xi_s >= 1 - xi_c
    CHECK(compatible({0.4, 0.61}, 5.0, 5.0));
    CHECK(compatible({0.4, 0.6}, 5.0, 5.0));
    CHECK_FALSE(compatible({0.4, 0.59}, 5.0, 5.0));

    CHECK(compatible({0.75, 1e-6}, kGammaD, kGammaE));  // 0.25^10 < 1e-6
    CHECK_FALSE(compatible({0.74, 1e-6}, kGammaD, kGammaE));
    CHECK(compatible({0.3, 1.0}, kGammaD, kGammaE));

    // the exponent form and the difference form agree as booleans
    for (double xi_c : {0.05, 0.25, 0.5, 0.75, 0.95})
        for (double xi_s : {1e-6, 1e-4, 1e-2, 0.3, 1.0})
            for (double gd : {1.0, 3.162, 31.6228})
                for (double ge : {1.0, 3.162, 31.6228}) {
                    const bool diff_form =
                        std::pow(xi_s, ge) - std::pow(1.0 - xi_c, gd) >= 0.0;
                    CHECK(compatible({xi_c, xi_s}, gd, ge) == diff_form);
                }
}

TEST_CASE("maximal one-shot secrecy rate") {
    const outage_constraints c{0.75, 1e-2};
    const double r_max = max_secrecy_rate_one_tx(c, kGammaD, kGammaE);
    CHECK(r_max == doctest::Approx(1.527).epsilon(5e-4));

    // at the compatibility boundary the rate collapses to zero
    const double xi_c = 0.3;
    const double xi_s = (1.0 + 1e-12) - xi_c;
    CHECK(max_secrecy_rate_one_tx({xi_c, xi_s}, 5.0, 5.0) ==
          doctest::Approx(0.0).epsilon(1e-9));

    CHECK_THROWS_AS(max_secrecy_rate_one_tx({0.1, 1e-6}, 1.0, 1.0), std::domain_error);
}

TEST_CASE("maximal rate sits on the feasibility boundary") {
    const outage_constraints c{0.75, 1e-2};
    const double r_max = max_secrecy_rate_one_tx(c, kGammaD, kGammaE);
    const double floor = r1_min(c.xi_s, kGammaE);

    // feasible at r_max with the minimal dummy rate, infeasible just above
    CHECK(pso_one_tx(floor, kGammaE) <= c.xi_s + 1e-12);
    CHECK(pco_one_tx(r_max, floor, kGammaD) <= c.xi_c + 1e-9);
    CHECK(pco_one_tx(r_max + 1e-3, floor, kGammaD) > c.xi_c);
}

TEST_CASE("minimal dummy rate") {
    CHECK(r1_min(1.0, 3.162) == 0.0);
    CHECK(r1_min(1e-2, 3.162) == doctest::Approx(3.95).epsilon(5e-3));
    for (double xi_s : {1e-6, 1e-4, 1e-2, 0.3, 0.9})
        CHECK(pso_one_tx(r1_min(xi_s, kGammaE), kGammaE) ==
              doctest::Approx(xi_s).epsilon(1e-12));
    CHECK_THROWS_AS(r1_min(0.0, 3.0), std::domain_error);
    CHECK_THROWS_AS(r1_min(1.1, 3.0), std::domain_error);
}

TEST_CASE("maximal dummy rate") {
    tail_config cfg;
    cfg.n_samples = 200'000;

    // single round: the sum is one term, so both bounds coincide
    CHECK(r1_max(1e-2, kGammaE, 1, cfg) ==
          doctest::Approx(r1_min(1e-2, kGammaE)).epsilon(1e-6));

    // more rounds push the bound strictly up
    const double b1 = r1_max(1e-2, kGammaE, 1, cfg);
    const double b2 = r1_max(1e-2, kGammaE, 2, cfg);
    const double b4 = r1_max(1e-2, kGammaE, 4, cfg);
    CHECK(b2 > b1);
    CHECK(b4 > b2);

    // self-consistency: the tail at the returned root equals the target
    const double root = r1_max(1e-2, kGammaE, 8, cfg);
    const double tail = sum_mi_tail(root, kGammaE, 8, cfg);
    CHECK(std::abs(tail - 1e-2) <= 5e-4);

    CHECK_THROWS_AS(r1_max(1.0, kGammaE, 2, cfg), std::domain_error);
}

TEST_CASE("sampled and quadrature tails agree") {
    tail_config mc;
    mc.n_samples = 400'000;
    tail_config quad;
    quad.method = tail_method::quadrature;

    for (double x : {4.0, 8.0, 12.0}) {
        const double a = sum_mi_tail(x, kGammaE, 4, mc);
        const double b = sum_mi_tail(x, kGammaE, 4, quad);
        CHECK(std::abs(a - b) <= 3e-3);
    }
    CHECK(sum_mi_tail(0.0, kGammaE, 4, quad) == 1.0);
    CHECK(sum_mi_tail(-1.0, kGammaE, 4, mc) == 1.0);

    const double rm = r1_max(1e-2, kGammaE, 4, mc);
    const double rq = r1_max(1e-2, kGammaE, 4, quad);
    CHECK(std::abs(rm - rq) <= 0.03);
}

TEST_CASE("bound monotonicity") {
    tail_config cfg;
    cfg.n_samples = 100'000;
    CHECK(r1_max(1e-2, 2.0, 2, cfg) < r1_max(1e-2, 4.0, 2, cfg));
    CHECK(r1_max(1e-2, kGammaE, 2, cfg) > r1_max(5e-2, kGammaE, 2, cfg));
    CHECK(max_secrecy_rate_one_tx({0.5, 1e-2}, kGammaD, kGammaE) <
          max_secrecy_rate_one_tx({0.75, 1e-2}, kGammaD, kGammaE));
    CHECK(max_secrecy_rate_one_tx({0.75, 1e-3}, kGammaD, kGammaE) <
          max_secrecy_rate_one_tx({0.75, 1e-2}, kGammaD, kGammaE));
}

TEST_CASE("constraint validation") {
    CHECK_NOTHROW(validate(outage_constraints{1.0, 1.0}));
    CHECK_THROWS_AS(validate(outage_constraints{0.0, 0.5}), std::domain_error);
    CHECK_THROWS_AS(validate(outage_constraints{0.5, 1.5}), std::domain_error);
}
