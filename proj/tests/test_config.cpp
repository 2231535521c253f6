#include <doctest.h>

#include <string>

#include "secharq/config.hpp"
#include "secharq/errors.hpp"

using namespace secharq;

TEST_CASE("defaults") {
    const auto cfg = parse_config_text("");
    CHECK_FALSE(cfg.variant.has_value());
    CHECK(cfg.rounds == 1);
    CHECK(cfg.trials == 1'000'000);
    CHECK(cfg.seed == 0);
    CHECK(cfg.constraints.empty());
    CHECK(cfg.rounds_list == std::vector<int>{1});
}

TEST_CASE("full key coverage") {
    const auto cfg = parse_config_text(
        "# experiment\n"
        "protocol = tomasin\n"
        "l = 8\n"
        "gamma_d_db = 15\n"
        "gamma_e = 3.162\n"
        "constraints = 1:1e-2, 0.01:0.01\n"
        "r_min = 0.5\n"
        "r_max = 12\n"
        "r_step = 0.25\n"
        "r1_step = 0.1\n"
        "r1_coarse = 0.5\n"
        "rate_tol = 5e-4\n"
        "eta_tie = 1e-2\n"
        "trials = 200000\n"
        "sweep_trials = 50000\n"
        "e_trials = 400000\n"
        "enum_budget = 5000000\n"
        "seed = 42\n"
        "rounds_list = 1, 2, 4, 8\n"
        "r = 0.5\n"
        "tradeoff_r1_max = 12\n"
        "tradeoff_r1_step = 0.5\n"
        "tradeoff_r2_max = 2\n"
        "tradeoff_r2_step = 0.5\n");
    CHECK(cfg.variant == protocol::tomasin);
    CHECK(cfg.rounds == 8);
    REQUIRE(cfg.gamma_d.has_value());
    CHECK(cfg.gamma_d->mean_snr == doctest::Approx(31.6228).epsilon(1e-5));
    CHECK(cfg.gamma_e->mean_snr == 3.162);
    REQUIRE(cfg.constraints.size() == 2);
    CHECK(cfg.constraints[0].xi_c == 1.0);
    CHECK(cfg.constraints[0].xi_s == 1e-2);
    CHECK(cfg.constraints[1].xi_c == 0.01);
    CHECK(cfg.grids.r_min == 0.5);
    CHECK(cfg.grids.r_max == 12.0);
    CHECK(cfg.grids.r_step == 0.25);
    CHECK(cfg.grids.r1_step == 0.1);
    CHECK(cfg.grids.r1_coarse == 0.5);
    CHECK(cfg.grids.rate_tol == 5e-4);
    CHECK(cfg.grids.eta_tie == 1e-2);
    CHECK(cfg.trials == 200'000);
    CHECK(cfg.sweep_trials == 50'000);
    CHECK(cfg.e_trials == 400'000);
    CHECK(cfg.enum_budget == 5'000'000);
    CHECK(cfg.seed == 42);
    CHECK(cfg.rounds_list == std::vector<int>{1, 2, 4, 8});
    CHECK(cfg.fixed_r == 0.5);
    CHECK(cfg.tradeoff.r1_max == 12.0);
    CHECK(cfg.tradeoff.r2_step == 0.5);
}

TEST_CASE("state tables") {
    const auto cfg = parse_config_text(
        "d_states = 4:0.5, 5:0.5\n"
        "e_states = 2:0.5, 3.5:0.5\n");
    REQUIRE(cfg.d_states.has_value());
    CHECK(cfg.d_states->mi == std::vector<double>{4.0, 5.0});
    CHECK(cfg.d_states->prob == std::vector<double>{0.5, 0.5});
    CHECK(cfg.e_states->mi[1] == 3.5);
}

TEST_CASE("comments and blank lines are skipped") {
    const auto cfg = parse_config_text(
        "\n"
        "# leading comment\n"
        "seed = 9   # trailing comment\n"
        "\n");
    CHECK(cfg.seed == 9);
}

TEST_CASE("malformed input is rejected") {
    CHECK_THROWS_AS(parse_config_text("unknown_key = 1\n"), config_error);
    CHECK_THROWS_AS(parse_config_text("seed = abc\n"), config_error);
    CHECK_THROWS_AS(parse_config_text("trials = -5\n"), config_error);
    CHECK_THROWS_AS(parse_config_text("gamma_d = 1.5x\n"), config_error);
    CHECK_THROWS_AS(parse_config_text("protocol = nope\n"), config_error);
    CHECK_THROWS_AS(parse_config_text("l = 0\n"), config_error);
    CHECK_THROWS_AS(parse_config_text("d_states = 4|0.5\n"), config_error);
    CHECK_THROWS_AS(parse_config_text("d_states = 4:0.6, 5:0.6\n"), config_error);
    CHECK_THROWS_AS(parse_config_text("constraints = 1\n"), config_error);
    CHECK_THROWS_AS(parse_config_text("constraints = 2:0.5\n"), config_error);
    CHECK_THROWS_AS(parse_config_text("just a line\n"), config_error);
    CHECK_THROWS_AS(load_config("/nonexistent/path.ini"), config_error);
}

TEST_CASE("config hash tracks content") {
    const auto a = parse_config_text("seed = 1\ntrials = 100\n");
    const auto b = parse_config_text("trials = 100\nseed = 1\n");
    const auto c = parse_config_text("seed = 2\ntrials = 100\n");
    CHECK(config_hash(a) == config_hash(b));  // key order is canonicalized
    CHECK(config_hash(a) != config_hash(c));
}
