// Command-line front end: evaluates and optimizes the HARQ secrecy protocols
// described by an INI-style config and writes CSV with a metadata header.
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "secharq/analytics.hpp"
#include "secharq/channel.hpp"
#include "secharq/closedform.hpp"
#include "secharq/config.hpp"
#include "secharq/errors.hpp"
#include "secharq/montecarlo.hpp"
#include "secharq/optimizer.hpp"
#include "secharq/protocols.hpp"
#include "secharq/version.hpp"

namespace {

using namespace secharq;

struct cli_overrides {
    std::string config_path;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> trials;
    std::optional<std::string> variant;
};

std::string fmt(double x) {
    if (std::isnan(x)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

constexpr double nan_v = std::numeric_limits<double>::quiet_NaN();

experiment_config resolve_config(const cli_overrides& o) {
    experiment_config cfg;
    if (!o.config_path.empty()) cfg = load_config(o.config_path);
    if (o.seed) cfg.seed = *o.seed;
    if (o.trials) cfg.trials = *o.trials;
    if (o.variant) {
        if (*o.variant == "asr")
            cfg.variant = protocol::asr;
        else if (*o.variant == "tang")
            cfg.variant = protocol::tang;
        else if (*o.variant == "tomasin")
            cfg.variant = protocol::tomasin;
        else
            throw config_error("unknown protocol '" + *o.variant + "'");
    }
    return cfg;
}

sweep_budget budget_from(const experiment_config& cfg) {
    sweep_budget b;
    b.n_d_final = std::max<std::uint64_t>(cfg.trials, 2);
    b.n_d = cfg.sweep_trials ? cfg.sweep_trials
                             : std::max<std::uint64_t>(cfg.trials / 10, 10'000);
    if (cfg.e_trials) b.n_e = cfg.e_trials;
    b.seed = cfg.seed;
    b.enum_budget = cfg.enum_budget;
    return b;
}

outage_constraints first_constraint(const experiment_config& cfg) {
    return cfg.constraints.empty() ? outage_constraints{} : cfg.constraints.front();
}

discrete_links require_discrete(const experiment_config& cfg) {
    if (!cfg.d_states || !cfg.e_states)
        throw config_error("this command needs d_states and e_states");
    return {*cfg.d_states, *cfg.e_states};
}

rayleigh_links require_rayleigh(const experiment_config& cfg) {
    if (!cfg.gamma_d || !cfg.gamma_e)
        throw config_error("this command needs gamma_d and gamma_e (or the _db forms)");
    return {*cfg.gamma_d, *cfg.gamma_e};
}

void write_header(std::ostream& os, const char* schema, const experiment_config& cfg) {
    char hash[32];
    std::snprintf(hash, sizeof hash, "%016" PRIx64, config_hash(cfg));
    os << "# secharq " << version << "\n";
    os << "# schema " << schema << " 1\n";
    os << "# seed " << cfg.seed << "\n";
    os << "# config " << hash << "\n";
}

// One row per message rate; per protocol the best exact rate point at that
// message rate, nan where a protocol has no feasible point there.
void cmd_discrete(const experiment_config& cfg, std::ostream& os) {
    const auto links = require_discrete(cfg);
    const auto c = first_constraint(cfg);
    const sweep_budget b = budget_from(cfg);

    const std::vector<protocol> all = {protocol::asr, protocol::tang, protocol::tomasin};
    std::vector<protocol> run = all;
    if (cfg.variant) run = {*cfg.variant};

    std::map<protocol, std::vector<eval_point>> rows;
    std::set<double> rates;
    for (const auto v : run) {
        auto curve = throughput_curve(v, links, c, cfg.rounds, cfg.grids, b);
        for (const auto& pt : curve)
            if (pt.feasible) rates.insert(pt.r);
        rows[v] = std::move(curve);
    }

    write_header(os, "discrete", cfg);
    os << "R,eta_asr,r1_asr,r2_asr,eta_tang,r1_tang,r2_tang,"
          "eta_tomasin,r1_tomasin,r2_tomasin\n";
    for (const double r : rates) {
        os << fmt(r);
        for (const auto v : all) {
            const eval_point* best = nullptr;
            const auto it = rows.find(v);
            if (it != rows.end())
                for (const auto& pt : it->second) {
                    if (!pt.feasible || std::abs(pt.r - r) > 1e-9) continue;
                    if (!best || pt.eta > best->eta) best = &pt;
                }
            if (best)
                os << ',' << fmt(best->eta) << ',' << fmt(best->r1) << ','
                   << fmt(best->r2);
            else
                os << ",nan,nan,nan";
        }
        os << "\n";
    }
}

void cmd_rayleigh(const experiment_config& cfg, std::ostream& os) {
    const auto links = require_rayleigh(cfg);
    const auto c = first_constraint(cfg);
    const sweep_budget b = budget_from(cfg);
    const protocol v = cfg.variant.value_or(protocol::asr);

    const auto curve = throughput_curve(v, links, c, cfg.rounds, cfg.grids, b);

    write_header(os, "rayleigh", cfg);
    os << "# protocol " << to_string(v) << " L " << cfg.rounds << " xi_c "
       << fmt(c.xi_c) << " xi_s " << fmt(c.xi_s) << "\n";
    os << "R,r1,r2,eta,eta_stderr,p_co,p_co_stderr,p_so,p_so_stderr,"
          "e_l,e_l_stderr,feasible\n";
    for (const auto& pt : curve) {
        if (!pt.feasible) {
            os << fmt(pt.r) << ",nan,nan,nan,nan,nan,nan,nan,nan,nan,nan,0\n";
            continue;
        }
        const tied_schedule ts{pt.r, pt.r1, pt.r2, cfg.rounds};
        const auto rep = evaluate_rayleigh(links.legit, links.eaves, ts.expand(v),
                                           {std::max<std::uint64_t>(cfg.trials, 2),
                                            cfg.seed});
        os << fmt(pt.r) << ',' << fmt(pt.r1) << ',' << fmt(pt.r2) << ','
           << fmt(rep.eta) << ',' << fmt(rep.eta_stderr) << ',' << fmt(rep.p_co)
           << ',' << fmt(rep.p_co_stderr) << ',' << fmt(rep.p_so) << ','
           << fmt(rep.p_so_stderr) << ',' << fmt(rep.e_l) << ','
           << fmt(rep.e_l_stderr) << ",1\n";
    }
}

void cmd_tradeoff(const experiment_config& cfg, std::ostream& os) {
    const auto links = require_rayleigh(cfg);
    const sweep_budget b = budget_from(cfg);

    std::vector<protocol> run = {protocol::asr, protocol::tang};
    if (cfg.variant) run = {*cfg.variant};

    write_header(os, "tradeoff", cfg);
    os << "protocol,L,r1,r2,p_co,p_co_stderr,p_so,p_so_stderr\n";
    for (const auto v : run)
        for (const int rounds : cfg.rounds_list)
            for (const auto& pt :
                 tradeoff_curve(v, links, rounds, cfg.fixed_r, cfg.tradeoff, b))
                os << to_string(v) << ',' << rounds << ',' << fmt(pt.r1) << ','
                   << fmt(pt.r2) << ',' << fmt(pt.p_co) << ','
                   << fmt(pt.p_co_stderr) << ',' << fmt(pt.p_so) << ','
                   << fmt(pt.p_so_stderr) << "\n";
}

void cmd_closedform(const experiment_config& cfg, std::ostream& os) {
    const auto links = require_rayleigh(cfg);
    if (cfg.constraints.empty())
        throw config_error("closedform needs at least one constraints pair");

    tail_config tail;
    tail.n_samples = std::max<std::uint64_t>(cfg.trials, 2);
    tail.seed = cfg.seed;

    write_header(os, "closedform", cfg);
    os << "xi_c,xi_s,compatible,r_max,r1_min,r1_max\n";
    for (const auto& c : cfg.constraints) {
        const bool ok =
            compatible(c, links.legit.mean_snr, links.eaves.mean_snr);
        const double rmax =
            ok ? max_secrecy_rate_one_tx(c, links.legit.mean_snr, links.eaves.mean_snr)
               : nan_v;
        const double floor = c.xi_s < 1.0
                                 ? r1_min(c.xi_s, links.eaves.mean_snr)
                                 : 0.0;
        const double ceil = c.xi_s < 1.0
                                ? r1_max(c.xi_s, links.eaves.mean_snr, cfg.rounds, tail)
                                : 0.0;
        os << fmt(c.xi_c) << ',' << fmt(c.xi_s) << ',' << (ok ? 1 : 0) << ','
           << fmt(rmax) << ',' << fmt(floor) << ',' << fmt(ceil) << "\n";
    }
}

void cmd_optimize(const experiment_config& cfg, std::ostream& os) {
    if (cfg.constraints.empty())
        throw config_error("optimize needs at least one constraints pair");
    const sweep_budget b = budget_from(cfg);

    link_model model;
    if (cfg.d_states && cfg.e_states)
        model = require_discrete(cfg);
    else
        model = require_rayleigh(cfg);

    std::vector<protocol> run = {protocol::asr, protocol::tang, protocol::tomasin};
    if (cfg.variant) run = {*cfg.variant};

    write_header(os, "optimize", cfg);
    os << "protocol,xi_c,xi_s,feasible,R,r1,r2,eta,eta_stderr,p_co,p_co_stderr,"
          "p_so,p_so_stderr,e_l,e_l_stderr\n";
    for (const auto v : run)
        for (const auto& c : cfg.constraints) {
            const auto res = optimize(v, model, c, cfg.rounds, cfg.grids, b);
            os << to_string(v) << ',' << fmt(c.xi_c) << ',' << fmt(c.xi_s) << ','
               << (res.feasible ? 1 : 0) << ',';
            if (!res.feasible) {
                os << "nan,nan,nan,nan,nan,nan,nan,nan,nan,nan,nan\n";
                continue;
            }
            const auto& rep = res.report;
            os << fmt(res.schedule.r) << ',' << fmt(res.schedule.r1) << ','
               << fmt(res.schedule.r2) << ',' << fmt(rep.eta) << ','
               << fmt(rep.eta_stderr) << ',' << fmt(rep.p_co) << ','
               << fmt(rep.p_co_stderr) << ',' << fmt(rep.p_so) << ','
               << fmt(rep.p_so_stderr) << ',' << fmt(rep.e_l) << ','
               << fmt(rep.e_l_stderr) << "\n";
        }
}

int run_command(const std::string& name, const cli_overrides& o) {
    const auto cfg = resolve_config(o);

    std::ostringstream body;
    if (name == "discrete")
        cmd_discrete(cfg, body);
    else if (name == "rayleigh")
        cmd_rayleigh(cfg, body);
    else if (name == "tradeoff")
        cmd_tradeoff(cfg, body);
    else if (name == "closedform")
        cmd_closedform(cfg, body);
    else
        cmd_optimize(cfg, body);

    if (o.out_path.empty()) {
        std::cout << body.str();
        return 0;
    }
    std::ofstream out(o.out_path, std::ios::binary);
    if (!out) throw config_error("cannot open output file " + o.out_path);
    out << body.str();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"secure HARQ reliability and secrecy analysis"};
    app.require_subcommand(1);

    cli_overrides o;
    const std::vector<std::string> names = {"discrete", "rayleigh", "tradeoff",
                                            "closedform", "optimize"};
    for (const auto& n : names) {
        auto* sub = app.add_subcommand(n);
        sub->add_option("--config", o.config_path, "experiment config path");
        sub->add_option("--seed", o.seed, "RNG seed override");
        sub->add_option("--trials", o.trials, "trial count override");
        sub->add_option("--out", o.out_path, "output CSV path (default stdout)");
        sub->add_option("--protocol", o.variant, "asr | tang | tomasin");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        return run_command(app.get_subcommands().front()->get_name(), o);
    } catch (const config_error& ex) {
        std::cerr << "config error: " << ex.what() << "\n";
        return 2;
    } catch (const std::domain_error& ex) {
        std::cerr << "config error: " << ex.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& ex) {
        std::cerr << "config error: " << ex.what() << "\n";
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 3;
    }
}
