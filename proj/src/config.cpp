#include "secharq/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "secharq/errors.hpp"

namespace secharq {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw config_error("config: key '" + key + "' has a malformed number: " + v);
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        if (!v.empty() && v[0] == '-') throw std::invalid_argument(v);
        const std::uint64_t x = std::stoull(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw config_error("config: key '" + key + "' needs a nonnegative integer, got " + v);
    }
}

int parse_int(const std::string& key, const std::string& v) {
    const auto u = parse_u64(key, v);
    if (u > 1'000'000) throw config_error("config: key '" + key + "' is implausibly large");
    return static_cast<int>(u);
}

protocol parse_protocol(const std::string& v) {
    if (v == "asr") return protocol::asr;
    if (v == "tang") return protocol::tang;
    if (v == "tomasin") return protocol::tomasin;
    throw config_error("config: unknown protocol '" + v + "' (use asr, tang or tomasin)");
}

discrete_state_dist parse_states(const std::string& key, const std::string& v) {
    discrete_state_dist d;
    for (const auto& item : split(v, ',')) {
        const auto parts = split(item, ':');
        if (parts.size() != 2)
            throw config_error("config: key '" + key + "' expects mi:prob pairs, got " + item);
        d.mi.push_back(parse_double(key, parts[0]));
        d.prob.push_back(parse_double(key, parts[1]));
    }
    try {
        validate(d);
    } catch (const std::exception& ex) {
        throw config_error("config: key '" + key + "': " + ex.what());
    }
    return d;
}

std::vector<outage_constraints> parse_constraints(const std::string& v) {
    std::vector<outage_constraints> out;
    for (const auto& item : split(v, ',')) {
        const auto parts = split(item, ':');
        if (parts.size() != 2)
            throw config_error("config: constraints expect xi_c:xi_s pairs, got " + item);
        outage_constraints c{parse_double("constraints", parts[0]),
                             parse_double("constraints", parts[1])};
        try {
            validate(c);
        } catch (const std::exception& ex) {
            throw config_error(std::string("config: constraints: ") + ex.what());
        }
        out.push_back(c);
    }
    return out;
}

void apply(experiment_config& cfg, const std::string& key, const std::string& value) {
    if (key == "protocol") {
        cfg.variant = parse_protocol(value);
    } else if (key == "l" || key == "rounds") {
        cfg.rounds = parse_int(key, value);
        if (cfg.rounds < 1) throw config_error("config: rounds must be >= 1");
    } else if (key == "rounds_list") {
        cfg.rounds_list.clear();
        for (const auto& item : split(value, ',')) {
            const int l = parse_int(key, item);
            if (l < 1) throw config_error("config: rounds_list entries must be >= 1");
            cfg.rounds_list.push_back(l);
        }
    } else if (key == "gamma_d") {
        cfg.gamma_d = rayleigh_params{parse_double(key, value)};
    } else if (key == "gamma_d_db") {
        cfg.gamma_d = rayleigh_params{db_to_linear(parse_double(key, value))};
    } else if (key == "gamma_e") {
        cfg.gamma_e = rayleigh_params{parse_double(key, value)};
    } else if (key == "gamma_e_db") {
        cfg.gamma_e = rayleigh_params{db_to_linear(parse_double(key, value))};
    } else if (key == "d_states") {
        cfg.d_states = parse_states(key, value);
    } else if (key == "e_states") {
        cfg.e_states = parse_states(key, value);
    } else if (key == "constraints") {
        cfg.constraints = parse_constraints(value);
    } else if (key == "r_min") {
        cfg.grids.r_min = parse_double(key, value);
    } else if (key == "r_max") {
        cfg.grids.r_max = parse_double(key, value);
    } else if (key == "r_step") {
        cfg.grids.r_step = parse_double(key, value);
    } else if (key == "r1_step") {
        cfg.grids.r1_step = parse_double(key, value);
    } else if (key == "r1_coarse") {
        cfg.grids.r1_coarse = parse_double(key, value);
    } else if (key == "rate_tol") {
        cfg.grids.rate_tol = parse_double(key, value);
    } else if (key == "eta_tie") {
        cfg.grids.eta_tie = parse_double(key, value);
    } else if (key == "trials") {
        cfg.trials = parse_u64(key, value);
    } else if (key == "sweep_trials") {
        cfg.sweep_trials = parse_u64(key, value);
    } else if (key == "e_trials") {
        cfg.e_trials = parse_u64(key, value);
    } else if (key == "enum_budget") {
        cfg.enum_budget = parse_u64(key, value);
    } else if (key == "seed") {
        cfg.seed = parse_u64(key, value);
    } else if (key == "tradeoff_r1_max") {
        cfg.tradeoff.r1_max = parse_double(key, value);
    } else if (key == "tradeoff_r1_step") {
        cfg.tradeoff.r1_step = parse_double(key, value);
    } else if (key == "tradeoff_r2_max") {
        cfg.tradeoff.r2_max = parse_double(key, value);
    } else if (key == "tradeoff_r2_step") {
        cfg.tradeoff.r2_step = parse_double(key, value);
    } else if (key == "r") {
        cfg.fixed_r = parse_double(key, value);
        if (cfg.fixed_r < 0.0) throw config_error("config: r must be >= 0");
    } else {
        throw config_error("config: unknown key '" + key + "'");
    }
}

}  // namespace

experiment_config parse_config_text(const std::string& text) {
    experiment_config cfg;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("config line " + std::to_string(lineno) +
                               ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw config_error("config line " + std::to_string(lineno) +
                               ": empty key or value");
        apply(cfg, key, value);
        cfg.raw[key] = value;
    }
    if (cfg.rounds_list.empty()) cfg.rounds_list.push_back(cfg.rounds);
    return cfg;
}

experiment_config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("config: cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

std::uint64_t config_hash(const experiment_config& cfg) {
    std::uint64_t h = 14695981039346656037ull;
    auto mix = [&h](const std::string& s) {
        for (const unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ull;
        }
    };
    for (const auto& [k, v] : cfg.raw) {
        mix(k);
        mix("=");
        mix(v);
        mix("\n");
    }
    return h;
}

}  // namespace secharq
