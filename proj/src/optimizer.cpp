#include "secharq/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <utility>

#include "secharq/errors.hpp"
#include "secharq/rng.hpp"

namespace secharq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Shared sampling scaffolding. The sweep draws each link once and reuses the
// same paths for every candidate rate point, so candidate comparisons are
// exact on the sampled paths and rerunning with one seed is reproducible.
// ---------------------------------------------------------------------------

// Row-major per-trial cumulative mutual informations, one column per round.
struct cum_mi_matrix {
    std::size_t n = 0;
    int rounds = 0;
    std::vector<float> v;

    double at(std::size_t i, int l) const {
        return static_cast<double>(v[i * static_cast<std::size_t>(rounds) +
                                     static_cast<std::size_t>(l)]);
    }
};

cum_mi_matrix sample_cum_mi(const rayleigh_params& p, int rounds, std::uint64_t n,
                            std::uint64_t seed, std::uint64_t stream_id) {
    cum_mi_matrix m;
    m.n = static_cast<std::size_t>(n);
    m.rounds = rounds;
    m.v.resize(m.n * static_cast<std::size_t>(rounds));
    for (std::size_t i = 0; i < m.n; ++i) {
        auto gen = rng::substream(seed, stream_id, i);
        double s = 0.0;
        for (int l = 0; l < rounds; ++l) {
            s += mutual_info_from_snr(gen.next_exponential(p.mean_snr));
            m.v[i * static_cast<std::size_t>(rounds) + static_cast<std::size_t>(l)] =
                static_cast<float>(s);
        }
    }
    return m;
}

// Column-sorted copy for empirical CDF lookups via binary search.
struct sorted_cols {
    std::size_t n = 0;
    int rounds = 0;
    std::vector<float> v;  // column-major, each column ascending

    const float* col(int l) const { return v.data() + static_cast<std::size_t>(l) * n; }

    double frac_below(int l, double x) const {
        const float* c = col(l);
        const auto it =
            std::lower_bound(c, c + n, x, [](float a, double b) { return a < b; });
        return static_cast<double>(it - c) / static_cast<double>(n);
    }

    double frac_above(int l, double x) const {
        const float* c = col(l);
        const auto it =
            std::upper_bound(c, c + n, x, [](double b, float a) { return b < a; });
        return static_cast<double>(c + n - it) / static_cast<double>(n);
    }

    // Empirical upper quantile: smallest sample value with tail mass <= tail.
    double upper_quantile(int l, double tail) const {
        const float* c = col(l);
        const auto k = static_cast<std::size_t>(
            std::ceil((1.0 - tail) * static_cast<double>(n)));
        return c[std::min(k, n - 1)];
    }
};

sorted_cols sort_columns(const cum_mi_matrix& m) {
    sorted_cols s;
    s.n = m.n;
    s.rounds = m.rounds;
    s.v.resize(m.v.size());
    for (int l = 0; l < m.rounds; ++l) {
        float* c = s.v.data() + static_cast<std::size_t>(l) * m.n;
        for (std::size_t i = 0; i < m.n; ++i)
            c[i] = m.v[i * static_cast<std::size_t>(m.rounds) + static_cast<std::size_t>(l)];
        std::sort(c, c + m.n);
    }
    return s;
}

std::vector<double> weights_from_p_ac(const std::vector<double>& p_ac) {
    const int rounds = static_cast<int>(p_ac.size());
    std::vector<double> w(p_ac.size(), 0.0);
    double prev = 1.0;
    for (int l = 0; l + 1 < rounds; ++l) {
        w[l] = prev - p_ac[l];
        prev = p_ac[l];
    }
    w[rounds - 1] = rounds > 1 ? p_ac[rounds - 2] : 1.0;
    return w;
}

struct point_stats {
    std::vector<double> p_ac;
    double p_co = 1.0;
    double e_l = 1.0;
    double p_so = 1.0;
    double eta = 0.0;
};

void finish_stats(double r, const std::vector<double>& q, point_stats& st) {
    const int rounds = static_cast<int>(st.p_ac.size());
    st.p_co = st.p_ac[rounds - 1];
    st.e_l = 1.0;
    for (int l = 0; l + 1 < rounds; ++l) st.e_l += st.p_ac[l];
    const auto w = weights_from_p_ac(st.p_ac);
    st.p_so = 0.0;
    for (int l = 0; l < rounds; ++l) st.p_so += q[l] * w[l];
    st.eta = r * (1.0 - st.p_co) / st.e_l;
}

// Decode-leg prefix failure probabilities for cumulative-rate protocols:
// still undecoded through round l iff max_j<=l (S_d[j] - (j-1) r2) < r + r1.
std::vector<double> decode_prefix_fail(const cum_mi_matrix& d, double r, double r1,
                                       double r2) {
    const int rounds = d.rounds;
    std::vector<std::size_t> fail(static_cast<std::size_t>(rounds), 0);
    const double thr = r + r1;
    for (std::size_t i = 0; i < d.n; ++i) {
        double best = -kInf;
        for (int l = 0; l < rounds; ++l) {
            best = std::max(best, d.at(i, l) - l * r2);
            if (best < thr)
                ++fail[static_cast<std::size_t>(l)];
            else
                break;  // monotone: once decoded, stays decoded
        }
    }
    std::vector<double> p_ac(static_cast<std::size_t>(rounds));
    for (int l = 0; l < rounds; ++l)
        p_ac[l] = static_cast<double>(fail[l]) / static_cast<double>(d.n);
    return p_ac;
}

// Same for the per-round-truncation protocol: contributions max(I_d - dummy, 0)
// accumulate until they reach r.
std::vector<double> tomasin_prefix_fail(const cum_mi_matrix& d, double r, double r1,
                                        double r2) {
    const int rounds = d.rounds;
    std::vector<std::size_t> fail(static_cast<std::size_t>(rounds), 0);
    for (std::size_t i = 0; i < d.n; ++i) {
        double acc = 0.0, prev = 0.0;
        for (int l = 0; l < rounds; ++l) {
            const double mi = d.at(i, l) - prev;
            prev = d.at(i, l);
            acc += std::max(mi - (l == 0 ? r1 : r2), 0.0);
            if (acc < r)
                ++fail[static_cast<std::size_t>(l)];
            else
                break;
        }
    }
    std::vector<double> p_ac(static_cast<std::size_t>(rounds));
    for (int l = 0; l < rounds; ++l)
        p_ac[l] = static_cast<double>(fail[l]) / static_cast<double>(d.n);
    return p_ac;
}

// Secrecy-leg violation probabilities by prefix for cumulative budgets:
// leaked by round l iff exists j<=l with S_e[j] > r1 + (j-1) r2.
std::vector<double> secrecy_violation(const cum_mi_matrix& e, double r1, double r2) {
    const int rounds = e.rounds;
    std::vector<std::size_t> cnt(static_cast<std::size_t>(rounds), 0);
    for (std::size_t i = 0; i < e.n; ++i) {
        bool leaked = false;
        for (int l = 0; l < rounds; ++l) {
            leaked = leaked || e.at(i, l) > r1 + l * r2;
            cnt[static_cast<std::size_t>(l)] += leaked;
        }
    }
    std::vector<double> q(static_cast<std::size_t>(rounds));
    for (int l = 0; l < rounds; ++l)
        q[l] = static_cast<double>(cnt[l]) / static_cast<double>(e.n);
    return q;
}

double mi_cdf(double x, double gamma) {
    if (x <= 0.0) return 0.0;
    return 1.0 - snr_tail(std::exp2(x) - 1.0, gamma);
}

// Per-round secrecy conditions against an exponential SNR are independent
// across rounds, so the leak probabilities need no sampling.
std::vector<double> tomasin_violation_exact(double gamma_e, int rounds, double r1,
                                            double r2) {
    std::vector<double> q(static_cast<std::size_t>(rounds));
    double secure = mi_cdf(r1, gamma_e);
    q[0] = 1.0 - secure;
    const double per_round = mi_cdf(r2, gamma_e);
    for (int l = 1; l < rounds; ++l) {
        secure *= per_round;
        q[l] = 1.0 - secure;
    }
    return q;
}

// ---------------------------------------------------------------------------
// Dummy-rate solving on sampled paths.
// ---------------------------------------------------------------------------

struct rayleigh_sweep_ctx {
    const rayleigh_links* links = nullptr;
    const cum_mi_matrix* d = nullptr;
    const cum_mi_matrix* e = nullptr;  // null for the per-round protocol
    protocol v = protocol::asr;
};

point_stats score_point(const rayleigh_sweep_ctx& ctx, double r, double r1, double r2) {
    point_stats st;
    if (ctx.v == protocol::tomasin) {
        st.p_ac = tomasin_prefix_fail(*ctx.d, r, r1, r2);
        finish_stats(r, tomasin_violation_exact(ctx.links->eaves.mean_snr,
                                                ctx.d->rounds, r1, r2),
                     st);
    } else {
        st.p_ac = decode_prefix_fail(*ctx.d, r, r1, r2);
        finish_stats(r, secrecy_violation(*ctx.e, r1, r2), st);
    }
    return st;
}

// Sorted per-trial thresholds t[l] such that, for a fixed round-one budget r1,
// the secrecy prefix through round l is violated exactly when r2 < t[l]. Turns
// every later-round budget query into a binary search.
struct r2_transform {
    std::size_t n = 0;
    int rounds = 0;
    std::vector<float> cols;  // column-major sorted; +inf rows leak at round one

    double q(int l, double r2) const {
        const float* c = cols.data() + static_cast<std::size_t>(l) * n;
        const auto it =
            std::upper_bound(c, c + n, r2, [](double b, float a) { return b < a; });
        return static_cast<double>(c + n - it) / static_cast<double>(n);
    }
};

r2_transform build_r2_transform(const cum_mi_matrix& e, double r1) {
    r2_transform t;
    t.n = e.n;
    t.rounds = e.rounds;
    t.cols.resize(e.v.size());
    constexpr float finf = std::numeric_limits<float>::infinity();
    for (std::size_t i = 0; i < e.n; ++i) {
        const bool leak1 = e.at(i, 0) > r1;
        double best = -kInf;
        t.cols[i] = leak1 ? finf : -finf;
        for (int l = 1; l < e.rounds; ++l) {
            best = std::max(best, (e.at(i, l) - r1) / l);
            t.cols[static_cast<std::size_t>(l) * e.n + i] =
                leak1 ? finf : static_cast<float>(best);
        }
    }
    for (int l = 0; l < e.rounds; ++l) {
        float* c = t.cols.data() + static_cast<std::size_t>(l) * e.n;
        std::sort(c, c + e.n);
    }
    return t;
}

double pso_with_transform(const cum_mi_matrix& d, const r2_transform& t, double r,
                          double r1, double r2, point_stats* out = nullptr) {
    point_stats st;
    st.p_ac = decode_prefix_fail(d, r, r1, r2);
    std::vector<double> q(static_cast<std::size_t>(t.rounds));
    for (int l = 0; l < t.rounds; ++l) q[l] = t.q(l, r2);
    finish_stats(r, q, st);
    if (out) *out = std::move(st);
    return out ? out->p_so : st.p_so;
}

// Generic monotone root finder shared by the r1 and r2 solves: smallest rate
// in [lo, cap] with f(rate) <= xi, assuming f nonincreasing on the paths.
std::optional<double> solve_rate(const std::function<double(double)>& f, double xi,
                                 double lo, double cap, double tol) {
    if (f(lo) <= xi) return lo;
    double bad = lo;
    double hi = lo + 1.0;
    while (f(hi) > xi) {
        bad = hi;
        hi = lo + 2.0 * (hi - lo);
        if (hi > cap) return std::nullopt;
    }
    while (hi - bad > tol) {
        const double mid = 0.5 * (bad + hi);
        (f(mid) <= xi ? hi : bad) = mid;
    }
    return hi;
}

// ---------------------------------------------------------------------------
// Exact optimization on finite-state models. Candidate rates come from the
// achievable mutual-information sums: between two consecutive achievable sums
// nothing changes except the message rate itself, so every optimum sits on a
// boundary where some decode or secrecy condition holds with equality.
// ---------------------------------------------------------------------------

std::vector<std::set<double>> prefix_sum_sets(const discrete_state_dist& s, int rounds,
                                              std::uint64_t budget) {
    std::vector<std::set<double>> sets(static_cast<std::size_t>(rounds));
    sets[0].insert(s.mi.begin(), s.mi.end());
    std::uint64_t work = sets[0].size();
    for (int l = 1; l < rounds; ++l) {
        for (double base : sets[l - 1])
            for (double m : s.mi) {
                sets[l].insert(base + m);
                if (++work > budget)
                    throw enumeration_budget_error(
                        "rate-candidate enumeration exceeds the tuple budget");
            }
    }
    return sets;
}

// Achievable prefix sums of the truncated decode contributions for one choice
// of dummy rates.
std::vector<std::set<double>> tomasin_contrib_sets(const discrete_state_dist& s,
                                                   int rounds, double r1, double r2,
                                                   std::uint64_t budget) {
    std::vector<std::set<double>> sets(static_cast<std::size_t>(rounds));
    for (double m : s.mi) sets[0].insert(std::max(m - r1, 0.0));
    std::uint64_t work = sets[0].size();
    for (int l = 1; l < rounds; ++l) {
        for (double base : sets[l - 1])
            for (double m : s.mi) {
                sets[l].insert(base + std::max(m - r2, 0.0));
                if (++work > budget)
                    throw enumeration_budget_error(
                        "rate-candidate enumeration exceeds the tuple budget");
            }
    }
    return sets;
}

std::vector<std::pair<double, double>> dummy_candidates(protocol v,
                                                        const discrete_links& m,
                                                        int rounds,
                                                        std::uint64_t budget) {
    const auto e_sums = prefix_sum_sets(m.eaves, rounds, budget);
    std::set<std::pair<double, double>> cand;
    cand.emplace(0.0, 0.0);

    if (v == protocol::tomasin) {
        std::set<double> atoms(m.eaves.mi.begin(), m.eaves.mi.end());
        atoms.insert(0.0);
        for (double r1 : atoms)
            for (double r2 : atoms) cand.emplace(r1, r2);
    } else {
        // Boundary lines r1 + (l-1) r2 = s in the dummy-rate plane; optima sit
        // on intersections of two lines or of a line with an axis.
        std::vector<std::pair<int, double>> lines;  // (l, s), l 1-based
        for (int l = 1; l <= rounds; ++l)
            for (double s : e_sums[l - 1]) lines.emplace_back(l, s);
        for (const auto& [l, s] : lines) {
            cand.emplace(s, 0.0);
            if (l > 1) cand.emplace(0.0, s / (l - 1));
        }
        if (v == protocol::asr) {
            for (std::size_t a = 0; a < lines.size(); ++a)
                for (std::size_t b = a + 1; b < lines.size(); ++b) {
                    const auto [l1, s1] = lines[a];
                    const auto [l2, s2] = lines[b];
                    if (l1 == l2) continue;
                    const double r2 = (s2 - s1) / (l2 - l1);
                    const double r1 = s1 - (l1 - 1) * r2;
                    if (r1 >= 0.0 && r2 >= 0.0) cand.emplace(r1, r2);
                }
        }
    }
    if (v == protocol::tang) {
        std::set<std::pair<double, double>> flat;
        for (const auto& [r1, r2] : cand)
            if (r2 == 0.0) flat.emplace(r1, 0.0);
        return {flat.begin(), flat.end()};
    }
    return {cand.begin(), cand.end()};
}

std::vector<double> message_rate_candidates(protocol v, const discrete_links& m,
                                            int rounds, double r1, double r2,
                                            std::uint64_t budget) {
    std::set<double> rs;
    if (v == protocol::tomasin) {
        const auto sums = tomasin_contrib_sets(m.legit, rounds, r1, r2, budget);
        for (const auto& lvl : sums)
            for (double s : lvl)
                if (s > 0.0) rs.insert(s);
    } else {
        const auto sums = prefix_sum_sets(m.legit, rounds, budget);
        for (int l = 1; l <= rounds; ++l)
            for (double s : sums[l - 1]) {
                const double r = s - r1 - (l - 1) * r2;
                if (r > 0.0) rs.insert(r);
            }
    }
    return {rs.begin(), rs.end()};
}

std::vector<eval_point> discrete_curve(protocol v, const discrete_links& m,
                                       const outage_constraints& c, int rounds,
                                       const sweep_budget& b) {
    std::vector<eval_point> rows;
    for (const auto& [r1, r2] : dummy_candidates(v, m, rounds, b.enum_budget)) {
        for (double r : message_rate_candidates(v, m, rounds, r1, r2, b.enum_budget)) {
            const tied_schedule ts{r, r1, r2, rounds};
            const auto rep =
                evaluate_discrete(m.legit, m.eaves, ts.expand(v), b.enum_budget);
            eval_point pt;
            pt.r = r;
            pt.r1 = r1;
            pt.r2 = v == protocol::tang ? 0.0 : r2;
            pt.eta = rep.eta;
            pt.p_co = rep.p_co;
            pt.p_so = rep.p_so;
            pt.e_l = rep.e_l;
            pt.feasible = rep.p_so <= c.xi_s + 1e-12 && rep.p_co <= c.xi_c + 1e-12;
            rows.push_back(pt);
        }
    }
    std::sort(rows.begin(), rows.end(), [](const eval_point& a, const eval_point& b2) {
        return a.r < b2.r || (a.r == b2.r && a.r1 < b2.r1);
    });
    return rows;
}

// ---------------------------------------------------------------------------
// Rayleigh sweeps.
// ---------------------------------------------------------------------------

std::vector<double> rate_grid(const sweep_grids& g) {
    std::vector<double> rs;
    if (!(g.r_step > 0.0) || g.r_max < g.r_min)
        throw std::domain_error("sweep_grids: need r_step > 0 and r_max >= r_min");
    const int steps = static_cast<int>(std::round((g.r_max - g.r_min) / g.r_step));
    for (int k = 0; k <= steps; ++k) rs.push_back(g.r_min + k * g.r_step);
    return rs;
}

std::uint64_t effective_n_e(const outage_constraints& c, const sweep_budget& b) {
    if (c.xi_s <= 1e-5) return std::max<std::uint64_t>(b.n_e, 10'000'000);
    return b.n_e;
}

// Variance of a sweep estimate sitting on a constraint boundary; the re-score
// budgets for it when judging candidates the sweep placed on that boundary.
double boundary_var(double xi, std::uint64_t n) {
    if (n == 0) return 0.0;
    return xi * (1.0 - xi) / static_cast<double>(n);
}

std::vector<eval_point> tang_curve(const rayleigh_links& m, const outage_constraints& c,
                                   int rounds, const sweep_grids& g,
                                   const sweep_budget& b) {
    const auto d = sample_cum_mi(m.legit, rounds, b.n_d, b.seed,
                                 rng::streams::sweep_legitimate);
    const auto e = sample_cum_mi(m.eaves, rounds, effective_n_e(c, b), b.seed,
                                 rng::streams::sweep_eavesdropper);
    const auto ds = sort_columns(d);
    const auto es = sort_columns(e);

    auto stats_at = [&](double r, double r1) {
        point_stats st;
        st.p_ac.resize(static_cast<std::size_t>(rounds));
        std::vector<double> q(static_cast<std::size_t>(rounds));
        for (int l = 0; l < rounds; ++l) {
            st.p_ac[l] = ds.frac_below(l, r + r1);
            q[l] = es.frac_above(l, r1);
        }
        finish_stats(r, q, st);
        return st;
    };

    std::vector<eval_point> rows;
    for (double r : rate_grid(g)) {
        const auto root = solve_rate([&](double r1) { return stats_at(r, r1).p_so; },
                                     c.xi_s, 0.0, 512.0, g.rate_tol);
        eval_point pt;
        pt.r = r;
        if (!root) {
            rows.push_back(pt);
            continue;
        }
        pt.r1 = *root;
        const auto st = stats_at(r, pt.r1);
        pt.eta = st.eta;
        pt.p_co = st.p_co;
        pt.p_so = st.p_so;
        pt.e_l = st.e_l;
        pt.feasible = st.p_so <= c.xi_s && st.p_co <= c.xi_c;
        rows.push_back(pt);
    }
    return rows;
}

std::optional<eval_point> asr_solve_r2(const cum_mi_matrix& d, const r2_transform& t,
                                       double r, double r1, const outage_constraints& c,
                                       double tol) {
    const auto root = solve_rate(
        [&](double r2) { return pso_with_transform(d, t, r, r1, r2); }, c.xi_s, 0.0,
        64.0, tol);
    if (!root) return std::nullopt;
    point_stats st;
    pso_with_transform(d, t, r, r1, *root, &st);
    eval_point pt;
    pt.r = r;
    pt.r1 = r1;
    pt.r2 = *root;
    pt.eta = st.eta;
    pt.p_co = st.p_co;
    pt.p_so = st.p_so;
    pt.e_l = st.e_l;
    pt.feasible = st.p_so <= c.xi_s && st.p_co <= c.xi_c;
    return pt;
}

std::vector<eval_point> asr_curve(const rayleigh_links& m, const outage_constraints& c,
                                  int rounds, const sweep_grids& g,
                                  const sweep_budget& b) {
    const auto d = sample_cum_mi(m.legit, rounds, b.n_d, b.seed,
                                 rng::streams::sweep_legitimate);
    const auto e = sample_cum_mi(m.eaves, rounds, effective_n_e(c, b), b.seed,
                                 rng::streams::sweep_eavesdropper);
    const auto es = sort_columns(e);
    const auto rs = rate_grid(g);

    // Round-one budget bracket: below r1_lo the very first round already leaks
    // too often; above the empirical upper quantile of the full-session leak
    // no later-round budget is needed at all.
    const double r1_lo = r1_min(c.xi_s, m.eaves.mean_snr);
    const double r1_hi = es.upper_quantile(rounds - 1, c.xi_s) + 1e-9;

    std::vector<eval_point> best(rs.size());
    std::vector<std::optional<eval_point>> over(rs.size());
    for (std::size_t k = 0; k < rs.size(); ++k) best[k].r = rs[k];

    auto sweep_r1 = [&](double r1) {
        const auto t = build_r2_transform(e, r1);
        for (std::size_t k = 0; k < rs.size(); ++k) {
            auto pt = asr_solve_r2(d, t, rs[k], r1, c, g.rate_tol);
            if (!pt) continue;
            if (pt->feasible) {
                if (!best[k].feasible || pt->eta > best[k].eta) best[k] = *pt;
            } else if (pt->p_so <= c.xi_s &&
                       (!over[k] || pt->eta > over[k]->eta)) {
                over[k] = *pt;
            }
        }
    };

    for (double r1 = r1_lo; r1 <= r1_hi; r1 += g.r1_coarse) sweep_r1(r1);

    // Refine the round-one budget where it matters: any message rate whose
    // best row sits within the tie window of the front runner.
    double top = 0.0;
    for (const auto& pt : best)
        if (pt.feasible) top = std::max(top, pt.eta);
    std::set<double> refined;
    for (const auto& pt : best) {
        if (!pt.feasible || pt.eta + g.eta_tie < top) continue;
        for (double r1 = std::max(r1_lo, pt.r1 - g.r1_coarse);
             r1 <= std::min(r1_hi, pt.r1 + g.r1_coarse); r1 += g.r1_step) {
            const double key = std::round(r1 / g.r1_step);
            if (refined.insert(key).second) sweep_r1(r1);
        }
    }

    // Where the reliability cap cuts the throughput ridge, the constrained
    // optimum sits on the cap itself: solve the round-one budget onto it,
    // exactly as the later-round budget is solved onto the secrecy boundary,
    // and mark the row so the re-score budgets for the placement noise.
    for (std::size_t k = 0; k < rs.size(); ++k) {
        if (!best[k].feasible || !over[k] || over[k]->eta <= best[k].eta)
            continue;
        auto pco_at = [&](double r1) {
            const auto t = build_r2_transform(e, r1);
            const auto pt = asr_solve_r2(d, t, rs[k], r1, c, g.rate_tol);
            return pt ? pt->p_co : 1.0;
        };
        const auto root =
            solve_rate(pco_at, c.xi_c, over[k]->r1, r1_hi + 1.0, g.rate_tol);
        if (!root) continue;
        const auto t = build_r2_transform(e, *root);
        auto pt = asr_solve_r2(d, t, rs[k], *root, c, g.rate_tol);
        if (pt && pt->feasible && pt->eta > best[k].eta) {
            pt->cap_bound = true;
            best[k] = *pt;
        }
    }
    return best;
}

std::vector<eval_point> tomasin_curve(const rayleigh_links& m,
                                      const outage_constraints& c, int rounds,
                                      const sweep_grids& g, const sweep_budget& b) {
    const auto d = sample_cum_mi(m.legit, rounds, b.n_d, b.seed,
                                 rng::streams::sweep_legitimate);
    rayleigh_sweep_ctx ctx{&m, &d, nullptr, protocol::tomasin};
    const auto rs = rate_grid(g);

    // The round-one leak alone already caps the feasible region, and extra
    // round-one budget beyond a couple of bits past that floor buys nothing.
    const double r1_lo = r1_min(c.xi_s, m.eaves.mean_snr);
    const double r1_hi = r1_min(c.xi_s * 1e-2, m.eaves.mean_snr) + 1.0;

    std::vector<eval_point> best(rs.size());
    std::vector<std::optional<eval_point>> over(rs.size());
    for (std::size_t k = 0; k < rs.size(); ++k) best[k].r = rs[k];

    auto point_at = [&](std::size_t k, double r1) -> std::optional<eval_point> {
        const auto root = solve_rate(
            [&](double r2) { return score_point(ctx, rs[k], r1, r2).p_so; },
            c.xi_s, 0.0, 64.0, g.rate_tol);
        if (!root) return std::nullopt;
        const auto st = score_point(ctx, rs[k], r1, *root);
        eval_point pt;
        pt.r = rs[k];
        pt.r1 = r1;
        pt.r2 = *root;
        pt.eta = st.eta;
        pt.p_co = st.p_co;
        pt.p_so = st.p_so;
        pt.e_l = st.e_l;
        pt.feasible = st.p_so <= c.xi_s && st.p_co <= c.xi_c;
        return pt;
    };

    auto sweep_r1 = [&](double r1) {
        for (std::size_t k = 0; k < rs.size(); ++k) {
            const auto pt = point_at(k, r1);
            if (!pt) continue;
            if (pt->feasible) {
                if (!best[k].feasible || pt->eta > best[k].eta) best[k] = *pt;
            } else if (pt->p_so <= c.xi_s &&
                       (!over[k] || pt->eta > over[k]->eta)) {
                over[k] = *pt;
            }
        }
    };

    for (double r1 = r1_lo; r1 <= r1_hi; r1 += g.r1_coarse) sweep_r1(r1);
    double top = 0.0;
    for (const auto& pt : best)
        if (pt.feasible) top = std::max(top, pt.eta);
    std::set<double> refined;
    for (const auto& pt : best) {
        if (!pt.feasible || pt.eta + g.eta_tie < top) continue;
        for (double r1 = std::max(r1_lo, pt.r1 - g.r1_coarse);
             r1 <= std::min(r1_hi, pt.r1 + g.r1_coarse); r1 += g.r1_step) {
            const double key = std::round(r1 / g.r1_step);
            if (refined.insert(key).second) sweep_r1(r1);
        }
    }

    // Same cap-crossing solve as the split-rate sweep: when the best point
    // above the cap beats the best point under it, the optimum is on the cap.
    for (std::size_t k = 0; k < rs.size(); ++k) {
        if (!best[k].feasible || !over[k] || over[k]->eta <= best[k].eta)
            continue;
        auto pco_at = [&](double r1) {
            const auto pt = point_at(k, r1);
            return pt ? pt->p_co : 1.0;
        };
        const auto root =
            solve_rate(pco_at, c.xi_c, over[k]->r1, r1_hi + 1.0, g.rate_tol);
        if (!root) continue;
        auto pt = point_at(k, *root);
        if (pt && pt->feasible && pt->eta > best[k].eta) {
            pt->cap_bound = true;
            best[k] = *pt;
        }
    }
    return best;
}

void check_inputs(const link_model& m, const outage_constraints& c, int rounds) {
    validate(c);
    if (rounds < 1) throw std::domain_error("optimizer: rounds must be >= 1");
    if (const auto* dm = std::get_if<discrete_links>(&m)) {
        validate(dm->legit);
        validate(dm->eaves);
    } else {
        const auto& rm = std::get<rayleigh_links>(m);
        validate(rm.legit);
        validate(rm.eaves);
    }
}

}  // namespace

std::optional<double> find_r2_star(const std::function<double(double)>& pso_at_r2,
                                   double xi_s, const r2_solve_options& opts) {
    if (!(xi_s > 0.0) || xi_s > 1.0)
        throw std::domain_error("find_r2_star: xi_s must lie in (0, 1]");
    if (!(opts.rate_tol > 0.0) || opts.lo < 0.0)
        throw std::domain_error("find_r2_star: need rate_tol > 0 and lo >= 0");
    const auto root =
        solve_rate(pso_at_r2, xi_s, opts.lo, opts.r2_cap, opts.rate_tol);
    if (!root) return std::nullopt;
    if (!opts.snap || *root == opts.lo) return root;
    // Prefer the shortest decimal inside the bracket: exact boundaries such as
    // whole or half bits come out exact instead of carrying bisection dust.
    for (int k = 0; k <= 6; ++k) {
        const double scale = std::pow(10.0, k);
        const double c = std::round(*root * scale) / scale;
        // Only snap downward: the bisected root is the feasible end of a
        // bracket at most rate_tol wide, so any clean boundary lies below it.
        if (c >= opts.lo && c >= *root - opts.rate_tol && c <= *root &&
            pso_at_r2(c) <= xi_s)
            return c;
    }
    return root;
}

std::optional<double> find_r2_star(protocol v, const link_model& m, double r,
                                   double r1, double xi_s, int rounds,
                                   const sweep_budget& b,
                                   const r2_solve_options& opts) {
    outage_constraints c{1.0, xi_s};
    check_inputs(m, c, rounds);
    if (!(r >= 0.0) || !(r1 >= 0.0))
        throw std::domain_error("find_r2_star: rates must be >= 0");

    if (const auto* dm = std::get_if<discrete_links>(&m)) {
        auto pso = [&](double r2) {
            const tied_schedule ts{r, r1, r2, rounds};
            return evaluate_discrete(dm->legit, dm->eaves, ts.expand(v), b.enum_budget)
                .p_so;
        };
        return find_r2_star(pso, xi_s, opts);
    }
    const auto& rm = std::get<rayleigh_links>(m);
    const auto d = sample_cum_mi(rm.legit, rounds, b.n_d, b.seed,
                                 rng::streams::sweep_legitimate);
    const auto e = sample_cum_mi(rm.eaves, rounds, effective_n_e(c, b), b.seed,
                                 rng::streams::sweep_eavesdropper);
    rayleigh_sweep_ctx ctx{&rm, &d, &e, v};
    auto pso = [&](double r2) { return score_point(ctx, r, r1, r2).p_so; };
    return find_r2_star(pso, xi_s, opts);
}

std::vector<eval_point> throughput_curve(protocol v, const link_model& m,
                                         const outage_constraints& c, int rounds,
                                         const sweep_grids& g, const sweep_budget& b) {
    check_inputs(m, c, rounds);
    if (const auto* dm = std::get_if<discrete_links>(&m))
        return discrete_curve(v, *dm, c, rounds, b);
    const auto& rm = std::get<rayleigh_links>(m);
    switch (v) {
        case protocol::tang:
            return tang_curve(rm, c, rounds, g, b);
        case protocol::tomasin:
            return tomasin_curve(rm, c, rounds, g, b);
        case protocol::asr:
        default:
            return asr_curve(rm, c, rounds, g, b);
    }
}

opt_result optimize(protocol v, const link_model& m, const outage_constraints& c,
                    int rounds, const sweep_grids& g, const sweep_budget& b) {
    auto rows = throughput_curve(v, m, c, rounds, g, b);

    opt_result res;
    res.variant = v;
    res.search_log = rows;

    // Rank candidates: points within eta_tie of the best throughput first
    // (smallest expected duration, then total dummy rate, breaks the tie),
    // remaining feasible points after, by falling throughput.
    std::vector<const eval_point*> order;
    for (const auto& pt : rows)
        if (pt.feasible) order.push_back(&pt);
    if (order.empty()) {
        res.feasible = false;
        return res;
    }
    double top = 0.0;
    for (const auto* pt : order) top = std::max(top, pt->eta);
    const auto key = [](const eval_point& p) {
        return std::make_tuple(p.e_l, p.r1 + p.r2, -p.eta);
    };
    std::sort(order.begin(), order.end(),
              [&](const eval_point* a, const eval_point* b2) {
                  const bool ta = a->eta + g.eta_tie >= top;
                  const bool tb = b2->eta + g.eta_tie >= top;
                  if (ta != tb) return ta;
                  if (ta) return key(*a) < key(*b2);
                  return a->eta > b2->eta;
              });

    res.schedule = tied_schedule{order[0]->r, order[0]->r1, order[0]->r2, rounds};
    if (const auto* dm = std::get_if<discrete_links>(&m)) {
        res.report = evaluate_discrete(dm->legit, dm->eaves, res.schedule.expand(v),
                                       b.enum_budget);
        res.feasible =
            res.report.p_so <= c.xi_s + 1e-12 && res.report.p_co <= c.xi_c + 1e-12;
        return res;
    }
    const auto& rm = std::get<rayleigh_links>(m);
    const std::uint64_t n_e_sweep = effective_n_e(c, b);
    const mc_config final_cfg{std::max(b.n_d_final, n_e_sweep), b.seed};
    // The sweep places every candidate's leak probability on the secrecy
    // boundary (and a cap_bound candidate's outage on the reliability cap)
    // using its own sample, whose quantile error shifts the true value off
    // the boundary by O(sqrt(xi/n)). The re-score must budget for that
    // placement noise on top of its own estimator noise or a boundary point
    // can never be confirmed. A candidate it still rejects was a lucky sweep
    // draw; fall through to the next one rather than report it.
    const double so_place = boundary_var(c.xi_s, n_e_sweep);
    const double co_place = boundary_var(c.xi_c, b.n_d);
    for (std::size_t i = 0; i < order.size() && i < 6; ++i) {
        const tied_schedule ts{order[i]->r, order[i]->r1, order[i]->r2, rounds};
        const auto rep =
            evaluate_rayleigh(rm.legit, rm.eaves, ts.expand(v), final_cfg);
        const double so_tol =
            3.0 * std::sqrt(so_place + rep.p_so_stderr * rep.p_so_stderr);
        const double co_tol =
            3.0 * std::sqrt((order[i]->cap_bound ? co_place : 0.0) +
                            rep.p_co_stderr * rep.p_co_stderr);
        const bool ok =
            rep.p_so <= c.xi_s + so_tol && rep.p_co <= c.xi_c + co_tol;
        if (i == 0 || ok) {
            res.schedule = ts;
            res.report = rep;
            res.feasible = ok;
        }
        if (ok) break;
    }
    return res;
}

std::vector<tradeoff_point> tradeoff_curve(protocol v, const rayleigh_links& m,
                                           int rounds, double r,
                                           const tradeoff_grids& g,
                                           const sweep_budget& b) {
    validate(m.legit);
    validate(m.eaves);
    if (rounds < 1) throw std::domain_error("tradeoff_curve: rounds must be >= 1");
    if (!(r >= 0.0)) throw std::domain_error("tradeoff_curve: r must be >= 0");
    if (!(g.r1_step > 0.0) || !(g.r2_step > 0.0) || g.r1_max < 0.0 || g.r2_max < 0.0)
        throw std::domain_error("tradeoff_curve: grid steps must be > 0");

    const auto d = sample_cum_mi(m.legit, rounds, b.n_d, b.seed,
                                 rng::streams::sweep_legitimate);
    const auto e = sample_cum_mi(m.eaves, rounds, b.n_e, b.seed,
                                 rng::streams::sweep_eavesdropper);
    rayleigh_sweep_ctx ctx{&m, &d, v == protocol::tomasin ? nullptr : &e, v};

    const double err_scale =
        std::sqrt(1.0 / static_cast<double>(b.n_d) + 1.0 / static_cast<double>(b.n_e));
    std::vector<tradeoff_point> out;
    const int n1 = static_cast<int>(std::round(g.r1_max / g.r1_step));
    const int n2 =
        v == protocol::tang ? 0 : static_cast<int>(std::round(g.r2_max / g.r2_step));
    for (int i = 0; i <= n1; ++i) {
        const double r1 = i * g.r1_step;
        for (int j = 0; j <= n2; ++j) {
            const double r2 = j * g.r2_step;
            const auto st = score_point(ctx, r, r1, r2);
            tradeoff_point pt;
            pt.r1 = r1;
            pt.r2 = r2;
            pt.p_co = st.p_co;
            pt.p_so = st.p_so;
            pt.p_co_stderr = std::sqrt(std::max(0.0, st.p_co * (1.0 - st.p_co)) /
                                       static_cast<double>(b.n_d));
            pt.p_so_stderr =
                std::sqrt(std::max(0.0, st.p_so * (1.0 - st.p_so))) * err_scale;
            out.push_back(pt);
        }
    }
    // Keep only the nondominated frontier, sorted by rising connection outage.
    std::sort(out.begin(), out.end(), [](const tradeoff_point& a, const tradeoff_point& b2) {
        return a.p_co < b2.p_co || (a.p_co == b2.p_co && a.p_so < b2.p_so);
    });
    std::vector<tradeoff_point> front;
    double best_so = kInf;
    for (const auto& pt : out) {
        if (pt.p_so >= best_so) continue;
        best_so = pt.p_so;
        front.push_back(pt);
    }
    return front;
}

}  // namespace secharq
