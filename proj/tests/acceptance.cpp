// Acceptance gate: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Reads the calibrated profile (path via argv[1], default
// config/default.json) so thresholds refer to the shipped configuration.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "hetnet/baselines.hpp"
#include "hetnet/harness.hpp"
#include "hetnet/ora.hpp"
#include "hetnet/rhm.hpp"

using namespace hetnet;

namespace {

int g_failures = 0;

void report(int id, const char* what, bool ok, const std::string& detail) {
    std::printf("%s  criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", id, what,
                detail.c_str());
    if (!ok) ++g_failures;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

ScenarioConfig scaled(const ScenarioConfig& base, int n_users, std::uint64_t seed) {
    ScenarioConfig c = base;
    c.n_users = n_users;
    c.seed = seed;
    c.total_bandwidth = base.total_bandwidth * n_users / base.n_users;
    return c;
}

// ---- criterion 1: exact solver dominates the heuristic ---------------------

void check_dominance(const ScenarioConfig& profile) {
    std::vector<double> gaps;
    bool dominated = true;
    int usable = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const ScenarioConfig c = scaled(profile, 8 + static_cast<int>(seed % 5), seed);
        const Scenario s = generate_scenario(c);
        const BidMatrix b = sbs_bid_matrix(s);
        const SolveOutcome ora = solve_ora_exact(s, b);
        const SolveOutcome rhm = solve_rhm(s, b);
        if (ora.status != SolveStatus::ok || rhm.status != SolveStatus::ok) continue;
        ++usable;
        if (ora.total_cost > rhm.total_cost * (1.0 + 1e-9)) dominated = false;
        gaps.push_back((rhm.total_cost - ora.total_cost) / ora.total_cost);
    }
    const double med = gaps.empty() ? 1.0 : median(gaps);
    char detail[128];
    std::snprintf(detail, sizeof(detail), "%d instances, median gap %.4f%%", usable,
                  100.0 * med);
    report(1, "exact cost <= heuristic cost, median gap < 5%",
           usable == 100 && dominated && med < 0.05, detail);
}

// ---- criterion 2: knapsack against full enumeration ------------------------

SimplifiedOraInstance random_instance(std::uint64_t seed, int n, double res) {
    std::mt19937_64 rng(seed);
    SimplifiedOraInstance inst;
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        double w = uniform(rng, 0.0, 2e5);
        if (seed % 2 == 0) w = res * std::floor(w / res);
        inst.delta_phi.push_back(w);
        inst.value.push_back(uniform(rng, 0.0, 1.0));
        inst.eligible.push_back((rng() & 7) != 0);
        total += w;
    }
    inst.delta_w = uniform(rng, 0.0, total);
    return inst;
}

double brute_knapsack(const SimplifiedOraInstance& inst, double res) {
    const int n = static_cast<int>(inst.delta_phi.size());
    const std::uint64_t cap =
        static_cast<std::uint64_t>(std::floor(std::max(inst.delta_w, 0.0) / res));
    double best = 0.0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        std::uint64_t weight = 0;
        double value = 0.0;
        bool ok = true;
        for (int i = 0; i < n && ok; ++i) {
            if (!(mask & (std::uint64_t{1} << i))) continue;
            if (!inst.eligible[i]) ok = false;
            weight += static_cast<std::uint64_t>(std::ceil(inst.delta_phi[i] / res));
            value += inst.value[i];
        }
        if (ok && weight <= cap) best = std::max(best, value);
    }
    return best;
}

void check_knapsack_oracle() {
    const double res = 1e3;
    int mismatches = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const int n = 6 + static_cast<int>(seed % 10);  // up to 15
        const SimplifiedOraInstance inst = random_instance(seed, n, res);
        const KnapsackResult dp = knapsack_dp(inst, res);
        if (std::abs(dp.value - brute_knapsack(inst, res)) > 1e-9) ++mismatches;
    }
    char detail[64];
    std::snprintf(detail, sizeof(detail), "200 instances, %d mismatches", mismatches);
    report(2, "knapsack equals exhaustive enumeration", mismatches == 0, detail);
}

// ---- criterion 3: exact solver vs knapsack in the reduced regime -----------

void check_simplification_consistency(const ScenarioConfig& profile) {
    const double res = 1e3;
    bool all_ok = true;
    std::string detail;
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 12; ++trial) {
        ScenarioConfig c = profile;
        c.r_min = 1e5;
        c.c_p = 1e10;  // power term dominates serving
        const int n = 6 + trial % 5;
        c.n_users = n;
        const double snr_serve = 3.0;
        const double w_min = c.r_min / std::log2(1.0 + snr_serve);
        double g_sbs;
        double phi_bar;
        if (trial % 2 == 0) {
            // positive weights: phi above w_min, budget admits only some users
            const double snr_sbs = 1.0;
            phi_bar = (1.0 + c.eta) * c.r_min / std::log2(1.0 + snr_sbs);
            g_sbs = snr_sbs * c.noise_psd / c.p_s;
            const int k = 1 + static_cast<int>(rng() % n);
            c.total_bandwidth = n * w_min + k * (phi_bar - w_min) + 0.4 * res;
        } else {
            // weightless items: phi below every w_min, all users offload
            const double snr_sbs = 15.0;
            phi_bar = (1.0 + c.eta) * c.r_min / std::log2(1.0 + snr_sbs);
            g_sbs = snr_sbs * c.noise_psd / c.p_s;
            c.total_bandwidth = n * w_min * 2.0;
        }
        c.w_max = w_min;  // pin serving at (p_max, w_min)
        const double g_serve = snr_serve * c.noise_psd / c.p_max;

        Scenario s;
        s.config = c;
        s.config.n_sbs = 1;
        s.user_positions.assign(n, {0.0, 0.0});
        s.sbs_positions.assign(1, {0.0, 0.0});
        s.g_cbs.assign(n, g_serve);
        s.g_sbs.assign(n, g_sbs);
        const BidMatrix b = sbs_bid_matrix(s);

        const SolveOutcome ora = solve_ora_exact(s, b);
        const SimplifiedOraInstance inst = simplify_to_knapsack(s, b);
        const KnapsackResult dp = knapsack_dp(inst, res);
        if (ora.status != SolveStatus::ok) {
            all_ok = false;
            detail = "exact solve infeasible in constructed regime";
            break;
        }
        double ora_value = 0.0;
        for (int i = 0; i < n; ++i) {
            if (!ora.association.mu[i]) ora_value += inst.value[i];
        }
        // one DP step of slack: the DP may lose at most one resolution-rounded item
        const double tol = 1e-9 + res * c.p_max;
        if (std::abs(ora_value - dp.value) > tol) {
            all_ok = false;
            char buf[128];
            std::snprintf(buf, sizeof(buf), "trial %d: ora value %.6g vs dp %.6g",
                          trial, ora_value, dp.value);
            detail = buf;
            break;
        }
    }
    if (all_ok) detail = "12 constructed instances agree";
    report(3, "exact offload set matches the knapsack reduction", all_ok, detail);
}

// ---- criterion 4: dual ascent tracks the direct solver ---------------------

void check_dual_equivalence(const ScenarioConfig& profile) {
    int converged = 0;
    int usable = 0;
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        ScenarioConfig c = profile;
        c.seed = 500 + seed;
        c.n_users = 5 + static_cast<int>(seed % 46);  // up to 50
        const Scenario s = generate_scenario(c);
        const BidMatrix b = sbs_bid_matrix(s);
        const SolveOutcome direct = solve_rhm(s, b, CraSolver::direct);
        const SolveOutcome dual = solve_rhm(s, b, CraSolver::dual_ascent);
        if (direct.status != SolveStatus::ok || dual.status != SolveStatus::ok) continue;
        ++usable;
        if (dual.converged) ++converged;
        worst = std::max(worst, std::abs(dual.total_cost - direct.total_cost) /
                                    direct.total_cost);
    }
    char detail[128];
    std::snprintf(detail, sizeof(detail), "%d instances, %d converged, worst gap %.2e",
                  usable, converged, worst);
    report(4, "dual-ascent cost within 1e-3 of the direct solver",
           usable == 100 && worst <= 1e-3 && converged >= 95, detail);
}

// ---- criterion 5: closed forms -------------------------------------------

void check_closed_forms() {
    std::mt19937_64 rng(77);
    double worst_rt = 0.0;
    double worst_fd = 0.0;
    for (int it = 0; it < 10000; ++it) {
        const double w = uniform(rng, 1e3, 1e7);
        const double r = w * uniform(rng, 0.05, 20.0);  // bounded spectral efficiency
        const double g = std::pow(10.0, uniform(rng, -16.0, -9.0));
        const double n0 = 4e-21;
        const double p = min_power(r, w, g, n0);
        worst_rt = std::max(worst_rt,
                            std::abs(shannon_rate(w, p, g, n0) - r) / r);
        worst_rt = std::max(worst_rt,
                            std::abs(min_bandwidth(r, g, p, n0) - w) / w);
        const double h = r * 1e-6;
        const double fd = (min_power(r + h, w, g, n0) - min_power(r - h, w, g, n0)) /
                          (2.0 * h);
        worst_fd = std::max(worst_fd,
                            std::abs(min_power_rate_derivative(r, w, g, n0) - fd) /
                                std::abs(fd));
    }
    char detail[96];
    std::snprintf(detail, sizeof(detail), "worst round trip %.2e, worst derivative %.2e",
                  worst_rt, worst_fd);
    report(5, "round trips within 1e-9 and derivative within 1e-6",
           worst_rt <= 1e-9 && worst_fd <= 1e-6, detail);
}

// ---- criterion 6: relative speed -----------------------------------------

void check_speedup(const ScenarioConfig& profile) {
    std::vector<double> ora_times;
    std::vector<double> rhm_times;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const ScenarioConfig c = scaled(profile, 14, 300 + seed);
        const Scenario s = generate_scenario(c);
        const BidMatrix b = sbs_bid_matrix(s);
        ora_times.push_back(solve_ora_exact(s, b).wall_clock);
        rhm_times.push_back(solve_rhm(s, b).wall_clock);
    }
    ScenarioConfig big = profile;
    big.n_users = 300;
    const Scenario s = generate_scenario(big);
    const SolveOutcome full = solve_rhm(s, sbs_bid_matrix(s));
    const double m_ora = median(ora_times);
    const double m_rhm = median(rhm_times);
    char detail[128];
    std::snprintf(detail, sizeof(detail),
                  "median exact %.3gs vs heuristic %.3gs; n=300 run %.3gs", m_ora,
                  m_rhm, full.wall_clock);
    report(6, "heuristic at least 10x faster than enumeration",
           m_rhm <= 0.1 * m_ora && full.wall_clock < 1.0 && full.status == SolveStatus::ok,
           detail);
}

// ---- criterion 7: admission crossover ------------------------------------

void check_crossover(const ScenarioConfig& profile) {
    bool ok = true;
    std::string note;
    double prev = 1.0;
    int crossover_seen = -1;
    for (int n = 300; n <= 700; n += 50) {
        ScenarioConfig c = profile;
        c.n_users = n;
        const Scenario s = generate_scenario(c);
        const BidMatrix b = sbs_bid_matrix(s);
        const SolveOutcome dsm = solve_dsm(s, b);
        const SolveOutcome rhm = solve_rhm(s, b);
        double sum_min = 0.0;
        for (int i = 0; i < n; ++i) {
            sum_min += min_bandwidth(c.r_min, s.g_cbs[i], c.p_max, c.noise_psd);
        }
        const bool over = sum_min > c.total_bandwidth;
        if (dsm.service_rate > prev + 1e-12) {
            ok = false;
            note = "DSM service rate increased at n=" + std::to_string(n);
        }
        if (over && dsm.service_rate >= 1.0) {
            ok = false;
            note = "DSM at full service past the crossover, n=" + std::to_string(n);
        }
        if (!over && dsm.service_rate < 1.0) {
            ok = false;
            note = "DSM dropped service before the crossover, n=" + std::to_string(n);
        }
        if (over && crossover_seen < 0) crossover_seen = n;
        if (rhm.status == SolveStatus::ok && rhm.service_rate < 1.0) {
            ok = false;
            note = "heuristic dropped service at n=" + std::to_string(n);
        }
        prev = dsm.service_rate;
    }
    if (crossover_seen < 0) {
        ok = false;
        note = "no crossover in [300, 700]";
    }
    if (ok) note = "crossover at n=" + std::to_string(crossover_seen);
    report(7, "DSM service decays past the analytic crossover, heuristic holds", ok,
           note);
}

// ---- criterion 8: offload band and cost advantage -------------------------

void check_bands(const ScenarioConfig& profile) {
    bool band_ok = true;
    double ratio_sum = 0.0;
    double frac_lo = 1.0;
    double frac_hi = 0.0;
    for (std::uint64_t seed = profile.seed; seed < profile.seed + 5; ++seed) {
        ScenarioConfig c = profile;
        c.seed = seed;
        const Scenario s = generate_scenario(c);
        const BidMatrix b = sbs_bid_matrix(s);
        const SolveOutcome rhm = solve_rhm(s, b);
        const SolveOutcome dsm = solve_dsm(s, b);
        const double frac = static_cast<double>(rhm.offloaded_count) / c.n_users;
        frac_lo = std::min(frac_lo, frac);
        frac_hi = std::max(frac_hi, frac);
        if (frac < 0.60 || frac > 0.90) band_ok = false;
        ratio_sum += rhm.total_cost / dsm.total_cost;
    }
    const double mean_ratio = ratio_sum / 5.0;
    char detail[128];
    std::snprintf(detail, sizeof(detail),
                  "offload fraction in [%.3f, %.3f], mean cost ratio %.3f", frac_lo,
                  frac_hi, mean_ratio);
    report(8, "offload fraction in [0.60, 0.90] and cost ratio <= 0.85",
           band_ok && mean_ratio <= 0.85, detail);
}

// ---- criterion 9: determinism --------------------------------------------

std::string mask_wall_clock(const std::string& csv) {
    static const std::regex row(R"((^|\n)([^,\n]*,[^,\n]*,[^,\n]*,)[^,\n]*)");
    return std::regex_replace(csv, row, "$1$2*");
}

void check_determinism(const ScenarioConfig& profile) {
    ExperimentSpec spec;
    spec.base_config = profile;
    spec.base_config.n_users = 60;
    spec.methods = {Method::dsm, Method::rhm_direct, Method::rhm_dual};
    spec.replications = 3;
    SweepRange range;
    range.param = SweepParam::n_users;
    range.from = 40;
    range.to = 80;
    range.step = 20;
    spec.sweep = range;
    spec.workers = 4;
    const std::string a = mask_wall_clock(csv_text(run_sweep(spec)));
    spec.workers = 2;
    const std::string b = mask_wall_clock(csv_text(run_sweep(spec)));
    report(9, "byte-identical CSV after masking wall clock", a == b,
           a == b ? "identical" : "outputs differ");
}

}  // namespace

int main(int argc, char** argv) {
    const std::string path = argc > 1 ? argv[1] : "config/default.json";
    std::ifstream in(path);
    if (!in) {
        std::fprintf(stderr, "cannot read profile '%s'\n", path.c_str());
        return 2;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    const ScenarioConfig profile = ScenarioConfig::from_json_text(buf.str());

    check_dominance(profile);
    check_knapsack_oracle();
    check_simplification_consistency(profile);
    check_dual_equivalence(profile);
    check_closed_forms();
    check_speedup(profile);
    check_crossover(profile);
    check_bands(profile);
    check_determinism(profile);

    if (g_failures == 0) {
        std::printf("all 9 criteria passed\n");
        return 0;
    }
    std::printf("%d criteria failed\n", g_failures);
    return 1;
}
