#include "hetnet/rhm.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>

namespace hetnet {

namespace {

AllocProblem to_alloc_problem(const CraProblem& p) {
    AllocProblem a;
    a.gains = p.gains;
    a.r_min = p.r_min;
    a.remaining_w = p.remaining_w;
    a.noise_psd = p.noise_psd;
    a.p_max = p.p_max;
    a.w_max = p.w_max;
    a.c_p = p.c_p;
    a.c_w = p.c_w;
    a.gamma = p.gamma;
    return a;
}

}  // namespace

Association hua_associate(const Scenario& scenario, const BidMatrix& bids) {
    const ScenarioConfig& c = scenario.config;
    Association assoc;
    assoc.mu.assign(c.n_users, 1);
    assoc.beta.assign(c.n_users, std::nullopt);
    for (int i = 0; i < c.n_users; ++i) {
        if (!bids.best_sbs[i]) continue;
        const double w_min = min_bandwidth(c.r_min, scenario.g_cbs[i], c.p_max, c.noise_psd);
        const double offload_cost = c.c_w * bids.best_total(i);
        const double serving_estimate = c.c_w * w_min + c.c_p * c.p_max;
        if (offload_cost < serving_estimate) {
            assoc.mu[i] = 0;
            assoc.beta[i] = bids.best_sbs[i];
        }
    }
    return assoc;
}

CraProblem make_cra_problem(const Scenario& scenario, const BidMatrix& bids,
                            const Association& association) {
    const ScenarioConfig& c = scenario.config;
    CraProblem p;
    p.remaining_w = c.total_bandwidth;
    for (int i = 0; i < c.n_users; ++i) {
        if (association.mu[i]) {
            p.served_users.push_back(i);
            p.gains.push_back(scenario.g_cbs[i]);
            p.r_min.push_back(c.r_min);
        } else {
            p.remaining_w -= bids.total(*association.beta[i], i);
        }
    }
    p.noise_psd = c.noise_psd;
    p.p_max = c.p_max;
    p.w_max = c.w_max;
    p.c_p = c.c_p;
    p.c_w = c.c_w;
    p.gamma = c.gamma;
    return p;
}

AllocResult cra_solve_direct(const CraProblem& problem) {
    return solve_separable_allocation(to_alloc_problem(problem));
}

DualAscentResult cra_solve_dual_ascent(const CraProblem& problem,
                                       const DualAscentOptions& options) {
    const std::size_t n = problem.gains.size();
    const double gcw = problem.gamma * problem.c_w;
    DualAscentResult res;
    res.alloc.w.assign(n, 0.0);
    res.alloc.p.assign(n, 0.0);
    if (n == 0) {
        res.alloc.feasible = true;
        res.converged = true;
        return res;
    }
    const std::vector<double> w_min = alloc_w_min(to_alloc_problem(problem));
    double sum_min = 0.0;
    for (double w : w_min) sum_min += w;
    if (sum_min > problem.remaining_w) {
        res.alloc.bandwidth_deficit = sum_min - problem.remaining_w;
        return res;
    }
    res.alloc.feasible = true;

    std::vector<double> b_max(n), y_step(n), rho(n);
    for (std::size_t i = 0; i < n; ++i) {
        b_max[i] = std::log2(1.0 + problem.p_max * problem.gains[i] / problem.noise_psd);
        y_step[i] = options.step_scale * (gcw / b_max[i]) / problem.r_min[i];
        rho[i] = gcw / (options.prox_scale * w_min[i]);
    }

    std::vector<double> w = options.w0.empty() ? w_min : options.w0;
    std::vector<double> p = options.p0.empty() ? std::vector<double>(n, problem.p_max) : options.p0;
    std::vector<double> y = options.y0.empty() ? std::vector<double>(n, 0.0) : options.y0;
    std::vector<double> prev_res(n, 0.0);
    bool have_prev = false;

    auto offered_rate = [&](std::size_t i) {
        return w[i] * std::log2(1.0 + p[i] * problem.gains[i] / problem.noise_psd);
    };

    std::vector<double> best_w = w;
    std::vector<double> best_p = p;
    double best_residual = std::numeric_limits<double>::infinity();
    std::vector<double> w_next(n);

    for (long k = 0; k < options.max_iter; ++k) {
        double d_primal = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = problem.r_min[i] - offered_rate(i);
            const double grad = have_prev ? 2.0 * r - prev_res[i] : r;
            y[i] = std::max(0.0, y[i] + y_step[i] * grad);
            prev_res[i] = r;
        }
        have_prev = true;
        for (std::size_t i = 0; i < n; ++i) {
            const double p_new = std::clamp(
                y[i] * w[i] / (problem.c_p * std::numbers::ln2) - problem.noise_psd / problem.gains[i],
                0.0, problem.p_max);
            d_primal = std::max(d_primal, std::abs(p_new - p[i]) / problem.p_max);
            p[i] = p_new;
        }
        auto w_at = [&](double lambda, std::vector<double>& out) {
            double sum = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double coef =
                    gcw - y[i] * std::log2(1.0 + p[i] * problem.gains[i] / problem.noise_psd);
                out[i] = std::clamp(w[i] - (coef + lambda) / rho[i], w_min[i], problem.w_max);
                sum += out[i];
            }
            return sum;
        };
        if (w_at(0.0, w_next) > problem.remaining_w) {
            double lo = 0.0;
            double hi = gcw;
            while (w_at(hi, w_next) > problem.remaining_w) hi *= 2.0;
            for (int it = 0; it < 100; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (w_at(mid, w_next) > problem.remaining_w) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            w_at(hi, w_next);
        }
        for (std::size_t i = 0; i < n; ++i) {
            d_primal = std::max(d_primal, std::abs(w_next[i] - w[i]) / w[i]);
            w[i] = w_next[i];
        }

        double max_residual = 0.0;
        double cost = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            max_residual = std::max(
                max_residual, std::abs(problem.r_min[i] - offered_rate(i)) / problem.r_min[i]);
            cost += problem.c_p * p[i] + gcw * w[i];
        }
        res.iterations = k + 1;
        if (options.record_trace) {
            res.trace.push_back({k + 1, max_residual, cost});
        }
        if (max_residual < best_residual) {
            best_residual = max_residual;
            best_w = w;
            best_p = p;
        }
        if (max_residual < options.tol && d_primal < options.tol) {
            res.converged = true;
            break;
        }
    }

    // Primal recovery: keep the bandwidths, set powers exactly from the rate
    // targets so the returned point is feasible, not just near-feasible.
    for (std::size_t i = 0; i < n; ++i) {
        best_p[i] = std::clamp(min_power(problem.r_min[i], best_w[i], problem.gains[i],
                                         problem.noise_psd),
                               0.0, problem.p_max);
    }
    res.alloc.w = best_w;
    res.alloc.p = best_p;
    res.final_residual = best_residual;
    res.alloc.cost = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        res.alloc.cost += problem.c_p * best_p[i] + gcw * best_w[i];
    }
    return res;
}

std::vector<double> stationary_multipliers(const CraProblem& problem, const AllocResult& alloc) {
    std::vector<double> y(problem.gains.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double g = problem.gains[i];
        y[i] = problem.c_p * (problem.noise_psd + alloc.p[i] * g) * std::numbers::ln2 /
               (alloc.w[i] * g);
    }
    return y;
}

SolveOutcome solve_rhm(const Scenario& scenario, const BidMatrix& bids,
                       CraSolver solver_choice, const DualAscentOptions& dual_options) {
    const auto t0 = std::chrono::steady_clock::now();
    const ScenarioConfig& c = scenario.config;
    SolveOutcome out;
    out.association = hua_associate(scenario, bids);
    CraProblem problem = make_cra_problem(scenario, bids, out.association);

    // HUA never checks the budget; if the served set cannot fit, offload more
    // users (largest w_min first, cheaper bid on ties) and flag the outcome.
    {
        std::vector<double> w_min = alloc_w_min(to_alloc_problem(problem));
        double sum_min = 0.0;
        for (double w : w_min) sum_min += w;
        while (sum_min > problem.remaining_w) {
            int pick = -1;
            for (std::size_t s = 0; s < problem.served_users.size(); ++s) {
                const int u = problem.served_users[s];
                if (!bids.best_sbs[u]) continue;
                if (pick < 0 || w_min[s] > w_min[pick] ||
                    (w_min[s] == w_min[pick] &&
                     bids.best_total(u) < bids.best_total(problem.served_users[pick]))) {
                    pick = static_cast<int>(s);
                }
            }
            if (pick < 0) break;
            const int u = problem.served_users[pick];
            out.association.mu[u] = 0;
            out.association.beta[u] = bids.best_sbs[u];
            out.repaired = true;
            problem = make_cra_problem(scenario, bids, out.association);
            w_min = alloc_w_min(to_alloc_problem(problem));
            sum_min = 0.0;
            for (double w : w_min) sum_min += w;
        }
    }

    AllocResult alloc;
    if (problem.remaining_w < 0.0) {
        // accepted bids alone overran the budget
        out.status = SolveStatus::infeasible;
        out.bandwidth_deficit = -problem.remaining_w;
        out.allocation.w.assign(c.n_users, 0.0);
        out.allocation.p.assign(c.n_users, 0.0);
        out.wall_clock =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return out;
    }
    if (solver_choice == CraSolver::direct) {
        alloc = cra_solve_direct(problem);
    } else {
        DualAscentResult dual = cra_solve_dual_ascent(problem, dual_options);
        alloc = std::move(dual.alloc);
        out.converged = dual.converged || !alloc.feasible;
        out.iterations = dual.iterations;
    }

    out.allocation.w.assign(c.n_users, 0.0);
    out.allocation.p.assign(c.n_users, 0.0);
    if (!alloc.feasible) {
        out.status = SolveStatus::infeasible;
        out.bandwidth_deficit = alloc.bandwidth_deficit;
        out.wall_clock = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return out;
    }
    for (std::size_t s = 0; s < problem.served_users.size(); ++s) {
        out.allocation.w[problem.served_users[s]] = alloc.w[s];
        out.allocation.p[problem.served_users[s]] = alloc.p[s];
    }
    const CostBreakdown cost = evaluate_cost(scenario, out.association, out.allocation, bids);
    out.total_cost = cost.total;
    out.per_user_cost = cost.per_user;
    out.offloaded_count = out.association.offloaded_count();
    out.service_rate = service_rate(scenario, out.association, out.allocation, bids);
    out.wall_clock = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

void write_trace_csv(const std::vector<DualTraceRow>& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::ios_base::failure("cannot open '" + path + "' for writing");
    }
    out << "iteration,max_residual,cost\n";
    out.precision(10);
    for (const DualTraceRow& row : trace) {
        out << row.iteration << ',' << row.max_residual << ',' << row.cost << '\n';
    }
}

}  // namespace hetnet
