#include "hetnet/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>

#include "hetnet/ora.hpp"

namespace hetnet {

SolveOutcome solve_dsm(const Scenario& scenario, const BidMatrix& bids) {
    const auto t0 = std::chrono::steady_clock::now();
    const ScenarioConfig& c = scenario.config;
    const int n = c.n_users;
    SolveOutcome out;
    out.association.mu.assign(n, 1);
    out.association.beta.assign(n, std::nullopt);
    out.allocation.w.assign(n, 0.0);
    out.allocation.p.assign(n, 0.0);

    std::vector<double> w_min(n);
    for (int i = 0; i < n; ++i) {
        w_min[i] = min_bandwidth(c.r_min, scenario.g_cbs[i], c.p_max, c.noise_psd);
    }
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return w_min[a] < w_min[b]; });
    std::vector<int> admitted;
    double used = 0.0;
    for (int i : order) {
        if (used + w_min[i] > c.total_bandwidth) break;
        used += w_min[i];
        admitted.push_back(i);
    }
    std::sort(admitted.begin(), admitted.end());

    const AllocResult alloc = alloc_subproblem(scenario, admitted, c.total_bandwidth);
    for (std::size_t s = 0; s < admitted.size(); ++s) {
        out.allocation.w[admitted[s]] = alloc.w[s];
        out.allocation.p[admitted[s]] = alloc.p[s];
    }
    const CostBreakdown cost = evaluate_cost(scenario, out.association, out.allocation, bids);
    out.total_cost = cost.total;
    out.per_user_cost = cost.per_user;
    out.offloaded_count = 0;
    out.service_rate = service_rate(scenario, out.association, out.allocation, bids);
    out.wall_clock = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

}  // namespace hetnet
