#include "hetnet/ora.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <future>
#include <thread>
#include <tuple>

namespace hetnet {

namespace {

struct Candidate {
    double cost = std::numeric_limits<double>::infinity();
    std::uint32_t offload_mask = 0;  // bit i set = user i offloaded
    int offloaded = 0;
    bool valid = false;
};

// Tie order: lower cost, then fewer offloaded users, then lexicographically
// smallest mu vector (the first differing user is offloaded).
bool better(const Candidate& a, const Candidate& b) {
    if (!b.valid) return a.valid;
    if (!a.valid) return false;
    const double tol = 1e-12 * std::max(1.0, std::min(std::abs(a.cost), std::abs(b.cost)));
    if (a.cost < b.cost - tol) return true;
    if (b.cost < a.cost - tol) return false;
    if (a.offloaded != b.offloaded) return a.offloaded < b.offloaded;
    if (a.offload_mask == b.offload_mask) return false;
    const std::uint32_t diff = a.offload_mask ^ b.offload_mask;
    const std::uint32_t first = diff & ~(diff - 1);
    return (a.offload_mask & first) != 0;
}

}  // namespace

AllocResult alloc_subproblem(const Scenario& scenario, const std::vector<int>& served,
                             double remaining_w) {
    const ScenarioConfig& c = scenario.config;
    AllocProblem pb;
    pb.gains.reserve(served.size());
    for (int i : served) pb.gains.push_back(scenario.g_cbs[i]);
    pb.r_min.assign(served.size(), c.r_min);
    pb.remaining_w = remaining_w;
    pb.noise_psd = c.noise_psd;
    pb.p_max = c.p_max;
    pb.w_max = c.w_max;
    pb.c_p = c.c_p;
    pb.c_w = c.c_w;
    pb.gamma = c.gamma;
    return solve_separable_allocation(pb);
}

SolveOutcome solve_ora_exact(const Scenario& scenario, const BidMatrix& bids,
                             const OraOptions& options) {
    const auto t0 = std::chrono::steady_clock::now();
    const ScenarioConfig& c = scenario.config;
    const int n = c.n_users;
    if (n > options.enumeration_cap) {
        throw EnumerationCapExceeded(
            "solve_ora_exact: " + std::to_string(n) + " users exceeds the enumeration cap of " +
            std::to_string(options.enumeration_cap) + "; use the relaxed heuristic (RHM) instead");
    }

    std::vector<int> coverable;
    for (int i = 0; i < n; ++i) {
        if (bids.best_sbs[i]) coverable.push_back(i);
    }
    const int m = static_cast<int>(coverable.size());
    const std::uint64_t n_masks = std::uint64_t{1} << m;

    auto scan = [&](std::uint64_t begin, std::uint64_t end) {
        Candidate best;
        double min_deficit = std::numeric_limits<double>::infinity();
        std::vector<int> served;
        served.reserve(n);
        for (std::uint64_t mask = begin; mask < end; ++mask) {
            double offload_bw = 0.0;
            std::uint32_t user_mask = 0;
            for (int b = 0; b < m; ++b) {
                if (mask & (std::uint64_t{1} << b)) {
                    const int i = coverable[b];
                    offload_bw += bids.best_total(i);
                    user_mask |= std::uint32_t{1} << i;
                }
            }
            if (offload_bw > c.total_bandwidth) {
                min_deficit = std::min(min_deficit, offload_bw - c.total_bandwidth);
                continue;
            }
            served.clear();
            for (int i = 0; i < n; ++i) {
                if (!(user_mask & (std::uint32_t{1} << i))) served.push_back(i);
            }
            const AllocResult alloc =
                alloc_subproblem(scenario, served, c.total_bandwidth - offload_bw);
            if (!alloc.feasible) {
                min_deficit = std::min(min_deficit, alloc.bandwidth_deficit);
                continue;
            }
            double cost = alloc.cost;
            for (int b = 0; b < m; ++b) {
                if (mask & (std::uint64_t{1} << b)) {
                    cost += c.gamma * c.c_w * bids.best_total(coverable[b]);
                }
            }
            Candidate cand{cost, user_mask, static_cast<int>(std::popcount(user_mask)), true};
            if (better(cand, best)) best = cand;
        }
        return std::pair{best, min_deficit};
    };

    unsigned n_threads = options.n_threads ? options.n_threads
                                           : std::max(1u, std::thread::hardware_concurrency());
    n_threads = static_cast<unsigned>(std::min<std::uint64_t>(n_threads, n_masks));
    Candidate best;
    double min_deficit = std::numeric_limits<double>::infinity();
    if (n_threads <= 1 || n_masks < 256) {
        std::tie(best, min_deficit) = scan(0, n_masks);
    } else {
        std::vector<std::future<std::pair<Candidate, double>>> futs;
        const std::uint64_t chunk = (n_masks + n_threads - 1) / n_threads;
        for (unsigned t = 0; t < n_threads; ++t) {
            const std::uint64_t b = t * chunk;
            const std::uint64_t e = std::min(n_masks, b + chunk);
            if (b >= e) break;
            futs.push_back(std::async(std::launch::async, scan, b, e));
        }
        for (auto& f : futs) {
            auto [cand, deficit] = f.get();
            if (better(cand, best)) best = cand;
            min_deficit = std::min(min_deficit, deficit);
        }
    }

    SolveOutcome out;
    out.iterations = static_cast<long>(n_masks);
    if (!best.valid) {
        out.status = SolveStatus::infeasible;
        out.bandwidth_deficit = min_deficit;
        out.wall_clock = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return out;
    }

    out.association.mu.assign(n, 1);
    out.association.beta.assign(n, std::nullopt);
    out.allocation.w.assign(n, 0.0);
    out.allocation.p.assign(n, 0.0);
    std::vector<int> served;
    double offload_bw = 0.0;
    for (int i = 0; i < n; ++i) {
        if (best.offload_mask & (std::uint32_t{1} << i)) {
            out.association.mu[i] = 0;
            out.association.beta[i] = bids.best_sbs[i];
            offload_bw += bids.best_total(i);
        } else {
            served.push_back(i);
        }
    }
    const AllocResult alloc = alloc_subproblem(scenario, served, c.total_bandwidth - offload_bw);
    for (std::size_t s = 0; s < served.size(); ++s) {
        out.allocation.w[served[s]] = alloc.w[s];
        out.allocation.p[served[s]] = alloc.p[s];
    }
    const CostBreakdown cost = evaluate_cost(scenario, out.association, out.allocation, bids);
    out.total_cost = cost.total;
    out.per_user_cost = cost.per_user;
    out.offloaded_count = out.association.offloaded_count();
    out.service_rate = service_rate(scenario, out.association, out.allocation, bids);
    out.wall_clock = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

SimplifiedOraInstance simplify_to_knapsack(const Scenario& scenario, const BidMatrix& bids) {
    const ScenarioConfig& c = scenario.config;
    SimplifiedOraInstance inst;
    inst.delta_phi.resize(c.n_users);
    inst.value.resize(c.n_users);
    inst.eligible.resize(c.n_users);
    double sum_w_min = 0.0;
    for (int i = 0; i < c.n_users; ++i) {
        const double w_min = min_bandwidth(c.r_min, scenario.g_cbs[i], c.p_max, c.noise_psd);
        sum_w_min += w_min;
        inst.value[i] = c.p_max * w_min;
        inst.eligible[i] = bids.best_sbs[i].has_value();
        inst.delta_phi[i] =
            inst.eligible[i] ? std::max(bids.best_total(i) - w_min, 0.0) : 0.0;
    }
    inst.delta_w = c.total_bandwidth - sum_w_min;
    inst.bandwidth_deficient = inst.delta_w < 0.0;
    return inst;
}

KnapsackResult knapsack_dp(const SimplifiedOraInstance& instance, double resolution,
                           std::size_t memory_budget_bytes) {
    if (resolution <= 0.0) {
        throw ValidationError("knapsack_dp: resolution must be > 0");
    }
    const int n = static_cast<int>(instance.delta_phi.size());
    const double cap_hz = std::max(instance.delta_w, 0.0);
    const std::uint64_t capacity = static_cast<std::uint64_t>(std::floor(cap_hz / resolution));
    const std::size_t cells = static_cast<std::size_t>(n + 1) * (capacity + 1);
    const std::size_t bytes = cells * (sizeof(double) + sizeof(std::int32_t));
    if (bytes > memory_budget_bytes) {
        const double suggested = resolution * (static_cast<double>(bytes) / memory_budget_bytes);
        throw KnapsackMemoryExceeded(
            "knapsack_dp: DP table needs " + std::to_string(bytes) +
            " bytes; retry with resolution >= " + std::to_string(suggested));
    }
    std::vector<std::uint64_t> weight(n, 0);
    for (int i = 0; i < n; ++i) {
        if (instance.eligible[i]) {
            weight[i] = static_cast<std::uint64_t>(std::ceil(instance.delta_phi[i] / resolution));
        }
    }
    const std::size_t cols = capacity + 1;
    std::vector<double> value(cells, 0.0);
    std::vector<std::int32_t> count(cells, 0);
    // Suffix DP so reconstruction runs forward, preferring to take an item
    // whenever that preserves (value, cardinality): lexicographically smallest set.
    for (int i = n - 1; i >= 0; --i) {
        const std::size_t row = static_cast<std::size_t>(i) * cols;
        const std::size_t next = row + cols;
        for (std::uint64_t cap = 0; cap <= capacity; ++cap) {
            double v = value[next + cap];
            std::int32_t k = count[next + cap];
            if (instance.eligible[i] && weight[i] <= cap) {
                const double tv = value[next + cap - weight[i]] + instance.value[i];
                const std::int32_t tk = count[next + cap - weight[i]] + 1;
                if (tv > v || (tv == v && tk >= k)) {
                    v = tv;
                    k = tk;
                }
            }
            value[row + cap] = v;
            count[row + cap] = k;
        }
    }
    KnapsackResult res;
    res.value = value[0 * cols + capacity];
    std::uint64_t cap = capacity;
    for (int i = 0; i < n; ++i) {
        const std::size_t next = static_cast<std::size_t>(i + 1) * cols;
        if (instance.eligible[i] && weight[i] <= cap) {
            const double tv = value[next + cap - weight[i]] + instance.value[i];
            const std::int32_t tk = count[next + cap - weight[i]] + 1;
            const double sv = value[next + cap];
            const std::int32_t sk = count[next + cap];
            if (tv > sv || (tv == sv && tk >= sk)) {
                res.selected.push_back(i);
                cap -= weight[i];
                continue;
            }
        }
    }
    return res;
}

}  // namespace hetnet
