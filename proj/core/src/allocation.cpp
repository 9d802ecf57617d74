#include "hetnet/allocation.hpp"

#include <cmath>
#include <numbers>

namespace hetnet {

namespace {

// -d(min_power)/dw scaled by c_p: strictly decreasing in w for r > 0.
double power_slope(const AllocProblem& pb, int i, double w) {
    const double r = pb.r_min[i];
    if (r == 0.0) return 0.0;
    return pb.c_p * pb.noise_psd * r * std::numbers::ln2 * std::exp2(r / w) /
           (pb.gains[i] * w * w);
}

// Per-user minimizer of cost_i(w) + lambda * w on [w_min, w_max].
double w_of_lambda(const AllocProblem& pb, int i, double w_min, double lambda) {
    const double target = pb.gamma * pb.c_w + lambda;
    if (pb.r_min[i] == 0.0) return 0.0;
    if (power_slope(pb, i, w_min) <= target) return w_min;
    if (power_slope(pb, i, pb.w_max) >= target) return pb.w_max;
    double lo = w_min;
    double hi = pb.w_max;
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (power_slope(pb, i, mid) > target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double serving_cost_derivative(const AllocProblem& problem, int i, double w) {
    return problem.gamma * problem.c_w - power_slope(problem, i, w);
}

std::vector<double> alloc_w_min(const AllocProblem& problem) {
    std::vector<double> out(problem.gains.size());
    for (std::size_t i = 0; i < problem.gains.size(); ++i) {
        out[i] = min_bandwidth(problem.r_min[i], problem.gains[i], problem.p_max,
                               problem.noise_psd);
    }
    return out;
}

AllocResult solve_separable_allocation(const AllocProblem& problem) {
    const std::size_t n = problem.gains.size();
    AllocResult res;
    res.w.assign(n, 0.0);
    res.p.assign(n, 0.0);
    if (n == 0) {
        res.feasible = true;
        return res;
    }
    const std::vector<double> w_min = alloc_w_min(problem);
    double sum_min = 0.0;
    for (double w : w_min) sum_min += w;
    if (sum_min > problem.remaining_w) {
        res.bandwidth_deficit = sum_min - problem.remaining_w;
        return res;
    }
    res.feasible = true;

    auto fill = [&](double lambda, std::vector<double>& w) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            w[i] = w_of_lambda(problem, static_cast<int>(i), w_min[i], lambda);
            sum += w[i];
        }
        return sum;
    };

    if (sum_min >= problem.remaining_w * (1.0 - 1e-12)) {
        res.w = w_min;  // budget exactly binding
        for (std::size_t i = 0; i < n; ++i) {
            res.budget_multiplier = std::max(
                res.budget_multiplier,
                -serving_cost_derivative(problem, static_cast<int>(i), w_min[i]));
        }
    } else if (fill(0.0, res.w) > problem.remaining_w) {
        double lo = 0.0;
        double hi = 1.0;
        std::vector<double> w(n);
        while (fill(hi, w) > problem.remaining_w) hi *= 2.0;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (fill(mid, w) > problem.remaining_w) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        fill(hi, res.w);
        res.budget_multiplier = hi;
    }

    for (std::size_t i = 0; i < n; ++i) {
        res.p[i] = min_power(problem.r_min[i], res.w[i], problem.gains[i], problem.noise_psd);
        res.cost += problem.c_p * res.p[i] + problem.gamma * problem.c_w * res.w[i];
    }
    return res;
}

}  // namespace hetnet
