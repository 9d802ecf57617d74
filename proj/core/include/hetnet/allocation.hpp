#pragma once

#include <vector>

#include "hetnet/model.hpp"

namespace hetnet {

/// Resource allocation with the association fixed: minimize
///   sum_i c_p * min_power(r_i, w_i) + gamma * c_w * w_i
/// over w_i in [w_min_i, w_max], coupled by sum_i w_i <= remaining_w.
/// Rate constraints bind at the optimum, so p_i = min_power(r_i, w_i).
struct AllocProblem {
    std::vector<double> gains;
    std::vector<double> r_min;
    double remaining_w = 0.0;
    double noise_psd = 0.0;
    double p_max = 0.0;
    double w_max = 0.0;
    double c_p = 0.0;
    double c_w = 0.0;
    double gamma = 1.0;
};

struct AllocResult {
    bool feasible = false;
    std::vector<double> w;
    std::vector<double> p;
    double cost = 0.0;
    /// sum of w_min minus remaining_w, when infeasible.
    double bandwidth_deficit = 0.0;
    /// Coupling multiplier at the optimum (0 when the budget is slack).
    double budget_multiplier = 0.0;
};

/// Marginal serving cost derivative d/dw [c_p * min_power(r, w) + gamma c_w w].
double serving_cost_derivative(const AllocProblem& problem, int i, double w);

/// Exact solver: closed-form per-user stationarity clamped to the interval,
/// with bisection on the budget multiplier when the coupling is tight.
AllocResult solve_separable_allocation(const AllocProblem& problem);

/// Convenience: per-user minimum bandwidths for the problem.
std::vector<double> alloc_w_min(const AllocProblem& problem);

}  // namespace hetnet
