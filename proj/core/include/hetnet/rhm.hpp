#pragma once

#include <string>
#include <vector>

#include "hetnet/allocation.hpp"
#include "hetnet/model.hpp"

namespace hetnet {

/// The allocation problem left after user association is fixed.
struct CraProblem {
    std::vector<int> served_users;
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

/// One recorded iterate of the dual-ascent solver.
struct DualTraceRow {
    long iteration = 0;
    double max_residual = 0.0;  // max_i |r_min - offered rate| / r_min
    double cost = 0.0;
};

struct DualAscentOptions {
    /// Dual step as a fraction of the per-user multiplier scale
    /// gamma * c_w / log2(1 + p_max g_i / N0) per unit of rate residual.
    double step_scale = 0.5;
    /// Primal prox weight as gamma * c_w / (prox_scale * w_min_i).
    double prox_scale = 2.0;
    double tol = 1e-6;
    long max_iter = 100000;
    bool record_trace = true;
    /// Optional warm start; all three must be sized to the served set.
    std::vector<double> w0, p0, y0;
};

struct DualAscentResult {
    AllocResult alloc;
    bool converged = false;
    long iterations = 0;
    double final_residual = 0.0;
    std::vector<DualTraceRow> trace;
};

enum class CraSolver { direct, dual_ascent };

/// Algorithm-1 association: offload user i to its cheapest covering SBS when
/// the bid undercuts the serving-cost estimate c_w w_min + c_p p_max; ties
/// serve locally. Users without coverage are served by the CBS.
Association hua_associate(const Scenario& scenario, const BidMatrix& bids);

CraProblem make_cra_problem(const Scenario& scenario, const BidMatrix& bids,
                            const Association& association);

/// Reference solver; same exact separable method as the ORA subproblem.
AllocResult cra_solve_direct(const CraProblem& problem);

/// Iterative solver: projected dual ascent on the rate multipliers with an
/// optimistic (extrapolated) residual step, exact power minimization, and a
/// prox-damped bandwidth step under the budget multiplier.
DualAscentResult cra_solve_dual_ascent(const CraProblem& problem,
                                       const DualAscentOptions& options = {});

/// Multipliers that make a direct solution a dual-ascent fixed point.
std::vector<double> stationary_multipliers(const CraProblem& problem, const AllocResult& alloc);

/// Two-phase solve: HUA association, then the chosen CRA solver. If HUA's
/// association overruns the bandwidth budget, served users are offloaded
/// greedily (largest w_min, then cheapest bid) until feasible and the
/// outcome is flagged repaired.
SolveOutcome solve_rhm(const Scenario& scenario, const BidMatrix& bids,
                       CraSolver solver_choice = CraSolver::direct,
                       const DualAscentOptions& dual_options = {});

void write_trace_csv(const std::vector<DualTraceRow>& trace, const std::string& path);

}  // namespace hetnet
