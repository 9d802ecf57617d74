#pragma once

#include <cstddef>
#include <vector>

#include "hetnet/allocation.hpp"
#include "hetnet/model.hpp"

namespace hetnet {

/// Thrown when the instance exceeds the exhaustive-enumeration cap.
class EnumerationCapExceeded : public std::runtime_error {
 public:
    explicit EnumerationCapExceeded(const std::string& msg) : std::runtime_error(msg) {}
};

/// Thrown when the knapsack DP table would exceed its memory budget.
class KnapsackMemoryExceeded : public std::runtime_error {
 public:
    explicit KnapsackMemoryExceeded(const std::string& msg) : std::runtime_error(msg) {}
};

struct OraOptions {
    int enumeration_cap = 20;
    unsigned n_threads = 0;  // 0 = hardware concurrency
};

/// The count-maximizing reduction of the serving problem: offloading user i
/// saves p_max * w_min_i of transmit power and costs delta_phi_i of extra
/// bandwidth out of delta_w.
struct SimplifiedOraInstance {
    double delta_w = 0.0;
    std::vector<double> delta_phi;
    std::vector<double> value;
    std::vector<bool> eligible;
    /// Set when sum of w_min alone already exceeds total bandwidth.
    bool bandwidth_deficient = false;
};

struct KnapsackResult {
    std::vector<int> selected;  // ascending user indices
    double value = 0.0;
};

/// Exhaustive search over all admissible associations (users without SBS
/// coverage are forced onto the CBS), solving the separable allocation
/// subproblem for each. Ties break toward fewer offloaded users, then the
/// lexicographically smallest mu vector.
SolveOutcome solve_ora_exact(const Scenario& scenario, const BidMatrix& bids,
                             const OraOptions& options = {});

/// Allocation subproblem for a fixed served set under a bandwidth budget.
AllocResult alloc_subproblem(const Scenario& scenario, const std::vector<int>& served,
                             double remaining_w);

SimplifiedOraInstance simplify_to_knapsack(const Scenario& scenario, const BidMatrix& bids);

/// 0-1 knapsack DP over bandwidth discretized at `resolution` Hz. Weights are
/// rounded up and the capacity down, so a selected set never exceeds the true
/// budget. Ties break toward larger cardinality, then lexicographically.
KnapsackResult knapsack_dp(const SimplifiedOraInstance& instance, double resolution,
                           std::size_t memory_budget_bytes = std::size_t{1} << 30);

}  // namespace hetnet
