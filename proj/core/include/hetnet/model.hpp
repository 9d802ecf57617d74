#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hetnet {

/// Thrown when a config or input fails validation; message names the field.
class ValidationError : public std::runtime_error {
 public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Thrown when two inputs that must agree (association vs allocation) do not.
class ContractViolation : public std::logic_error {
 public:
    explicit ContractViolation(const std::string& msg) : std::logic_error(msg) {}
};

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// All physical and economic parameters of a network snapshot.
/// Distances are in feet, bandwidths in Hz, rates in bit/s, power spectral
/// densities in W/Hz.
struct ScenarioConfig {
    std::uint64_t seed = 42;
    double cell_radius = 1000.0;
    int n_sbs = 8;
    double sbs_radius = 300.0;
    int n_users = 300;
    double total_bandwidth = 15e6;
    double noise_psd = 4e-21;
    double p_max = 1e-5;
    double w_max = 1e6;
    double p_s = 1e-5;
    double r_min = 128e3;
    double c_p = 1e9;
    double c_w = 1.0;
    double gamma = 0.5;
    double eta = 0.5;
    double pathloss_exponent_macro = 3.5;
    double pathloss_exponent_small = 3.0;
    double ref_gain = 1e-4;

    /// Throws ValidationError naming the first offending field.
    void validate() const;

    static ScenarioConfig from_json_text(const std::string& text);
    std::string to_json_text() const;
};

/// A generated network snapshot. Immutable after construction.
/// g_sbs is row-major n_sbs x n_users; entries where the user is outside the
/// SBS coverage disc hold the no-coverage marker (quiet NaN).
struct Scenario {
    ScenarioConfig config;
    std::vector<Point> user_positions;
    std::vector<Point> sbs_positions;
    std::vector<double> g_cbs;
    std::vector<double> g_sbs;

    static constexpr double kNoCoverage = std::numeric_limits<double>::quiet_NaN();

    double sbs_gain(int k, int i) const { return g_sbs[static_cast<std::size_t>(k) * config.n_users + i]; }
    bool covered(int k, int i) const { return sbs_gain(k, i) == sbs_gain(k, i); }
    bool has_coverage(int i) const;
};

/// Per-(SBS, user) bandwidth demands. Uncovered entries are NaN.
struct BidMatrix {
    int n_sbs = 0;
    int n_users = 0;
    std::vector<double> phi_serve;
    std::vector<double> phi_reward;
    std::vector<double> phi_total;
    std::vector<std::optional<int>> best_sbs;

    double serve(int k, int i) const { return phi_serve[static_cast<std::size_t>(k) * n_users + i]; }
    double reward(int k, int i) const { return phi_reward[static_cast<std::size_t>(k) * n_users + i]; }
    double total(int k, int i) const { return phi_total[static_cast<std::size_t>(k) * n_users + i]; }
    /// Total bid of the best covering SBS for user i; requires best_sbs[i].
    double best_total(int i) const { return total(*best_sbs[i], i); }
};

/// Binary association: exactly one of {mu[i]=1, beta[i] set} holds per user.
struct Association {
    std::vector<std::uint8_t> mu;
    std::vector<std::optional<int>> beta;

    int offloaded_count() const;
    void check_consistent() const;
};

/// Per-user bandwidth and power spectral density; zero for offloaded users.
struct Allocation {
    std::vector<double> w;
    std::vector<double> p;
};

struct CostBreakdown {
    double total = 0.0;
    std::vector<double> per_user;
};

enum class SolveStatus { ok, infeasible, skipped };

struct SolveOutcome {
    Association association;
    Allocation allocation;
    double total_cost = 0.0;
    std::vector<double> per_user_cost;
    double service_rate = 0.0;
    int offloaded_count = 0;
    double wall_clock = 0.0;
    long iterations = 0;
    SolveStatus status = SolveStatus::ok;
    bool converged = true;
    bool repaired = false;
    /// For infeasible outcomes: smallest bandwidth shortfall seen (Hz).
    double bandwidth_deficit = 0.0;
};

/// Log-distance path gain ref_gain * d^(-exponent), clamped at d = 1 ft.
/// Throws std::domain_error for d <= 0.
double channel_gain(double distance, double exponent, double ref_gain);

/// Deterministic scenario generation: users uniform on the cell disc, SBS
/// centers evenly spaced on the ring of radius cell_radius - sbs_radius.
/// User i's position depends only on (seed, i), so growing n_users extends
/// the same population.
Scenario generate_scenario(const ScenarioConfig& config);

/// Minimum bandwidth to reach rate r at maximum power spectral density.
double min_bandwidth(double r, double g, double p_max, double noise_psd);

/// Power spectral density required to reach rate r over bandwidth w.
/// Returns +inf for w = 0 with r > 0 (infeasible, not an error).
double min_power(double r, double w, double g, double noise_psd);

/// Analytic d(min_power)/dr at (r, w).
double min_power_rate_derivative(double r, double w, double g, double noise_psd);

/// Shannon rate w * log2(1 + p g / N0).
double shannon_rate(double w, double p, double g, double noise_psd);

/// Per-SBS bandwidth bids for all covered users.
BidMatrix sbs_bid_matrix(const Scenario& scenario);

/// CBS cost of an (association, allocation) pair. Served users pay
/// c_p p_i + gamma c_w w_i; offloaded users pay gamma c_w Phi_{k*,i}.
/// Throws ContractViolation if the allocation is nonzero on offloaded users
/// or the association is inconsistent.
CostBreakdown evaluate_cost(const Scenario& scenario, const Association& association,
                            const Allocation& allocation, const BidMatrix& bids);

/// Fraction of users whose achieved rate meets r_min; 1.0 for n_users = 0.
/// Offloaded users' rates are computed from their SBS grant.
double service_rate(const Scenario& scenario, const Association& association,
                    const Allocation& allocation, const BidMatrix& bids);

/// One row per user: id,x,y,g_cbs,best_sbs,phi_total.
void write_scenario_csv(const Scenario& scenario, const BidMatrix& bids,
                        const std::string& path);

}  // namespace hetnet
