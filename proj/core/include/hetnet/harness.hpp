#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hetnet/model.hpp"
#include "hetnet/rhm.hpp"

namespace hetnet {

enum class Method { dsm, ora, rhm_direct, rhm_dual };

std::string method_name(Method m);
std::optional<Method> parse_method(const std::string& name);

enum class SweepParam { n_users, r_min };

struct SweepRange {
    SweepParam param = SweepParam::n_users;
    double from = 0.0;
    double to = 0.0;
    double step = 0.0;
};

struct ExperimentSpec {
    ScenarioConfig base_config;
    std::vector<Method> methods;
    std::optional<SweepRange> sweep;
    int replications = 5;
    int ora_cap = 20;
    unsigned workers = 0;  // 0 = hardware concurrency
    DualAscentOptions dual_options;

    void validate() const;
};

enum class RowStatus { converged, unconverged, skipped };

struct MetricsRow {
    Method method = Method::dsm;
    double sweep_value = 0.0;
    std::uint64_t seed = 0;
    double wall_clock_s = 0.0;
    double avg_cost_per_user = 0.0;
    double service_rate = 0.0;
    int offloaded_count = 0;
    RowStatus status = RowStatus::converged;
    long iterations = 0;
};

/// One timed solve; timing covers the solver only, not scenario generation.
/// An ORA refusal (above ora_cap) yields a skipped row, never a throw.
MetricsRow run_once(const ScenarioConfig& config, Method method, int ora_cap = 20,
                    const DualAscentOptions& dual_options = {});

/// Cartesian product of sweep points x methods x replication seeds, executed
/// with bounded parallelism; rows in deterministic (method, point, seed) order.
std::vector<MetricsRow> run_sweep(const ExperimentSpec& spec);

/// RFC-4180-style CSV with a fixed header; floats at 6 significant digits.
void write_csv(const std::vector<MetricsRow>& rows, const std::string& path);

std::string csv_text(const std::vector<MetricsRow>& rows);

}  // namespace hetnet
