#pragma once

// Hand-built scenarios for tests that need exact control over channel gains,
// bypassing the random generator.

#include <cmath>
#include <limits>
#include <vector>

#include "hetnet/model.hpp"

namespace hetnet::testing {

/// A scenario with explicit per-user macro gains and a single SBS whose gain
/// row is given directly; NaN entries mean no coverage.
inline Scenario manual_scenario(ScenarioConfig config, std::vector<double> g_cbs,
                                std::vector<double> g_sbs_row) {
    Scenario s;
    config.n_users = static_cast<int>(g_cbs.size());
    config.n_sbs = g_sbs_row.empty() ? 0 : 1;
    s.config = config;
    s.user_positions.assign(g_cbs.size(), {0.0, 0.0});
    if (!g_sbs_row.empty()) s.sbs_positions.assign(1, {0.0, 0.0});
    s.g_cbs = std::move(g_cbs);
    s.g_sbs = std::move(g_sbs_row);
    return s;
}

inline double nan_gain() { return std::numeric_limits<double>::quiet_NaN(); }

/// Macro gain that puts the serving SNR p_max g / N0 at the requested value.
inline double gain_for_snr(double snr, double p, double noise_psd) {
    return snr * noise_psd / p;
}

}  // namespace hetnet::testing
