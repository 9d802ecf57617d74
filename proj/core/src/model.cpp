#include "hetnet/model.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

namespace hetnet {

namespace {

void require(bool ok, const char* field, const char* what) {
    if (!ok) {
        throw ValidationError(std::string("invalid config: field '") + field + "' " + what);
    }
}

// mt19937_64 output mapped to [0,1) the same way on every platform;
// std::uniform_real_distribution is implementation-defined, so avoid it.
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

void ScenarioConfig::validate() const {
    require(cell_radius > 0, "cell_radius", "must be > 0");
    require(n_sbs >= 0, "n_sbs", "must be >= 0");
    require(sbs_radius > 0, "sbs_radius", "must be > 0");
    require(sbs_radius < cell_radius, "sbs_radius", "must be < cell_radius");
    require(n_users >= 0, "n_users", "must be >= 0");
    require(total_bandwidth > 0, "total_bandwidth", "must be > 0");
    require(noise_psd > 0, "noise_psd", "must be > 0");
    require(p_max > 0, "p_max", "must be > 0");
    require(w_max > 0, "w_max", "must be > 0");
    require(p_s > 0, "p_s", "must be > 0");
    require(r_min > 0, "r_min", "must be > 0");
    require(c_p >= 0, "c_p", "must be >= 0");
    require(c_w >= 0, "c_w", "must be >= 0");
    require(gamma > 0 && gamma <= 1, "gamma", "must be in (0, 1]");
    require(eta >= 0, "eta", "must be >= 0");
    require(pathloss_exponent_macro > 2, "pathloss_exponent_macro", "must be > 2");
    require(pathloss_exponent_small > 2, "pathloss_exponent_small", "must be > 2");
    require(ref_gain > 0, "ref_gain", "must be > 0");
}

ScenarioConfig ScenarioConfig::from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) {
        throw ValidationError("config must be a JSON object");
    }
    ScenarioConfig c;
    static const char* known[] = {
        "seed", "cell_radius", "n_sbs", "sbs_radius", "n_users", "total_bandwidth",
        "noise_psd", "p_max", "w_max", "p_s", "r_min", "c_p", "c_w", "gamma", "eta",
        "pathloss_exponent_macro", "pathloss_exponent_small", "ref_gain"};
    for (const auto& item : j.items()) {
        bool ok = false;
        for (const char* k : known) ok = ok || item.key() == k;
        if (!ok) throw ValidationError("unknown config field '" + item.key() + "'");
    }
    auto get = [&](const char* key, auto& out) {
        if (j.contains(key)) {
            try {
                out = j.at(key).get<std::remove_reference_t<decltype(out)>>();
            } catch (const nlohmann::json::exception&) {
                throw ValidationError(std::string("invalid config: field '") + key +
                                      "' has wrong type");
            }
        }
    };
    get("seed", c.seed);
    get("cell_radius", c.cell_radius);
    get("n_sbs", c.n_sbs);
    get("sbs_radius", c.sbs_radius);
    get("n_users", c.n_users);
    get("total_bandwidth", c.total_bandwidth);
    get("noise_psd", c.noise_psd);
    get("p_max", c.p_max);
    get("w_max", c.w_max);
    get("p_s", c.p_s);
    get("r_min", c.r_min);
    get("c_p", c.c_p);
    get("c_w", c.c_w);
    get("gamma", c.gamma);
    get("eta", c.eta);
    get("pathloss_exponent_macro", c.pathloss_exponent_macro);
    get("pathloss_exponent_small", c.pathloss_exponent_small);
    get("ref_gain", c.ref_gain);
    c.validate();
    return c;
}

std::string ScenarioConfig::to_json_text() const {
    nlohmann::json j{
        {"seed", seed},
        {"cell_radius", cell_radius},
        {"n_sbs", n_sbs},
        {"sbs_radius", sbs_radius},
        {"n_users", n_users},
        {"total_bandwidth", total_bandwidth},
        {"noise_psd", noise_psd},
        {"p_max", p_max},
        {"w_max", w_max},
        {"p_s", p_s},
        {"r_min", r_min},
        {"c_p", c_p},
        {"c_w", c_w},
        {"gamma", gamma},
        {"eta", eta},
        {"pathloss_exponent_macro", pathloss_exponent_macro},
        {"pathloss_exponent_small", pathloss_exponent_small},
        {"ref_gain", ref_gain}};
    return j.dump(2);
}

bool Scenario::has_coverage(int i) const {
    for (int k = 0; k < config.n_sbs; ++k) {
        if (covered(k, i)) return true;
    }
    return false;
}

int Association::offloaded_count() const {
    int n = 0;
    for (std::uint8_t m : mu) n += (m == 0);
    return n;
}

void Association::check_consistent() const {
    if (mu.size() != beta.size()) {
        throw ContractViolation("association mu/beta length mismatch");
    }
    for (std::size_t i = 0; i < mu.size(); ++i) {
        if ((mu[i] == 1) == beta[i].has_value()) {
            throw ContractViolation("association: user " + std::to_string(i) +
                                    " must have exactly one of mu=1 or beta set");
        }
    }
}

double channel_gain(double distance, double exponent, double ref_gain) {
    if (distance <= 0.0) {
        throw std::domain_error("channel_gain: distance must be > 0");
    }
    const double d = std::max(distance, 1.0);
    return ref_gain * std::pow(d, -exponent);
}

Scenario generate_scenario(const ScenarioConfig& config) {
    config.validate();
    Scenario s;
    s.config = config;
    std::mt19937_64 rng(config.seed);
    s.user_positions.reserve(config.n_users);
    for (int i = 0; i < config.n_users; ++i) {
        // Two draws per user, in user order, so a larger n_users keeps the
        // same first users (sweeps grow the population incrementally).
        const double rad = config.cell_radius * std::sqrt(uniform01(rng));
        const double ang = 2.0 * std::numbers::pi * uniform01(rng);
        s.user_positions.push_back({rad * std::cos(ang), rad * std::sin(ang)});
    }
    const double ring = config.cell_radius - config.sbs_radius;
    s.sbs_positions.reserve(config.n_sbs);
    for (int k = 0; k < config.n_sbs; ++k) {
        const double th = 2.0 * std::numbers::pi * k / std::max(config.n_sbs, 1);
        s.sbs_positions.push_back({ring * std::cos(th), ring * std::sin(th)});
    }
    s.g_cbs.resize(config.n_users);
    for (int i = 0; i < config.n_users; ++i) {
        const double d = std::hypot(s.user_positions[i].x, s.user_positions[i].y);
        s.g_cbs[i] = channel_gain(std::max(d, 1.0), config.pathloss_exponent_macro,
                                  config.ref_gain);
    }
    s.g_sbs.assign(static_cast<std::size_t>(config.n_sbs) * config.n_users,
                   Scenario::kNoCoverage);
    for (int k = 0; k < config.n_sbs; ++k) {
        for (int i = 0; i < config.n_users; ++i) {
            const double d = std::hypot(s.user_positions[i].x - s.sbs_positions[k].x,
                                        s.user_positions[i].y - s.sbs_positions[k].y);
            if (d <= config.sbs_radius) {
                s.g_sbs[static_cast<std::size_t>(k) * config.n_users + i] =
                    channel_gain(std::max(d, 1.0), config.pathloss_exponent_small,
                                 config.ref_gain);
            }
        }
    }
    return s;
}

double min_bandwidth(double r, double g, double p_max, double noise_psd) {
    if (r == 0.0) return 0.0;
    return r / std::log2(1.0 + p_max * g / noise_psd);
}

double min_power(double r, double w, double g, double noise_psd) {
    if (r == 0.0) return 0.0;
    if (w == 0.0) return std::numeric_limits<double>::infinity();
    return noise_psd * (std::exp2(r / w) - 1.0) / g;
}

double min_power_rate_derivative(double r, double w, double g, double noise_psd) {
    return noise_psd * std::exp2(r / w) * std::numbers::ln2 / (w * g);
}

double shannon_rate(double w, double p, double g, double noise_psd) {
    if (w == 0.0) return 0.0;
    return w * std::log2(1.0 + p * g / noise_psd);
}

BidMatrix sbs_bid_matrix(const Scenario& scenario) {
    const ScenarioConfig& c = scenario.config;
    BidMatrix b;
    b.n_sbs = c.n_sbs;
    b.n_users = c.n_users;
    const std::size_t size = static_cast<std::size_t>(c.n_sbs) * c.n_users;
    b.phi_serve.assign(size, Scenario::kNoCoverage);
    b.phi_reward.assign(size, Scenario::kNoCoverage);
    b.phi_total.assign(size, Scenario::kNoCoverage);
    b.best_sbs.assign(c.n_users, std::nullopt);
    for (int k = 0; k < c.n_sbs; ++k) {
        for (int i = 0; i < c.n_users; ++i) {
            if (!scenario.covered(k, i)) continue;
            const std::size_t idx = static_cast<std::size_t>(k) * c.n_users + i;
            const double phi_p = c.r_min / std::log2(1.0 + c.p_s * scenario.sbs_gain(k, i) / c.noise_psd);
            b.phi_serve[idx] = phi_p;
            b.phi_reward[idx] = c.eta * phi_p;
            b.phi_total[idx] = phi_p + c.eta * phi_p;
            if (!b.best_sbs[i] || b.phi_total[idx] < b.total(*b.best_sbs[i], i)) {
                b.best_sbs[i] = k;
            }
        }
    }
    return b;
}

CostBreakdown evaluate_cost(const Scenario& scenario, const Association& association,
                            const Allocation& allocation, const BidMatrix& bids) {
    const ScenarioConfig& c = scenario.config;
    association.check_consistent();
    if (static_cast<int>(association.mu.size()) != c.n_users ||
        static_cast<int>(allocation.w.size()) != c.n_users ||
        static_cast<int>(allocation.p.size()) != c.n_users) {
        throw ContractViolation("evaluate_cost: size mismatch with scenario");
    }
    CostBreakdown out;
    out.per_user.resize(c.n_users);
    for (int i = 0; i < c.n_users; ++i) {
        if (association.mu[i]) {
            out.per_user[i] = c.c_p * allocation.p[i] + c.gamma * c.c_w * allocation.w[i];
        } else {
            if (allocation.w[i] != 0.0 || allocation.p[i] != 0.0) {
                throw ContractViolation("evaluate_cost: offloaded user " +
                                        std::to_string(i) + " has nonzero allocation");
            }
            const int k = *association.beta[i];
            if (!scenario.covered(k, i)) {
                throw ContractViolation("evaluate_cost: user " + std::to_string(i) +
                                        " offloaded to non-covering SBS");
            }
            out.per_user[i] = c.gamma * c.c_w * bids.total(k, i);
        }
        out.total += out.per_user[i];
    }
    return out;
}

double service_rate(const Scenario& scenario, const Association& association,
                    const Allocation& allocation, const BidMatrix& bids) {
    const ScenarioConfig& c = scenario.config;
    if (c.n_users == 0) return 1.0;
    const double threshold = c.r_min * (1.0 - 1e-9);
    int served = 0;
    for (int i = 0; i < c.n_users; ++i) {
        double rate;
        if (association.mu[i]) {
            rate = shannon_rate(allocation.w[i], allocation.p[i], scenario.g_cbs[i], c.noise_psd);
        } else {
            const int k = *association.beta[i];
            rate = shannon_rate(bids.serve(k, i), c.p_s, scenario.sbs_gain(k, i), c.noise_psd);
        }
        if (rate >= threshold) ++served;
    }
    return static_cast<double>(served) / c.n_users;
}

void write_scenario_csv(const Scenario& scenario, const BidMatrix& bids,
                        const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::ios_base::failure("cannot open '" + path + "' for writing");
    }
    out << "id,x,y,g_cbs,best_sbs,phi_total\n";
    out.precision(10);
    for (int i = 0; i < scenario.config.n_users; ++i) {
        out << i << ',' << scenario.user_positions[i].x << ',' << scenario.user_positions[i].y
            << ',' << scenario.g_cbs[i] << ',';
        if (bids.best_sbs[i]) {
            out << *bids.best_sbs[i] << ',' << bids.best_total(i);
        } else {
            out << "none,";
        }
        out << '\n';
    }
    if (!out.good()) {
        throw std::ios_base::failure("write failed for '" + path + "'");
    }
}

}  // namespace hetnet
