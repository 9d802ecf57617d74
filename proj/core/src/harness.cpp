#include "hetnet/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <thread>

#include "hetnet/baselines.hpp"
#include "hetnet/ora.hpp"

namespace hetnet {

std::string method_name(Method m) {
    switch (m) {
        case Method::dsm: return "dsm";
        case Method::ora: return "ora";
        case Method::rhm_direct: return "rhm_direct";
        case Method::rhm_dual: return "rhm_dual";
    }
    return "?";
}

std::optional<Method> parse_method(const std::string& name) {
    if (name == "dsm") return Method::dsm;
    if (name == "ora") return Method::ora;
    if (name == "rhm_direct") return Method::rhm_direct;
    if (name == "rhm_dual") return Method::rhm_dual;
    return std::nullopt;
}

void ExperimentSpec::validate() const {
    base_config.validate();
    if (methods.empty()) {
        throw ValidationError("experiment spec: 'methods' must be nonempty");
    }
    if (replications < 1) {
        throw ValidationError("experiment spec: 'replications' must be >= 1");
    }
    if (sweep) {
        if (sweep->step <= 0 || sweep->to < sweep->from) {
            throw ValidationError("experiment spec: sweep range must be ascending with step > 0");
        }
    }
}

MetricsRow run_once(const ScenarioConfig& config, Method method, int ora_cap,
                    const DualAscentOptions& dual_options) {
    config.validate();
    MetricsRow row;
    row.method = method;
    row.seed = config.seed;
    row.sweep_value = config.n_users;
    if (method == Method::ora && config.n_users > ora_cap) {
        row.status = RowStatus::skipped;
        return row;
    }
    const Scenario scenario = generate_scenario(config);
    const BidMatrix bids = sbs_bid_matrix(scenario);
    SolveOutcome outcome;
    switch (method) {
        case Method::dsm:
            outcome = solve_dsm(scenario, bids);
            break;
        case Method::ora: {
            OraOptions opts;
            opts.enumeration_cap = ora_cap;
            outcome = solve_ora_exact(scenario, bids, opts);
            break;
        }
        case Method::rhm_direct:
            outcome = solve_rhm(scenario, bids, CraSolver::direct);
            break;
        case Method::rhm_dual:
            outcome = solve_rhm(scenario, bids, CraSolver::dual_ascent, dual_options);
            break;
    }
    row.wall_clock_s = outcome.wall_clock;
    row.iterations = outcome.iterations;
    row.offloaded_count = outcome.offloaded_count;
    if (outcome.status == SolveStatus::infeasible) {
        row.status = RowStatus::unconverged;
        row.avg_cost_per_user = std::numeric_limits<double>::quiet_NaN();
        row.service_rate = 0.0;
        return row;
    }
    row.status = outcome.converged ? RowStatus::converged : RowStatus::unconverged;
    row.avg_cost_per_user =
        config.n_users > 0 ? outcome.total_cost / config.n_users : 0.0;
    row.service_rate = outcome.service_rate;
    return row;
}

std::vector<MetricsRow> run_sweep(const ExperimentSpec& spec) {
    spec.validate();
    std::vector<double> points;
    if (spec.sweep) {
        for (double v = spec.sweep->from; v <= spec.sweep->to + 1e-9 * spec.sweep->step;
             v += spec.sweep->step) {
            points.push_back(v);
        }
    } else {
        points.push_back(spec.base_config.n_users);
    }

    struct Task {
        Method method;
        double value;
        std::uint64_t seed;
    };
    std::vector<Task> tasks;
    for (Method m : spec.methods) {
        for (double v : points) {
            for (int rep = 0; rep < spec.replications; ++rep) {
                tasks.push_back({m, v, spec.base_config.seed + static_cast<std::uint64_t>(rep)});
            }
        }
    }

    std::vector<MetricsRow> rows(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t t = next.fetch_add(1); t < tasks.size(); t = next.fetch_add(1)) {
            const Task& task = tasks[t];
            ScenarioConfig config = spec.base_config;
            config.seed = task.seed;
            if (spec.sweep) {
                if (spec.sweep->param == SweepParam::n_users) {
                    config.n_users = static_cast<int>(std::lround(task.value));
                } else {
                    config.r_min = task.value;
                }
            }
            rows[t] = run_once(config, task.method, spec.ora_cap, spec.dual_options);
            rows[t].sweep_value = task.value;
        }
    };
    unsigned n_workers = spec.workers ? spec.workers
                                      : std::max(1u, std::thread::hardware_concurrency());
    n_workers = static_cast<unsigned>(std::min<std::size_t>(n_workers, tasks.size()));
    if (n_workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (unsigned i = 0; i < n_workers; ++i) threads.emplace_back(worker);
        for (auto& th : threads) th.join();
    }
    return rows;
}

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

const char* status_name(RowStatus s) {
    switch (s) {
        case RowStatus::converged: return "converged";
        case RowStatus::unconverged: return "unconverged";
        case RowStatus::skipped: return "skipped";
    }
    return "?";
}

}  // namespace

std::string csv_text(const std::vector<MetricsRow>& rows) {
    std::string out =
        "method,sweep_value,seed,wall_clock_s,avg_cost_per_user,service_rate,"
        "offloaded_count,converged,iterations\n";
    for (const MetricsRow& r : rows) {
        out += method_name(r.method);
        out += ',' + fmt(r.sweep_value);
        out += ',' + std::to_string(r.seed);
        out += ',' + fmt(r.wall_clock_s);
        out += ',' + fmt(r.avg_cost_per_user);
        out += ',' + fmt(r.service_rate);
        out += ',' + std::to_string(r.offloaded_count);
        out += ',';
        out += status_name(r.status);
        out += ',' + std::to_string(r.iterations);
        out += '\n';
    }
    return out;
}

void write_csv(const std::vector<MetricsRow>& rows, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::ios_base::failure("cannot open '" + path + "' for writing");
    }
    out << csv_text(rows);
    if (!out.good()) {
        throw std::ios_base::failure("write failed for '" + path + "'");
    }
}

}  // namespace hetnet
