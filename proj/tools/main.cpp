// Command-line front end: run a single method on a scenario config, sweep a
// parameter over a range, or dump the generated scenario as CSV.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "hetnet/baselines.hpp"
#include "hetnet/harness.hpp"
#include "hetnet/model.hpp"
#include "hetnet/ora.hpp"
#include "hetnet/rhm.hpp"

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

hetnet::ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::ios_base::failure("cannot read config file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return hetnet::ScenarioConfig::from_json_text(buf.str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"HetNet user-association and resource-allocation benchmark"};
    app.require_subcommand(1);

    std::string config_path;
    std::string method_name = "rhm_direct";
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string out_path;

    auto* run = app.add_subcommand("run", "Run one method on one scenario");
    run->add_option("--config", config_path, "Scenario config JSON")->required();
    run->add_option("--method", method_name, "dsm | ora | rhm_direct | rhm_dual");
    run->add_option("--seed", seed, "Override the config seed")->each([&](const std::string&) {
        seed_set = true;
    });
    run->add_option("--out", out_path, "Metrics CSV path (default: stdout)");

    std::string sweep_param = "users";
    double sweep_from = 300;
    double sweep_to = 500;
    double sweep_step = 20;
    int reps = 5;
    int ora_cap = 20;
    std::vector<std::string> sweep_methods{"dsm", "rhm_direct"};

    auto* sweep = app.add_subcommand("sweep", "Sweep a parameter across a range");
    sweep->add_option("--config", config_path, "Scenario config JSON")->required();
    sweep->add_option("--param", sweep_param, "users | rmin");
    sweep->add_option("--from", sweep_from, "Sweep start");
    sweep->add_option("--to", sweep_to, "Sweep end (inclusive)");
    sweep->add_option("--step", sweep_step, "Sweep increment");
    sweep->add_option("--reps", reps, "Replications (seeds) per point");
    sweep->add_option("--method", sweep_methods, "Methods to run (repeatable)");
    sweep->add_option("--ora-cap", ora_cap, "Skip ORA above this many users");
    sweep->add_option("--out", out_path, "Metrics CSV path (default: stdout)");

    auto* scenario_cmd = app.add_subcommand("scenario", "Export the generated scenario as CSV");
    scenario_cmd->add_option("--config", config_path, "Scenario config JSON")->required();
    scenario_cmd->add_option("--seed", seed, "Override the config seed")
        ->each([&](const std::string&) { seed_set = true; });
    scenario_cmd->add_option("--out", out_path, "Scenario CSV path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        hetnet::ScenarioConfig config = load_config(config_path);
        if (seed_set) config.seed = seed;

        if (run->parsed()) {
            const auto method = hetnet::parse_method(method_name);
            if (!method) {
                std::cerr << "unknown method '" << method_name << "'\n";
                return kExitValidation;
            }
            const hetnet::MetricsRow row = hetnet::run_once(config, *method, ora_cap);
            const std::string csv = hetnet::csv_text({row});
            if (out_path.empty()) {
                std::cout << csv;
            } else {
                hetnet::write_csv({row}, out_path);
            }
        } else if (sweep->parsed()) {
            hetnet::ExperimentSpec spec;
            spec.base_config = config;
            spec.replications = reps;
            spec.ora_cap = ora_cap;
            for (const std::string& name : sweep_methods) {
                const auto method = hetnet::parse_method(name);
                if (!method) {
                    std::cerr << "unknown method '" << name << "'\n";
                    return kExitValidation;
                }
                spec.methods.push_back(*method);
            }
            hetnet::SweepRange range;
            if (sweep_param == "users") {
                range.param = hetnet::SweepParam::n_users;
            } else if (sweep_param == "rmin") {
                range.param = hetnet::SweepParam::r_min;
            } else {
                std::cerr << "unknown sweep parameter '" << sweep_param << "'\n";
                return kExitValidation;
            }
            range.from = sweep_from;
            range.to = sweep_to;
            range.step = sweep_step;
            spec.sweep = range;
            const auto rows = hetnet::run_sweep(spec);
            if (out_path.empty()) {
                std::cout << hetnet::csv_text(rows);
            } else {
                hetnet::write_csv(rows, out_path);
            }
        } else if (scenario_cmd->parsed()) {
            const hetnet::Scenario scenario = hetnet::generate_scenario(config);
            const hetnet::BidMatrix bids = hetnet::sbs_bid_matrix(scenario);
            hetnet::write_scenario_csv(scenario, bids, out_path);
        }
    } catch (const hetnet::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    }
    return 0;
}
