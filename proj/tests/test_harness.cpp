#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <regex>
#include <string>

#include "hetnet/harness.hpp"

using namespace hetnet;

namespace {

std::string mask_wall_clock(const std::string& csv) {
    // wall_clock_s is the fourth column
    static const std::regex row(R"((^|\n)([^,\n]*,[^,\n]*,[^,\n]*,)[^,\n]*)");
    return std::regex_replace(csv, row, "$1$2*");
}

ScenarioConfig small_config() {
    ScenarioConfig c;
    c.n_users = 40;
    c.seed = 9;
    return c;
}

}  // namespace

TEST_CASE("method names round trip") {
    for (Method m : {Method::dsm, Method::ora, Method::rhm_direct, Method::rhm_dual}) {
        CHECK(parse_method(method_name(m)) == m);
    }
    CHECK(!parse_method("simplex").has_value());
}

TEST_CASE("run_once repeats are identical apart from timing") {
    const ScenarioConfig c = small_config();
    for (Method m : {Method::dsm, Method::rhm_direct, Method::rhm_dual}) {
        const MetricsRow a = run_once(c, m);
        const MetricsRow b = run_once(c, m);
        CHECK(a.avg_cost_per_user == b.avg_cost_per_user);
        CHECK(a.service_rate == b.service_rate);
        CHECK(a.offloaded_count == b.offloaded_count);
        CHECK(a.iterations == b.iterations);
        CHECK(a.status == b.status);
    }
}

TEST_CASE("an oversized exact run is skipped, not attempted") {
    ScenarioConfig c = small_config();
    c.n_users = 25;
    const MetricsRow row = run_once(c, Method::ora, 20);
    CHECK(row.status == RowStatus::skipped);
    CHECK(row.wall_clock_s == 0.0);
}

TEST_CASE("an empty scenario reports full service at zero cost") {
    ScenarioConfig c = small_config();
    c.n_users = 0;
    const MetricsRow row = run_once(c, Method::dsm);
    CHECK(row.status == RowStatus::converged);
    CHECK(row.service_rate == 1.0);
    CHECK(row.avg_cost_per_user == 0.0);
}

TEST_CASE("csv text has the fixed header and one line per row") {
    CHECK(csv_text({}) ==
          "method,sweep_value,seed,wall_clock_s,avg_cost_per_user,service_rate,"
          "offloaded_count,converged,iterations\n");
    const MetricsRow row = run_once(small_config(), Method::dsm);
    const std::string csv = csv_text({row, row});
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
    CHECK(csv.find("dsm,") != std::string::npos);
    CHECK(csv.find("converged") != std::string::npos);
}

TEST_CASE("sweep emits methods x points x replications rows in order") {
    ExperimentSpec spec;
    spec.base_config = small_config();
    spec.methods = {Method::dsm, Method::rhm_direct};
    spec.replications = 3;
    SweepRange range;
    range.param = SweepParam::n_users;
    range.from = 10;
    range.to = 30;
    range.step = 10;
    spec.sweep = range;
    const auto rows = run_sweep(spec);
    REQUIRE(rows.size() == 2 * 3 * 3);
    CHECK(rows[0].method == Method::dsm);
    CHECK(rows[0].sweep_value == 10);
    CHECK(rows[0].seed == spec.base_config.seed);
    CHECK(rows[1].seed == spec.base_config.seed + 1);
    CHECK(rows.back().method == Method::rhm_direct);
    CHECK(rows.back().sweep_value == 30);
}

TEST_CASE("sweeps are byte-identical across runs once timing is masked") {
    ExperimentSpec spec;
    spec.base_config = small_config();
    spec.methods = {Method::dsm, Method::rhm_direct, Method::rhm_dual};
    spec.replications = 2;
    SweepRange range;
    range.from = 20;
    range.to = 40;
    range.step = 10;
    spec.sweep = range;
    spec.workers = 4;
    const std::string a = mask_wall_clock(csv_text(run_sweep(spec)));
    spec.workers = 1;
    const std::string b = mask_wall_clock(csv_text(run_sweep(spec)));
    CHECK(a == b);
}

TEST_CASE("experiment validation rejects bad specs") {
    ExperimentSpec spec;
    spec.base_config = small_config();
    CHECK_THROWS_AS(spec.validate(), ValidationError);  // no methods
    spec.methods = {Method::dsm};
    spec.replications = 0;
    CHECK_THROWS_AS(spec.validate(), ValidationError);
    spec.replications = 1;
    SweepRange range;
    range.from = 10;
    range.to = 5;
    range.step = 1;
    spec.sweep = range;
    CHECK_THROWS_AS(spec.validate(), ValidationError);
}

TEST_CASE("rate sweeps move the target rate") {
    ExperimentSpec spec;
    spec.base_config = small_config();
    spec.methods = {Method::rhm_direct};
    spec.replications = 1;
    SweepRange range;
    range.param = SweepParam::r_min;
    range.from = 64e3;
    range.to = 256e3;
    range.step = 96e3;
    spec.sweep = range;
    const auto rows = run_sweep(spec);
    REQUIRE(rows.size() == 3);
    // tighter rate targets cost more
    CHECK(rows[0].avg_cost_per_user < rows[2].avg_cost_per_user);
}
