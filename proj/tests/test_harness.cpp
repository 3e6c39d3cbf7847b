#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "sstest/harness.hpp"
#include "sstest/serialize.hpp"

using namespace sstest;

namespace {

Scenario small_scenario(std::uint64_t seed = 11) {
  Scenario sc;
  sc.family.kind = Family::Normal;
  sc.n = 20;
  sc.p = 10;
  sc.scatter = {ScatterKind::AR1, 0.5, 1.0, 3.0};
  sc.signal = {SignalKind::Null, 0, 0.0};
  sc.seed = seed;
  return sc;
}

ExperimentPlan small_plan() {
  ExperimentPlan plan;
  plan.scenarios = {small_scenario()};
  plan.replications = 10;
  plan.parallelism = 1;
  plan.mode = LeaveTwoOutMode::ExactLeaveTwoOut;
  return plan;
}

}  // namespace

TEST_CASE("single replication gives a reproducible 0/1 rate", "[harness]") {
  ExperimentPlan plan = small_plan();
  plan.replications = 1;
  const SimulationReport a = run_size_experiment(plan);
  const SimulationReport b = run_size_experiment(plan);
  REQUIRE(a.rows.size() == 6);
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK((a.rows[i].rate == 0.0 || a.rows[i].rate == 1.0));
    CHECK(a.rows[i].rate == b.rows[i].rate);
    CHECK(a.rows[i].mean_statistic == b.rows[i].mean_statistic);
  }
}

TEST_CASE("size plans reject non-null signals", "[harness]") {
  ExperimentPlan plan = small_plan();
  plan.scenarios[0].signal = {SignalKind::SparseEqual, 2, 0.5};
  CHECK_THROWS_AS(run_size_experiment(plan), plan_validation_error);
}

TEST_CASE("mc standard error formula", "[harness]") {
  const SimulationReport report = run_size_experiment(small_plan());
  for (const auto& row : report.rows) {
    CHECK(row.mc_se ==
          std::sqrt(row.rate * (1.0 - row.rate) / row.replications));
    CHECK(row.replications == 10);
    CHECK(row.rate >= 0.0);
    CHECK(row.rate <= 1.0);
  }
}

TEST_CASE("reports are byte-identical across thread counts", "[harness]") {
  ExperimentPlan plan = small_plan();
  plan.replications = 8;
  std::string serialized[3];
  int idx = 0;
  for (int threads : {1, 2, 4}) {
    plan.parallelism = threads;
    const SimulationReport report = run_size_experiment(plan);
    std::ostringstream os;
    write_report_csv(report, os);
    serialized[idx++] = os.str();
  }
  CHECK(serialized[0] == serialized[1]);
  CHECK(serialized[0] == serialized[2]);
}

TEST_CASE("power grid validation", "[harness]") {
  ExperimentPlan plan = small_plan();
  CHECK_THROWS_AS(run_power_experiment(plan, {}, {0.5}), plan_validation_error);
  CHECK_THROWS_AS(run_power_experiment(plan, {2}, {}), plan_validation_error);
  CHECK_THROWS_AS(run_power_experiment(plan, {11}, {0.5}),
                  plan_validation_error);  // s > p
  CHECK_THROWS_AS(run_power_experiment(plan, {2}, {-0.5}),
                  plan_validation_error);
}

TEST_CASE("power rows carry the grid coordinates", "[harness]") {
  ExperimentPlan plan = small_plan();
  plan.replications = 3;
  plan.methods = {Method::SSMax, Method::Max};
  const SimulationReport report = run_power_experiment(plan, {2, 5}, {0.0, 0.5});
  REQUIRE(report.rows.size() == 2 * 2 * 2);
  CHECK(report.rows[0].s == 2);
  CHECK(report.rows[0].delta == 0.0);
  CHECK(report.rows.back().s == 5);
  CHECK(report.rows.back().delta == 0.5);
  // kappa = sqrt(delta/s) reflected in the scenario id
  CHECK(report.rows.back().scenario_id.find("_s5_d0.5") != std::string::npos);
}

TEST_CASE("pearson correlation basics", "[harness]") {
  std::vector<double> x = {1.0, 2.5, -0.5, 4.0, 0.25};
  std::vector<double> neg(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) neg[i] = -x[i];
  CHECK(pearson_correlation(x, x) == Catch::Approx(1.0).margin(1e-14));
  CHECK(pearson_correlation(x, neg) == Catch::Approx(-1.0).margin(1e-14));
  CHECK_THROWS_AS(pearson_correlation(x, {1.0}), invalid_input_error);
  std::vector<double> constant(x.size(), 2.0);
  CHECK_THROWS_AS(pearson_correlation(x, constant), invalid_input_error);
}

TEST_CASE("independence diagnostic preconditions", "[harness]") {
  const Scenario sc = small_scenario();
  CHECK_THROWS_AS(run_independence_diagnostic(sc, 10),
                  insufficient_replications_error);
  Scenario shifted = sc;
  shifted.signal = {SignalKind::SparseEqual, 2, 1.0};
  CHECK_THROWS_AS(run_independence_diagnostic(shifted, 50),
                  plan_validation_error);
}

TEST_CASE("independence diagnostic runs on a small scenario", "[harness]") {
  const double corr = run_independence_diagnostic(small_scenario(), 40,
                                                  SolverConfig{},
                                                  LeaveTwoOutMode::SharedDhat, 2);
  CHECK(std::isfinite(corr));
  CHECK(std::abs(corr) <= 1.0);
}

TEST_CASE("plan json round trip", "[harness]") {
  ExperimentPlan plan = small_plan();
  plan.alpha = 0.1;
  plan.methods = {Method::SSCC, Method::Sum};
  plan.mode = LeaveTwoOutMode::SharedDhat;
  plan.solver.tol_loc = 1e-7;
  plan.scenarios[0].family.kind = Family::StudentT;
  plan.scenarios[0].family.df = 3.0;
  plan.scenarios[0].signal = {SignalKind::SparseEqual, 0, 0.0};

  const json j = to_json(plan);
  const ExperimentPlan back = plan_from_json(j);
  CHECK(back.alpha == plan.alpha);
  CHECK(back.replications == plan.replications);
  CHECK(back.mode == plan.mode);
  CHECK(back.solver.tol_loc == plan.solver.tol_loc);
  REQUIRE(back.methods.size() == 2);
  CHECK(back.methods[0] == Method::SSCC);
  CHECK(back.methods[1] == Method::Sum);
  REQUIRE(back.scenarios.size() == 1);
  CHECK(back.scenarios[0].family.kind == Family::StudentT);
  CHECK(back.scenarios[0].family.df == 3.0);
  CHECK(back.scenarios[0].n == plan.scenarios[0].n);
  CHECK(back.scenarios[0].seed == plan.scenarios[0].seed);
}

TEST_CASE("report csv schema", "[harness]") {
  ExperimentPlan plan = small_plan();
  plan.replications = 2;
  plan.methods = {Method::Max};
  const SimulationReport report = run_size_experiment(plan);
  std::ostringstream os;
  write_report_csv(report, os);
  const std::string csv = os.str();
  CHECK(csv.rfind("scenario_id,family,n,p,s,delta,method,alpha,replications,"
                  "rejections,rate,mc_se,failures\n", 0) == 0);
  // one header + one row
  int newlines = 0;
  for (char ch : csv)
    if (ch == '\n') ++newlines;
  CHECK(newlines == 2);
}

TEST_CASE("report json nests methods under scenario cells", "[harness]") {
  ExperimentPlan plan = small_plan();
  plan.replications = 2;
  plan.methods = {Method::Max, Method::Sum};
  const SimulationReport report = run_size_experiment(plan);
  const json j = report_to_json(report);
  CHECK(j.at("replications") == 2);
  CHECK(j.at("mode") == "exact");
  CHECK(j.at("approximate") == false);
  REQUIRE(j.at("scenarios").size() == 1);
  CHECK(j.at("scenarios")[0].at("methods").size() == 2);
}

TEST_CASE("method names round trip", "[harness]") {
  for (Method m : kAllMethods) {
    const auto parsed = method_from_name(method_name(m));
    REQUIRE(parsed.has_value());
    CHECK(*parsed == m);
  }
  CHECK(method_from_name("ss_max") == Method::SSMax);
  CHECK(method_from_name("SSCC") == Method::SSCC);
  CHECK_FALSE(method_from_name("bogus").has_value());
}

TEST_CASE("method failure accounting flows into rows", "[harness]") {
  ExperimentPlan plan = small_plan();
  plan.replications = 3;
  plan.methods = {Method::SSMax, Method::Max};
  plan.solver.max_iter = 1;  // force non-convergence
  plan.solver.tol_loc = 1e-14;
  plan.solver.tol_scale = 1e-14;
  const SimulationReport report = run_size_experiment(plan);
  REQUIRE(report.rows.size() == 2);
  CHECK(report.rows[0].method == std::string("SS-MAX"));
  CHECK(report.rows[0].failures == 3);
  CHECK(report.rows[1].failures == 0);  // baseline has no solver
}
