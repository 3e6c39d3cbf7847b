#pragma once

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "sstest/baselines.hpp"
#include "sstest/combo_test.hpp"
#include "sstest/csv.hpp"
#include "sstest/harness.hpp"
#include "sstest/serialize.hpp"

namespace sstest {

enum class OutputFormat { CSV, JSON };

struct CliConfig {
  std::string input_path;
  std::string paired_path;
  std::string plan_path;
  std::string output_path;
  bool split_columns = false;  // paired layout: one file holding [sample1 | sample2]
  bool transpose = false;      // input columns are observations
  std::vector<Method> methods{kAllMethods.begin(), kAllMethods.end()};
  double alpha = 0.05;
  SolverConfig solver;
  LeaveTwoOutMode mode = LeaveTwoOutMode::ExactLeaveTwoOut;
  bool mode_given = false;
  bool seed_given = false;
  std::uint64_t seed = 0;
  int threads = 0;
  OutputFormat format = OutputFormat::CSV;
};

namespace detail {

struct MethodRow {
  std::string method;
  double statistic;
  double p_value;
  bool reject;
};

struct MethodRun {
  std::vector<MethodRow> rows;
  int solver_failures = 0;  // fixed-point fits that stopped at max_iter
};

// Runs the selected methods on one data matrix, sharing the fixed-point fit
// and the pair sweep across tests.
inline MethodRun run_methods(const DataMatrix& X, const CliConfig& cfg) {
  auto wants = [&](Method m) {
    return std::find(cfg.methods.begin(), cfg.methods.end(), m) !=
           cfg.methods.end();
  };
  const bool need_max = wants(Method::SSMax) || wants(Method::SSCC);
  const bool need_sum = wants(Method::SSSum) || wants(Method::SSCC);

  MethodRun run;
  std::optional<MaxTestOutcome> mx;
  std::optional<SumTestOutcome> sm;
  if (need_max || need_sum) {
    const HREstimate full = hr_estimate(X, cfg.solver);
    if (!full.converged) ++run.solver_failures;
    if (need_max) mx = t_max_from(X, full);
    if (need_sum) {
      sm = t_sum_from(X, full, cfg.solver, cfg.mode, cfg.threads);
      run.solver_failures += sm->solver_failures - (full.converged ? 0 : 1);
    }
  }

  for (Method m : kAllMethods) {
    if (!wants(m)) continue;
    MethodRow row;
    row.method = method_name(m);
    switch (m) {
      case Method::SSMax:
        row.statistic = mx->t_max;
        row.p_value = mx->p_value;
        break;
      case Method::SSSum:
        row.statistic = sm->normalized;
        row.p_value = sm->p_value;
        break;
      case Method::SSCC: {
        const ComboOutcome cc = cauchy_combine(mx->p_value, sm->p_value);
        row.statistic = cc.cauchy_stat;
        row.p_value = cc.p_cc;
        break;
      }
      case Method::Max: {
        const BaselineOutcome b = clx_max_test(X);
        row.statistic = b.statistic;
        row.p_value = b.p_value;
        break;
      }
      case Method::Sum: {
        const BaselineOutcome b = srivastava_sum_test(X);
        row.statistic = b.statistic;
        row.p_value = b.p_value;
        break;
      }
      case Method::Com: {
        const BaselineOutcome b = normal_combo_test(X);
        row.statistic = b.statistic;
        row.p_value = b.p_value;
        break;
      }
    }
    row.reject = row.p_value < cfg.alpha;
    run.rows.push_back(std::move(row));
  }
  return run;
}

inline void print_method_table(const std::vector<MethodRow>& rows, Index n,
                               Index p, double alpha, std::ostream& out) {
  out << "n = " << n << ", p = " << p << ", alpha = " << format_g6(alpha)
      << "\n";
  out << "method    statistic     p-value       reject\n";
  for (const auto& r : rows) {
    std::ostringstream line;
    line << std::left << std::setw(10) << r.method << std::setw(14)
         << format_g6(r.statistic) << std::setw(14) << format_g6(r.p_value)
         << (r.reject ? "yes" : "no");
    out << line.str() << "\n";
  }
}

inline void write_method_report(const std::vector<MethodRow>& rows,
                                const CliConfig& cfg, std::ostream& os) {
  if (cfg.format == OutputFormat::CSV) {
    os << "method,statistic,p_value,reject\n";
    for (const auto& r : rows)
      os << r.method << ',' << format_g6(r.statistic) << ','
         << format_g6(r.p_value) << ',' << (r.reject ? 1 : 0) << "\n";
  } else {
    json j = json::array();
    for (const auto& r : rows) {
      json jr;
      jr["method"] = r.method;
      jr["statistic"] = round_g6(r.statistic);
      jr["p_value"] = round_g6(r.p_value);
      jr["reject"] = r.reject;
      j.push_back(std::move(jr));
    }
    os << j.dump(2) << "\n";
  }
}

inline void emit_report(const std::vector<MethodRow>& rows, const CliConfig& cfg,
                        std::ostream& out) {
  if (cfg.output_path.empty()) return;
  std::ofstream f(cfg.output_path, std::ios::binary);
  if (!f) throw invalid_input_error("cannot open output file '" +
                                    cfg.output_path + "'");
  write_method_report(rows, cfg, f);
  out << "report written to " << cfg.output_path << "\n";
}

inline DataMatrix load_matrix(const std::string& path, bool transpose) {
  DataMatrix X = read_csv_file(path);
  if (transpose) {
    DataMatrix T = X.transpose();
    X = std::move(T);
  }
  return X;
}

inline void validate_test_shape(const DataMatrix& X) {
  if (X.rows() < 4)
    throw invalid_input_error("data: needs at least 4 observations (rows), got " +
                              std::to_string(X.rows()));
  if (X.cols() < 3)
    throw invalid_input_error("data: needs at least 3 variables (columns), got " +
                              std::to_string(X.cols()));
}

}  // namespace detail

// Applies the selected tests to one dataset and reports per-method decisions.
inline int cmd_test(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.input_path.empty())
      throw invalid_input_error("test: --input is required");
    const DataMatrix X = detail::load_matrix(cfg.input_path, cfg.transpose);
    detail::validate_test_shape(X);
    const auto run = detail::run_methods(X, cfg);
    if (run.solver_failures > 0)
      err << "warning: " << run.solver_failures
          << " fixed-point fit(s) stopped at the iteration cap without "
             "converging; statistics use the final iterate\n";
    detail::print_method_table(run.rows, X.rows(), X.cols(), cfg.alpha, out);
    detail::emit_report(run.rows, cfg, out);
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

// Paired-sample workflow: difference the two samples row-wise, then run the
// one-sample tests on the differences.
inline int cmd_paired(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.input_path.empty())
      throw invalid_input_error("paired: --input is required");
    DataMatrix D;
    if (cfg.split_columns) {
      const DataMatrix A = detail::load_matrix(cfg.input_path, cfg.transpose);
      if (A.cols() % 2 != 0)
        throw invalid_input_error(
            "paired: --split needs an even column count, got " +
            std::to_string(A.cols()));
      const Index p = A.cols() / 2;
      D = A.leftCols(p) - A.rightCols(p);
    } else {
      if (cfg.paired_path.empty())
        throw invalid_input_error("paired: needs --paired-with or --split");
      const DataMatrix A = detail::load_matrix(cfg.input_path, cfg.transpose);
      const DataMatrix B = detail::load_matrix(cfg.paired_path, cfg.transpose);
      if (A.rows() != B.rows() || A.cols() != B.cols())
        throw invalid_input_error(
            "paired: shape mismatch: " + std::to_string(A.rows()) + "x" +
            std::to_string(A.cols()) + " vs " + std::to_string(B.rows()) + "x" +
            std::to_string(B.cols()));
      D = A - B;
    }
    detail::validate_test_shape(D);
    const auto run = detail::run_methods(D, cfg);
    if (run.solver_failures > 0)
      err << "warning: " << run.solver_failures
          << " fixed-point fit(s) stopped at the iteration cap without "
             "converging; statistics use the final iterate\n";
    detail::print_method_table(run.rows, D.rows(), D.cols(), cfg.alpha, out);
    detail::emit_report(run.rows, cfg, out);
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

namespace detail {

inline json load_plan_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw parse_error(path + ": cannot open plan file");
  try {
    return json::parse(f);
  } catch (const nlohmann::json::parse_error& e) {
    throw parse_error(path + ": " + e.what());
  }
}

inline ExperimentPlan plan_with_overrides(const json& j, const CliConfig& cfg) {
  ExperimentPlan plan = plan_from_json(j);
  if (cfg.threads > 0) plan.parallelism = cfg.threads;
  if (cfg.mode_given) plan.mode = cfg.mode;
  if (cfg.seed_given) {
    std::uint64_t s = cfg.seed;
    for (auto& sc : plan.scenarios) sc.seed = s++;
  }
  return plan;
}

}  // namespace detail

// Runs the Monte Carlo plan (size experiment, or power when the plan carries
// a "power" section with sparsity/strength grids) and writes the report.
inline int cmd_simulate(const CliConfig& cfg, std::ostream& out,
                        std::ostream& err) {
  try {
    if (cfg.plan_path.empty())
      throw invalid_input_error("simulate: --plan is required");
    const json j = detail::load_plan_json(cfg.plan_path);
    const ExperimentPlan plan = detail::plan_with_overrides(j, cfg);

    SimulationReport report;
    if (j.contains("power")) {
      std::vector<Index> sparsity;
      std::vector<double> strength;
      for (const auto& v : j.at("power").at("sparsity_grid"))
        sparsity.push_back(v.get<Index>());
      for (const auto& v : j.at("power").at("strength_grid"))
        strength.push_back(v.get<double>());
      report = run_power_experiment(plan, sparsity, strength);
    } else {
      report = run_size_experiment(plan);
    }

    if (plan.mode == LeaveTwoOutMode::SharedDhat)
      err << "note: shared-dhat mode reuses the full-sample scale estimate; "
             "rates are approximate\n";

    std::ostringstream body;
    if (cfg.format == OutputFormat::CSV)
      write_report_csv(report, body);
    else
      body << report_to_json(report).dump(2) << "\n";

    if (cfg.output_path.empty()) {
      out << body.str();
    } else {
      std::ofstream f(cfg.output_path, std::ios::binary);
      if (!f) throw invalid_input_error("cannot open output file '" +
                                        cfg.output_path + "'");
      f << body.str();
      out << "report written to " << cfg.output_path << "\n";
    }
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

// Correlation between the normalized max and sum statistics over null
// replications of the plan's first scenario.
inline int cmd_independence(const CliConfig& cfg, std::ostream& out,
                            std::ostream& err) {
  try {
    if (cfg.plan_path.empty())
      throw invalid_input_error("independence: --plan is required");
    const json j = detail::load_plan_json(cfg.plan_path);
    const ExperimentPlan plan = detail::plan_with_overrides(j, cfg);
    const double corr = run_independence_diagnostic(
        plan.scenarios.front(), plan.replications, plan.solver, plan.mode,
        plan.parallelism);
    out << "replications = " << plan.replications << "\n";
    out << "correlation(normalized max, normalized sum) = " << format_g6(corr)
        << "\n";
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace sstest
