#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "sstest/baselines.hpp"
#include "sstest/combo_test.hpp"
#include "sstest/common.hpp"
#include "sstest/datagen.hpp"
#include "sstest/errors.hpp"
#include "sstest/max_test.hpp"
#include "sstest/sum_test.hpp"

namespace sstest {

enum class Method { SSMax, SSSum, SSCC, Max, Sum, Com };

inline constexpr std::array<Method, 6> kAllMethods = {
    Method::SSMax, Method::SSSum, Method::SSCC,
    Method::Max,   Method::Sum,   Method::Com};

inline const char* method_name(Method m) {
  switch (m) {
    case Method::SSMax: return "SS-MAX";
    case Method::SSSum: return "SS-SUM";
    case Method::SSCC: return "SS-CC";
    case Method::Max: return "MAX";
    case Method::Sum: return "SUM";
    case Method::Com: return "COM";
  }
  return "?";
}

inline std::optional<Method> method_from_name(std::string name) {
  std::transform(name.begin(), name.end(), name.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  name.erase(std::remove_if(name.begin(), name.end(),
                            [](char c) { return c == '-' || c == '_'; }),
             name.end());
  if (name == "ssmax") return Method::SSMax;
  if (name == "sssum") return Method::SSSum;
  if (name == "sscc") return Method::SSCC;
  if (name == "max") return Method::Max;
  if (name == "sum") return Method::Sum;
  if (name == "com") return Method::Com;
  return std::nullopt;
}

struct ExperimentPlan {
  std::vector<Scenario> scenarios;
  std::vector<Method> methods{kAllMethods.begin(), kAllMethods.end()};
  double alpha = 0.05;
  int replications = 1000;
  int parallelism = 0;  // 0 = hardware concurrency
  LeaveTwoOutMode mode = LeaveTwoOutMode::ExactLeaveTwoOut;
  SolverConfig solver;

  void validate() const {
    if (scenarios.empty())
      throw plan_validation_error("plan: needs at least one scenario");
    if (!(alpha > 0.0 && alpha < 1.0))
      throw plan_validation_error("plan: alpha must lie in (0,1)");
    if (replications < 1)
      throw plan_validation_error("plan: replications must be >= 1");
    if (methods.empty())
      throw plan_validation_error("plan: needs at least one method");
    for (const auto& sc : scenarios) sc.validate();
  }
};

struct ReportRow {
  std::string scenario_id;
  std::string family;
  Index n = 0;
  Index p = 0;
  Index s = 0;        // signal sparsity (0 for size experiments)
  double delta = 0.0; // signal strength (0 for size experiments)
  std::string method;
  double alpha = 0.05;
  int replications = 0;
  int rejections = 0;
  double rate = 0.0;
  double mc_se = 0.0;  // sqrt(rate (1-rate) / replications)
  int failures = 0;    // replications with a non-converged solver fit
  double mean_statistic = 0.0;
};

struct SimulationReport {
  double alpha = 0.05;
  int replications = 0;
  LeaveTwoOutMode mode = LeaveTwoOutMode::ExactLeaveTwoOut;
  std::vector<ReportRow> rows;
};

inline std::string family_label(const FamilySpec& f) {
  switch (f.kind) {
    case Family::Normal: return "normal";
    case Family::StudentT: return "student_t[df=" + format_g6(f.df) + "]";
    case Family::MixtureNormal:
      return "mixture_normal[gamma=" + format_g6(f.gamma) +
             ";inflation=" + format_g6(f.inflation) + "]";
  }
  return "?";
}

inline std::string scenario_label(const Scenario& sc) {
  if (!sc.id.empty()) return sc.id;
  std::string family;
  switch (sc.family.kind) {
    case Family::Normal: family = "normal"; break;
    case Family::StudentT: family = "t" + format_g6(sc.family.df); break;
    case Family::MixtureNormal:
      family = "mn" + format_g6(sc.family.gamma) + "x" +
               format_g6(sc.family.inflation);
      break;
  }
  std::string scatter = (sc.scatter.kind == ScatterKind::AR1)
                            ? "ar" + format_g6(sc.scatter.rho)
                            : "sar" + format_g6(sc.scatter.rho) + "-" +
                                  format_g6(sc.scatter.d_low) + "-" +
                                  format_g6(sc.scatter.d_high);
  return family + "_n" + std::to_string(sc.n) + "_p" + std::to_string(sc.p) +
         "_" + scatter + "_seed" + std::to_string(sc.seed);
}

inline bool is_null_signal(const SignalSpec& s) {
  return s.kind == SignalKind::Null || s.s == 0 || s.kappa == 0.0;
}

inline double pearson_correlation(const std::vector<double>& x,
                                  const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw invalid_input_error("pearson_correlation: need two same-length series");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) { mx += x[i]; my += y[i]; }
  mx /= n; my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0)
    throw invalid_input_error("pearson_correlation: zero-variance series");
  return sxy / std::sqrt(sxx * syy);
}

namespace detail {

inline void parallel_for(int nthreads, int total,
                         const std::function<void(int)>& body) {
  if (nthreads <= 0) nthreads = static_cast<int>(std::thread::hardware_concurrency());
  if (nthreads < 1) nthreads = 1;
  if (nthreads > total) nthreads = total;
  if (nthreads <= 1) {
    for (int i = 0; i < total; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(nthreads);
  const int chunk = (total + nthreads - 1) / nthreads;
  for (int t = 0; t < nthreads; ++t) {
    const int lo = t * chunk;
    const int hi = std::min(total, lo + chunk);
    pool.emplace_back([&, t, lo, hi] {
      try {
        for (int i = lo; i < hi; ++i) body(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& err : errors)
    if (err) std::rethrow_exception(err);
}

struct MethodDraw {
  double p_value = 1.0;
  double statistic = 0.0;
  bool failed = false;  // a solver fit backing this method did not converge
};

using Battery = std::array<std::optional<MethodDraw>, 6>;

inline std::size_t method_slot(Method m) { return static_cast<std::size_t>(m); }

// Evaluates the requested methods on one sample, solving the fixed point and
// running the pair sweep at most once each.
inline Battery run_battery(const DataMatrix& X, const std::vector<Method>& methods,
                           const SolverConfig& cfg, LeaveTwoOutMode mode) {
  Battery out;
  auto wants = [&](Method m) {
    return std::find(methods.begin(), methods.end(), m) != methods.end();
  };
  const bool need_max = wants(Method::SSMax) || wants(Method::SSCC);
  const bool need_sum = wants(Method::SSSum) || wants(Method::SSCC);

  std::optional<MaxTestOutcome> mx;
  std::optional<SumTestOutcome> sm;
  if (need_max || need_sum) {
    const HREstimate full = hr_estimate(X, cfg);
    if (need_max) mx = t_max_from(X, full);
    if (need_sum) sm = t_sum_from(X, full, cfg, mode, 1);
  }
  if (wants(Method::SSMax))
    out[method_slot(Method::SSMax)] =
        MethodDraw{mx->p_value, mx->normalized, !mx->hr.converged};
  if (wants(Method::SSSum))
    out[method_slot(Method::SSSum)] =
        MethodDraw{sm->p_value, sm->normalized, sm->solver_failures > 0};
  if (wants(Method::SSCC)) {
    const ComboOutcome cc = cauchy_combine(mx->p_value, sm->p_value);
    out[method_slot(Method::SSCC)] = MethodDraw{
        cc.p_cc, cc.cauchy_stat, !mx->hr.converged || sm->solver_failures > 0};
  }
  if (wants(Method::Max)) {
    const BaselineOutcome b = clx_max_test(X);
    out[method_slot(Method::Max)] = MethodDraw{b.p_value, b.statistic, false};
  }
  if (wants(Method::Sum)) {
    const BaselineOutcome b = srivastava_sum_test(X);
    out[method_slot(Method::Sum)] = MethodDraw{b.p_value, b.statistic, false};
  }
  if (wants(Method::Com)) {
    const BaselineOutcome b = normal_combo_test(X);
    out[method_slot(Method::Com)] = MethodDraw{b.p_value, b.statistic, false};
  }
  return out;
}

struct Cell {
  Scenario scenario;
  Index s = 0;
  double delta = 0.0;
};

// Shared engine for size and power runs: replications are independent
// substreams, results land in per-replication slots and are reduced in
// replication order so the report bytes do not depend on the thread count.
inline SimulationReport run_cells(const ExperimentPlan& plan,
                                  const std::vector<Cell>& cells) {
  SimulationReport report;
  report.alpha = plan.alpha;
  report.replications = plan.replications;
  report.mode = plan.mode;

  for (const auto& cell : cells) {
    const Scenario& sc = cell.scenario;
    const ScatterMatrices scatter = make_scatter(sc.scatter, sc.p);
    std::vector<Battery> draws(plan.replications);
    parallel_for(plan.parallelism, plan.replications, [&](int rep) {
      const DataMatrix X =
          sample_with(sc, scatter, static_cast<std::uint64_t>(rep));
      draws[rep] = run_battery(X, plan.methods, plan.solver, plan.mode);
    });

    for (Method m : plan.methods) {
      ReportRow row;
      row.scenario_id = scenario_label(sc);
      row.family = family_label(sc.family);
      row.n = sc.n;
      row.p = sc.p;
      row.s = cell.s;
      row.delta = cell.delta;
      row.method = method_name(m);
      row.alpha = plan.alpha;
      row.replications = plan.replications;
      double stat_sum = 0.0;
      for (int rep = 0; rep < plan.replications; ++rep) {
        const auto& d = draws[rep][method_slot(m)];
        if (d->p_value < plan.alpha) ++row.rejections;
        if (d->failed) ++row.failures;
        stat_sum += d->statistic;
      }
      row.rate = static_cast<double>(row.rejections) / plan.replications;
      row.mc_se = std::sqrt(row.rate * (1.0 - row.rate) / plan.replications);
      row.mean_statistic = stat_sum / plan.replications;
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

}  // namespace detail

// Empirical size: rejection rates under the null for each scenario x method.
inline SimulationReport run_size_experiment(const ExperimentPlan& plan) {
  plan.validate();
  for (const auto& sc : plan.scenarios)
    if (!is_null_signal(sc.signal))
      throw plan_validation_error("size experiment: scenario '" +
                                  scenario_label(sc) +
                                  "' carries a non-null signal");
  std::vector<detail::Cell> cells;
  for (const auto& sc : plan.scenarios) cells.push_back({sc, 0, 0.0});
  return detail::run_cells(plan, cells);
}

// Power over a (sparsity s, strength delta) grid; the signal is SparseEqual
// with kappa = sqrt(delta / s).
inline SimulationReport run_power_experiment(const ExperimentPlan& plan,
                                             const std::vector<Index>& sparsity_grid,
                                             const std::vector<double>& strength_grid) {
  plan.validate();
  if (sparsity_grid.empty() || strength_grid.empty())
    throw plan_validation_error("power experiment: grids must be nonempty");
  std::vector<detail::Cell> cells;
  for (const auto& sc : plan.scenarios) {
    for (Index s : sparsity_grid) {
      if (s < 1 || s > sc.p)
        throw plan_validation_error(
            "power experiment: sparsity must satisfy 1 <= s <= p");
      for (double delta : strength_grid) {
        if (delta < 0.0)
          throw plan_validation_error("power experiment: delta must be >= 0");
        detail::Cell cell;
        cell.scenario = sc;
        cell.scenario.signal =
            SignalSpec{SignalKind::SparseEqual, s,
                       std::sqrt(delta / static_cast<double>(s))};
        cell.scenario.id = scenario_label(sc) + "_s" + std::to_string(s) + "_d" +
                           format_g6(delta);
        cell.s = s;
        cell.delta = delta;
        cells.push_back(std::move(cell));
      }
    }
  }
  return detail::run_cells(plan, cells);
}

// Pearson correlation between the normalized max and sum statistics over
// null replications.
inline double run_independence_diagnostic(const Scenario& sc, int replications,
                                          const SolverConfig& cfg = {},
                                          LeaveTwoOutMode mode = LeaveTwoOutMode::ExactLeaveTwoOut,
                                          int parallelism = 0) {
  sc.validate();
  if (!is_null_signal(sc.signal))
    throw plan_validation_error("independence diagnostic: needs a null signal");
  if (replications < 30)
    throw insufficient_replications_error(
        "independence diagnostic: needs at least 30 replications");

  const ScatterMatrices scatter = make_scatter(sc.scatter, sc.p);
  std::vector<double> max_stats(replications), sum_stats(replications);
  detail::parallel_for(parallelism, replications, [&](int rep) {
    const DataMatrix X = sample_with(sc, scatter, static_cast<std::uint64_t>(rep));
    const HREstimate full = hr_estimate(X, cfg);
    max_stats[rep] = t_max_from(X, full).normalized;
    sum_stats[rep] = t_sum_from(X, full, cfg, mode, 1).normalized;
  });
  return pearson_correlation(max_stats, sum_stats);
}

}  // namespace sstest
