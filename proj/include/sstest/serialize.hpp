#pragma once

#include <ostream>
#include <string>

#include <json.hpp>

#include "sstest/common.hpp"
#include "sstest/datagen.hpp"
#include "sstest/errors.hpp"
#include "sstest/harness.hpp"

namespace sstest {

using json = nlohmann::ordered_json;

// ---- scenario <-> json ----

inline json to_json(const FamilySpec& f) {
  json j;
  switch (f.kind) {
    case Family::Normal:
      j["kind"] = "normal";
      break;
    case Family::StudentT:
      j["kind"] = "student_t";
      j["df"] = f.df;
      break;
    case Family::MixtureNormal:
      j["kind"] = "mixture_normal";
      j["gamma"] = f.gamma;
      j["inflation"] = f.inflation;
      break;
  }
  return j;
}

inline FamilySpec family_from_json(const json& j) {
  FamilySpec f;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "normal") {
    f.kind = Family::Normal;
  } else if (kind == "student_t") {
    f.kind = Family::StudentT;
    f.df = j.at("df").get<double>();
  } else if (kind == "mixture_normal") {
    f.kind = Family::MixtureNormal;
    f.gamma = j.value("gamma", 0.8);
    f.inflation = j.value("inflation", 9.0);
  } else {
    throw parse_error("unknown family kind '" + kind + "'");
  }
  return f;
}

inline json to_json(const ScatterSpec& s) {
  json j;
  if (s.kind == ScatterKind::AR1) {
    j["kind"] = "ar1";
    j["rho"] = s.rho;
  } else {
    j["kind"] = "scaled_ar1";
    j["rho"] = s.rho;
    j["d_low"] = s.d_low;
    j["d_high"] = s.d_high;
  }
  return j;
}

inline ScatterSpec scatter_from_json(const json& j) {
  ScatterSpec s;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "ar1") {
    s.kind = ScatterKind::AR1;
  } else if (kind == "scaled_ar1") {
    s.kind = ScatterKind::ScaledAR1;
    s.d_low = j.value("d_low", 1.0);
    s.d_high = j.value("d_high", 3.0);
  } else {
    throw parse_error("unknown scatter kind '" + kind + "'");
  }
  s.rho = j.at("rho").get<double>();
  return s;
}

inline json to_json(const SignalSpec& s) {
  json j;
  if (s.kind == SignalKind::Null) {
    j["kind"] = "null";
  } else {
    j["kind"] = "sparse_equal";
    j["s"] = s.s;
    j["kappa"] = s.kappa;
  }
  return j;
}

inline SignalSpec signal_from_json(const json& j) {
  SignalSpec s;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "null") {
    s.kind = SignalKind::Null;
  } else if (kind == "sparse_equal") {
    s.kind = SignalKind::SparseEqual;
    s.s = j.at("s").get<Index>();
    s.kappa = j.at("kappa").get<double>();
  } else {
    throw parse_error("unknown signal kind '" + kind + "'");
  }
  return s;
}

inline json to_json(const Scenario& sc) {
  json j;
  if (!sc.id.empty()) j["id"] = sc.id;
  j["family"] = to_json(sc.family);
  j["n"] = sc.n;
  j["p"] = sc.p;
  j["scatter"] = to_json(sc.scatter);
  j["signal"] = to_json(sc.signal);
  j["seed"] = sc.seed;
  return j;
}

inline Scenario scenario_from_json(const json& j) {
  Scenario sc;
  sc.id = j.value("id", std::string{});
  sc.family = family_from_json(j.at("family"));
  sc.n = j.at("n").get<Index>();
  sc.p = j.at("p").get<Index>();
  sc.scatter = scatter_from_json(j.at("scatter"));
  if (j.contains("signal")) sc.signal = signal_from_json(j.at("signal"));
  sc.seed = j.at("seed").get<std::uint64_t>();
  sc.validate();
  return sc;
}

// ---- experiment plan <-> json ----

inline const char* mode_name(LeaveTwoOutMode m) {
  return m == LeaveTwoOutMode::ExactLeaveTwoOut ? "exact" : "shared-dhat";
}

inline LeaveTwoOutMode mode_from_name(const std::string& name) {
  if (name == "exact") return LeaveTwoOutMode::ExactLeaveTwoOut;
  if (name == "shared-dhat" || name == "shared")
    return LeaveTwoOutMode::SharedDhat;
  throw parse_error("unknown leave-two-out mode '" + name + "'");
}

inline json to_json(const ExperimentPlan& plan) {
  json j;
  j["alpha"] = plan.alpha;
  j["replications"] = plan.replications;
  j["parallelism"] = plan.parallelism;
  j["mode"] = mode_name(plan.mode);
  j["solver"] = {{"tol_loc", plan.solver.tol_loc},
                 {"tol_scale", plan.solver.tol_scale},
                 {"max_iter", plan.solver.max_iter}};
  j["methods"] = json::array();
  for (Method m : plan.methods) j["methods"].push_back(method_name(m));
  j["scenarios"] = json::array();
  for (const auto& sc : plan.scenarios) j["scenarios"].push_back(to_json(sc));
  return j;
}

inline ExperimentPlan plan_from_json(const json& j) {
  ExperimentPlan plan;
  plan.alpha = j.value("alpha", 0.05);
  plan.replications = j.value("replications", 1000);
  plan.parallelism = j.value("parallelism", 0);
  if (j.contains("mode")) plan.mode = mode_from_name(j.at("mode").get<std::string>());
  if (j.contains("solver")) {
    const json& s = j.at("solver");
    plan.solver.tol_loc = s.value("tol_loc", 1e-6);
    plan.solver.tol_scale = s.value("tol_scale", 1e-6);
    plan.solver.max_iter = s.value("max_iter", 100);
  }
  if (j.contains("methods")) {
    plan.methods.clear();
    for (const auto& name : j.at("methods")) {
      const auto m = method_from_name(name.get<std::string>());
      if (!m) throw parse_error("unknown method '" + name.get<std::string>() + "'");
      plan.methods.push_back(*m);
    }
  }
  for (const auto& js : j.at("scenarios"))
    plan.scenarios.push_back(scenario_from_json(js));
  plan.validate();
  return plan;
}

// ---- report writers ----

inline constexpr const char* kReportCsvHeader =
    "scenario_id,family,n,p,s,delta,method,alpha,replications,rejections,rate,"
    "mc_se,failures";

inline void write_report_csv(const SimulationReport& report, std::ostream& os) {
  os << kReportCsvHeader << "\n";
  for (const auto& r : report.rows) {
    os << r.scenario_id << ',' << r.family << ',' << r.n << ',' << r.p << ','
       << r.s << ',' << format_g6(r.delta) << ',' << r.method << ','
       << format_g6(r.alpha) << ',' << r.replications << ',' << r.rejections
       << ',' << format_g6(r.rate) << ',' << format_g6(r.mc_se) << ','
       << r.failures << "\n";
  }
}

// Nested layout: one object per scenario cell, methods inside.
inline json report_to_json(const SimulationReport& report) {
  json j;
  j["alpha"] = round_g6(report.alpha);
  j["replications"] = report.replications;
  j["mode"] = mode_name(report.mode);
  j["approximate"] = (report.mode == LeaveTwoOutMode::SharedDhat);
  j["scenarios"] = json::array();
  json* current = nullptr;
  std::string current_key;
  for (const auto& r : report.rows) {
    const std::string key = r.scenario_id + "|" + std::to_string(r.s) + "|" +
                            format_g6(r.delta);
    if (current == nullptr || key != current_key) {
      json cell;
      cell["scenario_id"] = r.scenario_id;
      cell["family"] = r.family;
      cell["n"] = r.n;
      cell["p"] = r.p;
      cell["s"] = r.s;
      cell["delta"] = round_g6(r.delta);
      cell["methods"] = json::array();
      j["scenarios"].push_back(std::move(cell));
      current = &j["scenarios"].back();
      current_key = key;
    }
    json m;
    m["method"] = r.method;
    m["rejections"] = r.rejections;
    m["rate"] = round_g6(r.rate);
    m["mc_se"] = round_g6(r.mc_se);
    m["failures"] = r.failures;
    m["mean_statistic"] = round_g6(r.mean_statistic);
    (*current)["methods"].push_back(std::move(m));
  }
  return j;
}

}  // namespace sstest
