#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sstest/cli.hpp"

namespace {

void add_common_flags(CLI::App* app, sstest::CliConfig& cfg, std::string& methods,
                      std::string& mode, std::string& format, double& tol) {
  app->add_option("--alpha", cfg.alpha, "significance level")
      ->check(CLI::Range(1e-12, 1.0 - 1e-12))
      ->default_val(0.05);
  app->add_option("--methods", methods,
                  "comma-separated subset of ss-max,ss-sum,ss-cc,max,sum,com");
  app->add_option("--mode", mode, "leave-two-out mode: exact | shared-dhat");
  app->add_option("--tol", tol, "solver tolerance (location and scale)");
  app->add_option("--max-iter", cfg.solver.max_iter, "solver iteration cap");
  app->add_option("--seed", cfg.seed, "override scenario seeds");
  app->add_option("--threads", cfg.threads, "worker threads (0 = all cores)");
  app->add_option("--output", cfg.output_path, "report file path");
  app->add_option("--format", format, "report format: csv | json");
}

int apply_common(CLI::App* app, sstest::CliConfig& cfg, const std::string& methods,
                 const std::string& mode, const std::string& format, double tol) {
  if (app->count("--methods") > 0) {
    cfg.methods.clear();
    std::size_t start = 0;
    while (start <= methods.size()) {
      const auto pos = methods.find(',', start);
      const std::string tok = methods.substr(
          start, pos == std::string::npos ? std::string::npos : pos - start);
      if (!tok.empty()) {
        const auto m = sstest::method_from_name(tok);
        if (!m) {
          std::cerr << "error: unknown method '" << tok << "'\n";
          return 1;
        }
        cfg.methods.push_back(*m);
      }
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
    if (cfg.methods.empty()) {
      std::cerr << "error: --methods selected no method\n";
      return 1;
    }
  }
  if (app->count("--mode") > 0) {
    try {
      cfg.mode = sstest::mode_from_name(mode);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
    cfg.mode_given = true;
  }
  if (app->count("--format") > 0) {
    if (format == "csv") {
      cfg.format = sstest::OutputFormat::CSV;
    } else if (format == "json") {
      cfg.format = sstest::OutputFormat::JSON;
    } else {
      std::cerr << "error: unknown format '" << format << "'\n";
      return 1;
    }
  }
  if (app->count("--tol") > 0) {
    cfg.solver.tol_loc = tol;
    cfg.solver.tol_scale = tol;
  }
  if (app->count("--seed") > 0) cfg.seed_given = true;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spatial-sign location tests for high-dimensional data"};
  app.require_subcommand(1);

  sstest::CliConfig cfg;
  std::string methods, mode, format;
  double tol = 1e-6;

  CLI::App* test = app.add_subcommand("test", "run the tests on a CSV dataset");
  test->add_option("--input", cfg.input_path, "CSV file, rows = observations")
      ->required();
  test->add_flag("--transpose", cfg.transpose, "input columns are observations");
  add_common_flags(test, cfg, methods, mode, format, tol);

  CLI::App* paired =
      app.add_subcommand("paired", "test the mean difference of paired samples");
  paired->add_option("--input", cfg.input_path, "first sample CSV")->required();
  paired->add_option("--paired-with", cfg.paired_path, "second sample CSV");
  paired->add_flag("--split", cfg.split_columns,
                   "single input holds [sample1 | sample2] in 2p columns");
  paired->add_flag("--transpose", cfg.transpose, "input columns are observations");
  add_common_flags(paired, cfg, methods, mode, format, tol);

  CLI::App* simulate =
      app.add_subcommand("simulate", "run a Monte Carlo experiment plan");
  simulate->add_option("--plan", cfg.plan_path, "JSON plan file")->required();
  add_common_flags(simulate, cfg, methods, mode, format, tol);

  CLI::App* independence = app.add_subcommand(
      "independence", "max/sum statistic correlation diagnostic");
  independence->add_option("--plan", cfg.plan_path, "JSON plan file")->required();
  add_common_flags(independence, cfg, methods, mode, format, tol);

  CLI11_PARSE(app, argc, argv);

  CLI::App* active = app.get_subcommands().front();
  if (const int rc = apply_common(active, cfg, methods, mode, format, tol);
      rc != 0)
    return rc;

  if (active == test) return sstest::cmd_test(cfg, std::cout, std::cerr);
  if (active == paired) return sstest::cmd_paired(cfg, std::cout, std::cerr);
  if (active == simulate) return sstest::cmd_simulate(cfg, std::cout, std::cerr);
  return sstest::cmd_independence(cfg, std::cout, std::cerr);
}
