// Command-line surface: run instrumented iterations, evaluate certificate
// tables, audit the catalog, and estimate empirical moduli.
//
// Exit codes: 0 ok, 1 audit failure, 2 usage or parse error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fejer/catalog.hpp"
#include "fejer/serialize.hpp"

namespace {

using fejer::json;

fejer::ProblemInstance load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open problem file: " + path);
  }
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("problem file " + path + ": " + e.what());
  }
  try {
    return fejer::build_problem(cfg);
  } catch (const json::exception& e) {
    throw std::invalid_argument("problem file " + path + ": " + e.what());
  }
}

void write_output(const std::string& out_path, const std::string& data) {
  if (out_path.empty()) {
    std::cout << data;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::invalid_argument("cannot write: " + out_path);
  out << data;
}

std::string format_g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int cmd_run(const std::string& problem_path, std::optional<std::int64_t> steps,
            const std::string& format, const std::string& out_path) {
  const fejer::ProblemInstance p = load_problem(problem_path);
  const fejer::Trace trace = fejer::run_recipe_with_metadata(p, steps);
  if (format == "csv") {
    std::ostringstream os;
    trace.write_csv(os);
    write_output(out_path, os.str());
  } else {
    write_output(out_path, fejer::to_json(trace).dump(2) + "\n");
  }
  const fejer::TraceRecord& last = trace.back();
  std::cerr << p.name << ": steps=" << last.n
            << " final_residual=" << format_g17(last.residual)
            << " final_dist=" << format_g17(last.dist) << "\n";
  return 0;
}

int cmd_certify(const std::string& problem_path,
                const std::vector<double>& eps_grid, const std::string& format,
                const std::string& out_path) {
  const fejer::ProblemInstance p = load_problem(problem_path);
  if (!p.modulus) throw std::invalid_argument(p.name + ": no modulus bundled");
  if (!p.rate) throw std::invalid_argument(p.name + ": no rate bundled");
  const fejer::RateFn dist_idx = fejer::dist_rate(*p.rate, *p.modulus);
  const fejer::RateFn cauchy_idx = fejer::cauchy_modulus(*p.rate, *p.modulus);
  std::optional<std::int64_t> termination;
  if (p.eps_star) {
    termination = (p.eps_star_uses_modulus && p.modulus)
                      ? fejer::finite_termination_index(*p.rate, *p.modulus,
                                                        *p.eps_star)
                      : (*p.rate)(*p.eps_star);
  }

  if (format == "csv") {
    std::ostringstream os;
    os << "eps,dist_index,cauchy_index,termination_index\n";
    for (double eps : eps_grid) {
      os << format_g17(eps) << ',' << dist_idx(eps) << ',' << cauchy_idx(eps)
         << ',';
      if (termination) os << *termination;
      os << "\n";
    }
    write_output(out_path, os.str());
  } else {
    json rows = json::array();
    for (double eps : eps_grid) {
      rows.push_back({{"eps", eps},
                      {"dist_index", dist_idx(eps)},
                      {"cauchy_index", cauchy_idx(eps)}});
    }
    json out{{"instance", p.name}, {"table", rows}};
    out["termination_index"] =
        termination ? json(*termination) : json(nullptr);
    write_output(out_path, out.dump(2) + "\n");
  }
  return 0;
}

int cmd_verify(const std::vector<std::string>& problem_paths,
               const fejer::AuditParams& params, const std::string& fault_name,
               const std::string& out_path) {
  const fejer::FaultInjection fault = fejer::fault_from_string(fault_name);
  std::vector<fejer::ProblemInstance> catalog;
  if (problem_paths.empty()) {
    catalog = fejer::serialized_catalog();
  } else {
    for (const std::string& path : problem_paths) {
      catalog.push_back(load_problem(path));
    }
  }
  const std::vector<fejer::AuditReport> reports =
      fejer::run_full_audit(catalog, params.seed, fault, params);
  write_output(out_path, fejer::to_json(reports).dump(2) + "\n");
  int failures = 0;
  for (const fejer::AuditReport& r : reports) {
    if (!r.pass) {
      ++failures;
      std::cerr << "FAIL " << r.check << " violation "
                << format_g17(r.worst_violation) << " (" << r.witness << ")\n";
    }
  }
  std::cerr << reports.size() - failures << "/" << reports.size()
            << " checks passed\n";
  return failures == 0 ? 0 : 1;
}

int cmd_estimate_modulus(const std::string& problem_path,
                         const std::vector<double>& eps_grid, int samples,
                         std::uint64_t seed, const std::string& format,
                         const std::string& out_path) {
  const fejer::ProblemInstance p = load_problem(problem_path);
  const double radius =
      p.modulus_context ? p.modulus_context->radius : p.bound_b;
  const fejer::Modulus m = fejer::estimate_modulus_empirical(
      p.residual, p.zero_distance,
      fejer::ClosedBall(p.reference_zero, radius), eps_grid, samples, seed,
      p.domain);
  std::vector<double> grid = eps_grid;
  std::sort(grid.begin(), grid.end());
  if (format == "csv") {
    std::ostringstream os;
    os << "eps,delta\n";
    for (double eps : grid) {
      os << format_g17(eps) << ',' << format_g17(m.raw(eps)) << "\n";
    }
    write_output(out_path, os.str());
  } else {
    json out{{"instance", p.name}, {"modulus", fejer::to_json(m)}};
    write_output(out_path, out.dump(2) + "\n");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified rates for Fejér-monotone iterations"};
  app.require_subcommand(1);

  std::string problem_path, out_path, format = "csv", fault_name;
  std::vector<std::string> problem_paths;
  std::vector<double> eps_grid{2.0, 1.0, 0.5, 0.2, 0.1, 0.05};
  int samples = 2000;
  std::uint64_t seed = 0;
  double eta = fejer::kDefaultEta;
  std::int64_t steps_value = -1;

  CLI::App* run = app.add_subcommand("run", "run a problem's iteration");
  run->add_option("--problem", problem_path, "problem config file")->required();
  run->add_option("--steps", steps_value, "trace length (default per config)");
  run->add_option("--format", format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  run->add_option("--out", out_path, "output path (default stdout)");

  CLI::App* certify =
      app.add_subcommand("certify", "certified index table for a problem");
  certify->add_option("--problem", problem_path, "problem config file")
      ->required();
  certify->add_option("--eps", eps_grid, "epsilon grid");
  certify->add_option("--format", format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  certify->add_option("--out", out_path, "output path (default stdout)");

  CLI::App* verify = app.add_subcommand(
      "verify", "audit certificates and inequalities (default catalog)");
  verify->add_option("--problem", problem_paths,
                     "problem config files (default: built-in catalog)");
  verify->add_option("--eps", eps_grid, "epsilon grid");
  verify->add_option("--samples", samples, "samples per ball");
  verify->add_option("--seed", seed, "PRNG seed");
  verify->add_option("--eta", eta, "comparison slack");
  verify->add_option("--inject-fault", fault_name,
                     "named fault fixture (audit must then fail)");
  verify->add_option("--out", out_path, "report path (default stdout)");

  CLI::App* estimate = app.add_subcommand(
      "estimate-modulus", "empirical modulus table for a problem");
  estimate->add_option("--problem", problem_path, "problem config file")
      ->required();
  estimate->add_option("--eps", eps_grid, "epsilon grid");
  estimate->add_option("--samples", samples, "samples in the ball");
  estimate->add_option("--seed", seed, "PRNG seed");
  estimate->add_option("--format", format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  estimate->add_option("--out", out_path, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (run->parsed()) {
      std::optional<std::int64_t> steps;
      if (steps_value >= 0) steps = steps_value;
      return cmd_run(problem_path, steps, format, out_path);
    }
    if (certify->parsed()) {
      return cmd_certify(problem_path, eps_grid, format, out_path);
    }
    if (verify->parsed()) {
      fejer::AuditParams params;
      params.eps_grid = eps_grid;
      params.samples = samples;
      params.seed = seed;
      params.eta = eta;
      return cmd_verify(problem_paths, params, fault_name, out_path);
    }
    if (estimate->parsed()) {
      if (samples <= 0) {
        throw std::invalid_argument("estimate-modulus: --samples must be > 0");
      }
      return cmd_estimate_modulus(problem_path, eps_grid, samples, seed,
                                  format, out_path);
    }
  } catch (const fejer::HorizonExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
