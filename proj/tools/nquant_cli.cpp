// nquant: optimal n-means of discrete 1-D distributions from the command line.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "nquant/errors.hpp"
#include "nquant/inverse_design.hpp"
#include "nquant/reference_suite.hpp"
#include "nquant/solver_tail.hpp"
#include "nquant/spec_io.hpp"

namespace {

constexpr int kExitVerifyFailed = 1;
constexpr int kExitSpecError = 2;
constexpr int kExitSolverError = 3;

struct SolveArgs {
  std::string spec;
  long n = 1;
  bool all = false;
  long precision = nquant::kDefaultPrecision;
  std::string format = "json";
  long horizon_cap = 1L << 16;
};

struct CurveArgs {
  std::string spec;
  long n_min = 1;
  long n_max = 1;
  long precision = nquant::kDefaultPrecision;
  std::string format = "csv";
  long horizon_cap = 1L << 16;
};

struct InverseArgs {
  std::string family = "truncated";
  long m = 6;
  int digits = 10;
  long n_check = 64;
  long verify_n = 0;
};

int report_spec_error(const nquant::SpecError& e) {
  std::cerr << "spec error at " << e.path();
  if (e.line() > 0) std::cerr << " (line " << e.line() << ", column " << e.column() << ")";
  std::cerr << ": " << e.what() << "\n";
  return kExitSpecError;
}

int run_solve(const SolveArgs& a) {
  nquant::DiscreteDistribution dist = nquant::load_distribution_spec(a.spec);
  nquant::SolveOptions opts;
  opts.mode = a.all ? nquant::SolveMode::All : nquant::SolveMode::Single;
  opts.precision = a.precision;
  opts.horizon_cap = a.horizon_cap;
  nquant::QuantizationResult r = nquant::quantize(dist, a.n, opts);
  if (a.format == "table") {
    std::cout << nquant::result_to_table(r);
  } else {
    std::cout << nquant::result_to_json(r) << "\n";
  }
  return 0;
}

int run_curve(const CurveArgs& a) {
  nquant::DiscreteDistribution dist = nquant::load_distribution_spec(a.spec);
  nquant::SolveOptions opts;
  opts.precision = a.precision;
  opts.horizon_cap = a.horizon_cap;
  auto results = nquant::quantize_sweep(dist, a.n_min, a.n_max, opts);
  if (a.format == "json") {
    std::cout << nquant::error_curve_json(results) << "\n";
  } else {
    std::cout << nquant::error_curve_csv(results);
  }
  return 0;
}

int run_inverse(const InverseArgs& a) {
  nquant::GeometricFamily family =
      a.family == "infinite" ? nquant::GeometricFamily::unbounded() : nquant::GeometricFamily::truncated(a.m);
  nquant::FeasibleInterval interval = nquant::feasible_x(family, a.digits, a.n_check);
  std::cout << "family     " << family.describe() << "\n";
  std::cout << "lower      " << interval.lower_text() << "   (smallest feasible " << a.digits << "-digit x)\n";
  std::cout << "threshold  " << interval.threshold_text() << "   (rounded to nearest)\n";
  std::cout << "bracket    [" << nquant::fixed_decimal(interval.bracket_lo, a.digits + 4) << ", "
            << nquant::fixed_decimal(interval.bracket_hi, a.digits + 4) << "]\n";
  std::cout << "feasible   [" << interval.lower_text() << ", 1)\n";
  std::cout << "constraints:\n";
  for (std::size_t i = 0; i < interval.certificates.size(); ++i) {
    const auto& c = interval.certificates[i];
    std::cout << "  " << c.name;
    if (c.n) std::cout << " (n=" << *c.n << ")";
    if (c.binding) {
      std::cout << ": holds from " << nquant::fixed_decimal(c.bracket_hi, a.digits);
    } else {
      std::cout << ": holds on [" << nquant::rational_to_string(interval.search_floor) << ", 1)";
    }
    if (i == interval.binding) std::cout << "  <- binding";
    std::cout << "\n";
  }

  if (a.verify_n <= 0) return 0;
  bool ok = true;
  for (const nquant::Rational& x : nquant::conjecture_samples(interval)) {
    nquant::ConjectureReport rep = nquant::verify_conjecture(family, x, a.verify_n);
    std::cout << "x = " << nquant::fixed_decimal(x, a.digits) << ": "
              << (rep.all_hold() ? "structure optimal for every n" : "fails at n=" + std::to_string(*rep.first_failure()))
              << "\n";
    ok = ok && rep.all_hold();
  }
  return ok ? 0 : kExitVerifyFailed;
}

int run_reference_checks(long precision) {
  nquant::SuiteReport report = nquant::run_reference_suite(precision);
  for (const auto& f : report.fixtures) {
    std::cout << nquant::to_string(f.status);
    if (f.status == nquant::FixtureStatus::Skipped) std::cout << "(" << f.skip_reason << ")";
    std::cout << "  " << f.id << "\n      expected " << f.expected;
    if (!f.computed.empty()) std::cout << "\n      computed " << f.computed;
    std::cout << "\n";
  }
  std::cout << report.count(nquant::FixtureStatus::Pass) << " passed, " << report.count(nquant::FixtureStatus::Fail)
            << " failed, " << report.count(nquant::FixtureStatus::Skipped) << " skipped\n";
  if (!report.all_pass()) {
    std::cerr << "failed fixtures:\n";
    for (const auto& f : report.fixtures) {
      if (f.status == nquant::FixtureStatus::Fail) std::cerr << "  " << f.id << "\n";
    }
    return kExitVerifyFailed;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact optimal n-means quantization of discrete 1-D distributions"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "optimal codebook(s) for n levels");
  solve_cmd->add_option("spec", solve.spec, "distribution spec JSON file")->required();
  solve_cmd->add_option("--n", solve.n, "number of code points")->required()->check(CLI::PositiveNumber);
  solve_cmd->add_flag("--all", solve.all, "enumerate every optimal codebook");
  solve_cmd->add_option("--precision", solve.precision, "floating precision in bits")->check(CLI::Range(16L, 1L << 20));
  solve_cmd->add_option("--format", solve.format, "json or table")->check(CLI::IsMember({"json", "table"}));
  solve_cmd->add_option("--horizon-cap", solve.horizon_cap, "largest prefix for infinite families")
      ->check(CLI::PositiveNumber);

  CurveArgs curve;
  auto* curve_cmd = app.add_subcommand("error-curve", "V_n for a range of n");
  curve_cmd->add_option("spec", curve.spec, "distribution spec JSON file")->required();
  curve_cmd->add_option("--n-min", curve.n_min)->check(CLI::PositiveNumber);
  curve_cmd->add_option("--n-max", curve.n_max)->required()->check(CLI::PositiveNumber);
  curve_cmd->add_option("--precision", curve.precision)->check(CLI::Range(16L, 1L << 20));
  curve_cmd->add_option("--format", curve.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  curve_cmd->add_option("--horizon-cap", curve.horizon_cap)->check(CLI::PositiveNumber);

  InverseArgs inverse;
  auto* inverse_cmd = app.add_subcommand("inverse", "feasible x for the prescribed structure {1, ..., n-1, Av[n, end]}");
  inverse_cmd->add_option("--family", inverse.family)->check(CLI::IsMember({"truncated", "infinite"}));
  inverse_cmd->add_option("--m", inverse.m, "support size of the truncated family")->check(CLI::Range(3L, 4096L));
  inverse_cmd->add_option("--digits", inverse.digits)->check(CLI::Range(1, 60));
  inverse_cmd->add_option("--n-check", inverse.n_check, "levels checked for the infinite family")
      ->check(CLI::Range(3L, 4096L));
  inverse_cmd->add_option("--verify", inverse.verify_n, "also solve n = 1..N at the sample grid");

  long reference_precision = nquant::kDefaultPrecision;
  auto* reference_cmd = app.add_subcommand("verify-reference", "run every reference fixture");
  reference_cmd->add_option("--precision", reference_precision)->check(CLI::Range(16L, 1L << 20));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve_cmd) return run_solve(solve);
    if (*curve_cmd) {
      if (curve.n_min > curve.n_max) {
        std::cerr << "--n-min must not exceed --n-max\n";
        return kExitSpecError;
      }
      return run_curve(curve);
    }
    if (*inverse_cmd) return run_inverse(inverse);
    if (*reference_cmd) return run_reference_checks(reference_precision);
  } catch (const nquant::SpecError& e) {
    return report_spec_error(e);
  } catch (const nquant::QuantError& e) {
    std::cerr << "solver error (" << nquant::to_string(e.code()) << "): " << e.what() << "\n";
    return kExitSolverError;
  }
  return 0;
}
