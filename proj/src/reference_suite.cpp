#include "nquant/reference_suite.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "nquant/distribution.hpp"
#include "nquant/interval_stats.hpp"
#include "nquant/inverse_design.hpp"
#include "nquant/solver_tail.hpp"

namespace nquant {

std::string to_string(FixtureStatus status) {
  switch (status) {
    case FixtureStatus::Pass:
      return "PASS";
    case FixtureStatus::Fail:
      return "FAIL";
    case FixtureStatus::Skipped:
      return "SKIPPED";
  }
  return "?";
}

bool SuiteReport::all_pass() const { return count(FixtureStatus::Fail) == 0; }

std::size_t SuiteReport::count(FixtureStatus status) const {
  return static_cast<std::size_t>(std::count_if(fixtures.begin(), fixtures.end(),
                                                [&](const FixtureOutcome& f) { return f.status == status; }));
}

bool matches_quoted(const Scalar& value, std::string_view quoted) {
  std::string_view mantissa = quoted.substr(0, quoted.find_first_of("eE"));
  long exponent = 0;
  if (mantissa.size() < quoted.size()) exponent = std::stol(std::string(quoted.substr(mantissa.size() + 1)));
  const auto dot = mantissa.find('.');
  const long decimals = dot == std::string_view::npos ? 0 : static_cast<long>(mantissa.size() - dot - 1);

  const Rational target = parse_rational(quoted);
  Integer ten_power;
  const long place = exponent - decimals;
  mpz_ui_pow_ui(ten_power.get_mpz_t(), 10, static_cast<unsigned long>(place < 0 ? -place : place));
  const Rational half_unit = place < 0 ? Rational(Integer(1), Integer(2 * ten_power)) : Rational(ten_power) / 2;

  if (value.is_exact()) return abs(value.rational() - target) <= half_unit;
  const Bits bits = value.real().precision();
  return abs(value.real() - Real(target, bits)) <= Real(half_unit, bits);
}

namespace {

using Cuts = std::vector<Index>;

std::string cuts_text(const Cuts& cuts) {
  std::ostringstream out;
  out << "cuts [";
  for (std::size_t i = 0; i < cuts.size(); ++i) out << (i ? "," : "") << cuts[i];
  out << "]";
  return out.str();
}

std::string points_text(const std::vector<Scalar>& points) {
  std::string s = "{";
  for (std::size_t i = 0; i < points.size(); ++i) s += (i ? ", " : "") + points[i].to_string();
  return s + "}";
}

bool has_optimum(const QuantizationResult& r, const Cuts& cuts) {
  return std::any_of(r.optima.begin(), r.optima.end(), [&](const Codebook& cb) { return cb.cuts == cuts; });
}

class Suite {
 public:
  void run(const std::string& id, const std::function<FixtureOutcome()>& body) {
    FixtureOutcome out;
    try {
      out = body();
    } catch (const std::exception& e) {
      out.status = FixtureStatus::Fail;
      out.computed = std::string("error: ") + e.what();
    }
    out.id = id;
    report.fixtures.push_back(std::move(out));
  }

  static FixtureOutcome outcome(std::string expected, std::string computed, bool ok) {
    return {"", std::move(expected), std::move(computed), ok ? FixtureStatus::Pass : FixtureStatus::Fail, ""};
  }

  SuiteReport report;
};

std::vector<Scalar> ints(std::initializer_list<long> v) {
  std::vector<Scalar> out;
  for (long x : v) out.emplace_back(x);
  return out;
}

void uniform_fixtures(Suite& suite) {
  std::vector<Scalar> points = ints({1, 2, 3, 4, 5, 6});
  std::vector<Scalar> masses(6, Scalar(Rational(1, 6)));
  const DiscreteDistribution dist = DiscreteDistribution::finite(points, masses);
  SolveOptions all;
  all.mode = SolveMode::All;
  auto results = solve_sweep(dist, 1, 6, all);

  const std::vector<std::vector<std::string>> expected = {
      {"7/2"}, {"2", "5"}, {"3/2", "7/2", "11/2"}, {"3/2", "7/2", "5", "6"}, {"3/2", "3", "4", "5", "6"},
      {"1", "2", "3", "4", "5", "6"}};
  for (Index n = 1; n <= 6; ++n) {
    suite.run("uniform{1..6} alpha_" + std::to_string(n), [&] {
      std::vector<Scalar> want;
      for (const auto& s : expected[static_cast<std::size_t>(n - 1)]) want.push_back(Scalar::parse(s));
      const QuantizationResult& r = results[static_cast<std::size_t>(n - 1)];
      bool found = std::any_of(r.optima.begin(), r.optima.end(),
                               [&](const Codebook& cb) { return cb.points() == want; });
      return Suite::outcome(points_text(want) + " optimal",
                            points_text(r.optima.front().points()) + ", " + r.num_optima.get_str() + " optima",
                            found);
    });
  }
  suite.run("uniform{1..6} five optimal 5-sets", [&] {
    const QuantizationResult& r = results[4];
    std::set<Cuts> got;
    for (const Codebook& cb : r.optima) got.insert(cb.cuts);
    std::set<Cuts> want = {{1, 2, 3, 4}, {1, 2, 3, 5}, {1, 2, 4, 5}, {1, 3, 4, 5}, {2, 3, 4, 5}};
    return Suite::outcome("5", r.num_optima.get_str(), r.num_optima == 5 && got == want);
  });
}

struct LevelFixture {
  Index n;
  const char* value;
  Cuts cuts;
};

void truncated_fixtures(Suite& suite, const Rational& x, const char* label, const std::vector<LevelFixture>& rows) {
  const DiscreteDistribution dist = DiscreteDistribution::geometric_truncated(6, x);
  SolveOptions all;
  all.mode = SolveMode::All;
  auto results = solve_sweep(dist, 1, 6, all);
  for (const LevelFixture& f : rows) {
    suite.run(std::string(label) + " V_" + std::to_string(f.n), [&] {
      const QuantizationResult& r = results[static_cast<std::size_t>(f.n - 1)];
      const bool ok = r.distortion == Scalar::parse(f.value) && r.num_optima == 1 && has_optimum(r, f.cuts);
      return Suite::outcome(std::string(f.value) + ", " + cuts_text(f.cuts),
                            r.distortion.to_string() + ", " + cuts_text(r.optima.front().cuts), ok);
    });
  }
}

void reciprocal_fixtures(Suite& suite, Bits precision) {
  const DiscreteDistribution dist = DiscreteDistribution::dyadic_reciprocal();
  suite.run("reciprocal Av[1,inf) = log 2", [&] {
    PrefixSumCache stats(dist, 8, precision);
    Scalar av = stats.av_tail(1);
    Real log2 = Real::log2(precision);
    Real gap = abs(av.to_real(precision) - log2);
    return Suite::outcome("log 2", av.to_string(), gap <= Real::pow2(16 - static_cast<long>(precision), precision));
  });
  suite.run("reciprocal V_1 = Er[1,inf)", [&] {
    Scalar v = solve_infinite(dist, 1, {SolveMode::Single, precision}).distortion;
    return Suite::outcome("0.101788", v.to_decimal(12), matches_quoted(v, "0.101788"));
  });

  const std::vector<LevelFixture> rows = {{2, "0.0076288597", {1}},
                                          {3, "0.00116437359", {1, 2}},
                                          {4, "0.0002418966477", {1, 2, 3}},
                                          {5, "0.00005991266593", {1, 2, 3, 4}},
                                          {6, "0.00001658886625", {1, 2, 3, 4, 6}}};
  SolveOptions opts;
  opts.mode = SolveMode::All;
  opts.precision = precision;
  auto results = solve_infinite_sweep(dist, 2, 6, opts);
  for (const LevelFixture& f : rows) {
    suite.run("reciprocal V_" + std::to_string(f.n), [&] {
      const QuantizationResult& r = results[static_cast<std::size_t>(f.n - 2)];
      const bool ok = matches_quoted(r.distortion, f.value) && r.num_optima == 1 && has_optimum(r, f.cuts);
      return Suite::outcome(std::string(f.value) + ", " + cuts_text(f.cuts),
                            r.distortion.to_decimal(16) + ", " + cuts_text(r.optima.front().cuts), ok);
    });
  }

  const char* quoted = "1.564317642582409606174128e-100";
  if (precision < 512) {
    FixtureOutcome skipped{"reciprocal V_300", quoted, "", FixtureStatus::Skipped, "precision"};
    suite.report.fixtures.push_back(skipped);
    return;
  }
  suite.run("reciprocal V_300", [&] {
    QuantizationResult r = solve_infinite(dist, 300, {SolveMode::Single, precision});
    Cuts cuts;
    for (Index i = 1; i <= 298; ++i) cuts.push_back(i);
    cuts.push_back(300);
    const bool ok = matches_quoted(r.distortion, quoted) && r.optima.front().cuts == cuts;
    return Suite::outcome(std::string(quoted) + ", pair [299,300] + tail [301,inf)", r.distortion.to_decimal(25),
                          ok);
  });
}

void naturals_fixtures(Suite& suite) {
  const DiscreteDistribution dist = DiscreteDistribution::geometric_naturals();
  suite.run("naturals Av[3,inf) = 4", [&] {
    PrefixSumCache stats(dist, 8);
    Scalar v = stats.av_tail(3);
    return Suite::outcome("4", v.to_string(), v == Scalar(4));
  });
  suite.run("naturals Er[1,inf) = 2", [&] {
    PrefixSumCache stats(dist, 8);
    Scalar v = stats.er_tail(1);
    return Suite::outcome("2", v.to_string(), v == Scalar(2));
  });

  SolveOptions all;
  all.mode = SolveMode::All;
  auto results = solve_infinite_sweep(dist, 1, 10, all);
  const std::vector<std::tuple<Index, const char*, std::set<Cuts>>> rows = {
      {1, "2", {{}}},
      {2, "2/3", {{2}}},
      {3, "1/3", {{1, 3}, {2, 4}}},
      {10, "1/384", {{1, 2, 3, 4, 5, 6, 7, 8, 10}, {1, 2, 3, 4, 5, 6, 7, 9, 11}}}};
  for (const auto& [n, value, cut_sets] : rows) {
    suite.run("naturals V_" + std::to_string(n), [&, n = n, value = value, cut_sets = cut_sets] {
      const QuantizationResult& r = results[static_cast<std::size_t>(n - 1)];
      std::set<Cuts> got;
      for (const Codebook& cb : r.optima) got.insert(cb.cuts);
      const bool ok = r.distortion == Scalar::parse(value) && got == cut_sets &&
                      r.num_optima == Integer(cut_sets.size());
      return Suite::outcome(std::string(value) + ", " + std::to_string(cut_sets.size()) + " optima",
                            r.distortion.to_string() + ", " + r.num_optima.get_str() + " optima", ok);
    });
  }
}

void inverse_fixtures(Suite& suite) {
  const std::vector<std::pair<GeometricFamily, const char*>> rows = {
      {GeometricFamily::truncated(6), "0.6628057756"},
      {GeometricFamily::truncated(7), "0.6654212000"},
      {GeometricFamily::unbounded(), "0.6666666667"}};
  for (const auto& [family, value] : rows) {
    suite.run("inverse threshold " + family.describe(), [&, family = family, value = value] {
      FeasibleInterval interval = feasible_x(family, 10);
      return Suite::outcome(value, interval.threshold_text(), interval.threshold_text() == value);
    });
  }
  suite.run("inverse midpoint threshold m=6", [&] {
    FeasibleInterval interval = feasible_x(GeometricFamily::truncated(6), 10);
    Rational worst(0);
    for (const ConstraintCertificate& c : interval.certificates) {
      if (c.binding && c.name.rfind("midpoint", 0) == 0) worst = std::max(worst, c.bracket_hi);
    }
    std::string got = fixed_decimal(worst, 10);
    return Suite::outcome("0.4812099363", got, got == "0.4812099363");
  });
}

}  // namespace

SuiteReport run_reference_suite(Bits precision) {
  Suite suite;
  uniform_fixtures(suite);
  truncated_fixtures(suite, Rational(1, 2), "x=1/2",
                     {{2, "341/768", {2}}, {3, "65/384", {1, 3}}, {4, "11/192", {1, 2, 4}}, {5, "1/64", {1, 2, 3, 4}}});
  truncated_fixtures(suite, Rational(7, 10), "x=7/10",
                     {{2, "174296997/1000000000", {1}},
                      {3, "4779999/100000000", {1, 2}},
                      {4, "112833/10000000", {1, 2, 3}},
                      {5, "1701/1000000", {1, 2, 3, 4}}});
  suite.run("x=1/2 distortion of {1, 7/3, 19/4}", [] {
    const DiscreteDistribution dist = DiscreteDistribution::geometric_truncated(6, Rational(1, 2));
    std::vector<Scalar> cb{Scalar(1), Scalar(Rational(7, 3)), Scalar(Rational(19, 4))};
    Scalar v = distortion_of(dist, cb);
    return Suite::outcome("65/384", v.to_string(), v == Scalar(Rational(65, 384)));
  });
  reciprocal_fixtures(suite, precision);
  naturals_fixtures(suite);
  inverse_fixtures(suite);
  return std::move(suite.report);
}

}  // namespace nquant
