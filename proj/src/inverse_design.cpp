#include "nquant/inverse_design.hpp"

#include <algorithm>
#include <functional>
#include <string>

#include "nquant/errors.hpp"
#include "nquant/solver_tail.hpp"

namespace nquant {

DiscreteDistribution GeometricFamily::at(const Rational& x) const {
  return infinite ? DiscreteDistribution::geometric_infinite(x) : DiscreteDistribution::geometric_truncated(m, x);
}

std::string GeometricFamily::describe() const {
  return infinite ? std::string("geometric (infinite)") : "geometric truncated at m=" + std::to_string(m);
}

namespace {

Integer pow10(int digits) {
  Integer p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  return p;
}

Rational tail_average(const DiscreteDistribution& dist, Index n) {
  TailMoments t = tail_moments(dist, n);
  return t.first.rational() / t.mass.rational();
}

struct Constraint {
  std::string name;
  std::optional<Index> n;
  std::function<bool(const Rational&)> holds;
};

std::vector<Constraint> constraints_for(const GeometricFamily& family, Index n_check) {
  const Index n_last = family.infinite ? n_check : family.m;
  std::vector<Constraint> out;
  for (Index n = 2; n <= n_last; ++n) {
    out.push_back({"midpoint lower bound", n, [family, n](const Rational& x) {
                     Rational mid = (Rational(n - 1) + tail_average(family.at(x), n)) / 2;
                     return mid >= Rational(n - 1);
                   }});
    out.push_back({"midpoint upper bound", n, [family, n](const Rational& x) {
                     Rational mid = (Rational(n - 1) + tail_average(family.at(x), n)) / 2;
                     return mid <= Rational(n);
                   }});
  }
  if (family.infinite) {
    // Av[n, inf) - (n-1) = 1/x for every n, so the upper bound tends to 1/x <= 2.
    out.push_back({"midpoint upper bound, n -> inf", std::nullopt,
                   [](const Rational& x) { return Rational(1) / x <= Rational(2); }});
  }
  out.push_back({"two-means comparison", 2, [family](const Rational& x) {
                   DiscreteDistribution dist = family.at(x);
                   Atom a = dist.atom(1);
                   Atom b = dist.atom(2);
                   Scalar pair_av = (a.point * a.mass + b.point * b.mass) / (a.mass + b.mass);
                   std::vector<Scalar> prescribed{Scalar(1), Scalar(tail_average(dist, 2))};
                   std::vector<Scalar> rival{pair_av, Scalar(tail_average(dist, 3))};
                   return distortion_of(dist, prescribed) <= distortion_of(dist, rival);
                 }});
  return out;
}

}  // namespace

Rational round_decimal(const Rational& q, int digits, bool up) {
  const Integer scale = pow10(digits);
  Rational scaled = q * scale;
  Integer k;
  if (up) {
    mpz_cdiv_q(k.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
  } else {
    Rational shifted = scaled + Rational(1, 2);
    mpz_fdiv_q(k.get_mpz_t(), shifted.get_num_mpz_t(), shifted.get_den_mpz_t());
  }
  Rational out(k, scale);
  out.canonicalize();
  return out;
}

std::string fixed_decimal(const Rational& q, int digits) {
  Rational scaled = round_decimal(q, digits, false) * pow10(digits);
  Integer k = scaled.get_num();
  const bool negative = k < 0;
  if (negative) k = -k;
  std::string s = k.get_str();
  if (s.size() <= static_cast<std::size_t>(digits)) s.insert(0, static_cast<std::size_t>(digits) + 1 - s.size(), '0');
  if (digits > 0) s.insert(s.size() - static_cast<std::size_t>(digits), ".");
  return negative ? "-" + s : s;
}

std::string FeasibleInterval::lower_text() const { return fixed_decimal(lower, digits); }
std::string FeasibleInterval::threshold_text() const { return fixed_decimal(threshold, digits); }

FeasibleInterval feasible_x(const GeometricFamily& family, int digits, Index n_check) {
  if (digits < 1) throw QuantError(ErrorCode::InvalidArgument, "digits must be at least 1");
  if (!family.infinite && family.m < 3) throw QuantError(ErrorCode::InvalidArgument, "need m >= 3");
  if (family.infinite && n_check < 3) throw QuantError(ErrorCode::InvalidArgument, "need n_check >= 3");

  // Exact V(P; .) for the infinite family walks about 1/(2x) atoms.
  const Rational edge(Integer(1), Integer(1) << (family.infinite ? 10 : 40));
  const Rational resolution(Integer(1), pow10(digits + 4));
  const Rational step(Integer(1), pow10(digits));

  FeasibleInterval out;
  out.digits = digits;
  out.search_floor = edge;
  out.lower = step;
  out.bracket_hi = edge;
  bool any_binding = false;

  for (Constraint& c : constraints_for(family, n_check)) {
    ConstraintCertificate cert{c.name, c.n, false, Rational(0), edge};
    Rational lo = edge;
    Rational hi = Rational(1) - edge;
    if (!c.holds(hi)) {
      throw QuantError(ErrorCode::Infeasible, c.name + " fails for every x in (0, 1) on " + family.describe());
    }
    if (!c.holds(lo)) {
      for (int iter = 0; iter < 400; ++iter) {
        if (hi - lo < resolution && round_decimal(lo, digits, false) == round_decimal(hi, digits, false)) break;
        Rational mid = (lo + hi) / 2;
        (c.holds(mid) ? hi : lo) = mid;
      }
      cert.binding = true;
      cert.bracket_lo = lo;
      cert.bracket_hi = hi;

      Rational feasible = round_decimal(lo, digits, true);
      if (!c.holds(feasible)) feasible += step;
      out.lower = std::max(out.lower, feasible);
      if (!any_binding || hi > out.bracket_hi) {
        out.bracket_lo = lo;
        out.bracket_hi = hi;
        out.binding = out.certificates.size();
      }
      any_binding = true;
    }
    out.certificates.push_back(std::move(cert));
  }
  out.threshold = any_binding ? round_decimal(out.bracket_hi, digits, false) : out.lower;
  return out;
}

bool ConjectureReport::all_hold() const {
  return std::all_of(rows.begin(), rows.end(), [](const ConjectureRow& r) { return r.holds; });
}

std::optional<Index> ConjectureReport::first_failure() const {
  for (const ConjectureRow& r : rows) {
    if (!r.holds) return r.n;
  }
  return std::nullopt;
}

ConjectureReport verify_conjecture(const GeometricFamily& family, const Rational& x, Index n_max) {
  if (x <= 0 || x >= 1) throw QuantError(ErrorCode::InvalidArgument, "x must lie in (0, 1)");
  const DiscreteDistribution dist = family.at(x);
  const Index last = family.infinite ? n_max : std::min(n_max, family.m);

  SolveOptions options;
  options.mode = SolveMode::All;
  options.max_optima = 64;
  ConjectureReport report;
  report.x = x;
  for (const QuantizationResult& r : quantize_sweep(dist, 1, last, options)) {
    ConjectureRow row;
    row.n = r.n;
    row.distortion = r.distortion;
    std::vector<Index> expected;
    for (Index i = 1; i < r.n; ++i) expected.push_back(i);
    row.holds = std::any_of(r.optima.begin(), r.optima.end(),
                            [&](const Codebook& cb) { return cb.cuts == expected; });
    row.unique = row.holds && r.num_optima == 1;
    if (r.n >= 2) {
      Rational mid = (Rational(r.n - 1) + tail_average(dist, r.n)) / 2;
      row.lower_slack = mid - Rational(r.n - 1);
      row.upper_slack = Rational(r.n) - mid;
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::vector<Rational> conjecture_samples(const FeasibleInterval& interval) {
  return {interval.lower, interval.lower + Rational(1, 1000), Rational(7, 10), Rational(9, 10),
          Rational(99, 100)};
}

}  // namespace nquant
