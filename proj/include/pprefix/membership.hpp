#pragma once

// Exact tests for L(x) <= X^{eps - 1} and related power comparisons with a
// rational exponent.

#include <cmath>
#include <string>

#include "pprefix/error.hpp"
#include "pprefix/exact.hpp"

namespace pprefix {

/// Best rational approximation with denominator <= max_den; exact for short
/// decimals such as 0.15 = 3/20.
inline Rational rational_from_double(double v, long max_den = 100000) {
  if (!std::isfinite(v)) fail(ErrorKind::kConfig, "non-finite parameter");
  const bool neg = v < 0;
  double x = std::fabs(v);
  long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  for (int k = 0; k < 64; ++k) {
    double a = std::floor(x);
    if (a > 1e12) break;
    long ai = static_cast<long>(a);
    long p2 = ai * p1 + p0, q2 = ai * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    double frac = x - a;
    if (frac < 1e-12 || std::fabs(static_cast<double>(p1) / static_cast<double>(q1) - std::fabs(v)) < 1e-15) break;
    x = 1.0 / frac;
  }
  Rational r(neg ? -p1 : p1, q1);
  r.canonicalize();
  return r;
}

inline Rational rational_pow(const Rational& b, unsigned long e) {
  Integer n, d;
  mpz_pow_ui(n.get_mpz_t(), b.get_num_mpz_t(), e);
  mpz_pow_ui(d.get_mpz_t(), b.get_den_mpz_t(), e);
  Rational r(n, d);
  r.canonicalize();
  return r;
}

/// Three-valued outcome of comparing an interval against a threshold.
enum class Decision { kYes, kNo, kUndecided };

/// Is l <= X^{eps - 1} for every l in `L`? Decided with eps = a/b as
/// l^b X^{b - a} <= 1.
inline Decision member_decision(const RationalInterval& L, const Integer& X, const Rational& eps) {
  if (X < 1) fail(ErrorKind::kPrecondition, "membership: norm must be >= 1");
  const unsigned long b = eps.get_den().get_ui();
  const Integer a = eps.get_num();
  Integer e = Integer(b) - a;  // exponent of X
  // Logs carry a relative error near 1e-15; decide there when the margin allows.
  if (L.lo > 0) {
    const double lx = e.get_d() * log_abs(X);
    const double hi = double(b) * log_abs(L.hi) + lx, lo = double(b) * log_abs(L.lo) + lx;
    const double slack = 1e-9 * (double(b) * std::fabs(log_abs(L.lo)) + std::fabs(lx) + 1);
    if (hi < -slack) return Decision::kYes;
    if (lo > slack) return Decision::kNo;
  }
  Rational xe = 1;
  if (e >= 0) {
    Integer t;
    mpz_pow_ui(t.get_mpz_t(), X.get_mpz_t(), e.get_ui());
    xe = Rational(t);
  } else {
    Integer t;
    Integer ne = -e;
    mpz_pow_ui(t.get_mpz_t(), X.get_mpz_t(), ne.get_ui());
    xe = Rational(Integer(1), t);
  }
  if (rational_pow(L.hi, b) * xe <= 1) return Decision::kYes;
  if (rational_pow(L.lo, b) * xe > 1) return Decision::kNo;
  return Decision::kUndecided;
}

/// x in A_eps, refining xi until decided.
inline bool in_A(const Triple& x, RealEnclosure& xi, const Rational& eps,
                 std::size_t max_terms = kRefinementTerms) {
  if (eps <= 0 || eps >= 1) fail(ErrorKind::kPrecondition, "A_eps membership needs 0 < eps < 1");
  const Integer X = x.norm();
  const std::size_t limit = xi.index() + max_terms;
  do {
    Decision d = member_decision(eval_L(x, xi), X, eps);
    if (d != Decision::kUndecided) return d == Decision::kYes;
  } while (xi.refine(limit));
  fail(ErrorKind::kRefinementCap, "A_eps membership undecided within the refinement cap");
}

/// Is lhs^b <= rhs^a for kappa = a/b, i.e. lhs <= rhs^kappa (positive integers)?
inline bool le_power(const Integer& lhs, const Integer& rhs, const Rational& kappa) {
  Integer l, r;
  mpz_pow_ui(l.get_mpz_t(), lhs.get_mpz_t(), kappa.get_den().get_ui());
  mpz_pow_ui(r.get_mpz_t(), rhs.get_mpz_t(), kappa.get_num().get_ui());
  return l <= r;
}

}  // namespace pprefix
