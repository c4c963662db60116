#pragma once

// Finite-horizon exponent estimates and the related checks.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "pprefix/bracket.hpp"
#include "pprefix/error.hpp"
#include "pprefix/exact.hpp"
#include "pprefix/membership.hpp"
#include "pprefix/word.hpp"

namespace pprefix {

struct TraceRow {
  std::size_t index = 0;   // position in the input list
  double norm_log = 0;     // log U_i
  double L_log = 0;        // log L(u_i), 0 when unused
  double ratio = 0;
};

struct ExponentEstimate {
  double epsilon = 0;
  double value = 0;        // max of the ratio over the window
  double liminf = 0;       // min over the same window
  std::size_t window_begin = 0;  // row positions
  std::size_t window_end = 0;
  std::vector<TraceRow> trace;
};

inline ExponentEstimate summarize_rows(std::vector<TraceRow> rows, std::size_t begin, std::size_t end) {
  if (begin >= end || end > rows.size()) fail(ErrorKind::kInsufficientData, "empty estimation window");
  ExponentEstimate e;
  e.window_begin = begin;
  e.window_end = end;
  e.value = -INFINITY;
  e.liminf = INFINITY;
  for (std::size_t r = begin; r < end; ++r) {
    e.value = std::max(e.value, rows[r].ratio);
    e.liminf = std::min(e.liminf, rows[r].ratio);
  }
  e.trace = std::move(rows);
  return e;
}

/// Tail limsup of log U_{i+1} / (-log L(u_i)) over the points of A_eps,
/// ordered by norm. L is read at the enclosure midpoint once its relative
/// width is below 1e-3; membership itself is decided exactly.
inline ExponentEstimate estimate_beta_eps(const std::vector<Triple>& pts, RealEnclosure& xi, double eps,
                                          double tail_fraction = 0.5) {
  const Rational e = rational_from_double(eps);
  std::vector<Triple> a;
  for (const auto& p : pts) {
    if (p.norm() > 1 && in_A(p, xi, e)) a.push_back(p);
  }
  if (a.size() < 4) {
    fail(ErrorKind::kInsufficientData, "estimate_beta_eps: only " + std::to_string(a.size()) +
                                           " points in A_eps");
  }
  std::vector<TraceRow> rows;
  for (std::size_t i = 0; i + 1 < a.size(); ++i) {
    RationalInterval l = eval_L_relative(a[i], xi, 1e-3);
    TraceRow r;
    r.index = i;
    r.norm_log = log_abs(a[i].norm());
    r.L_log = l.log_mid();
    r.ratio = log_abs(a[i + 1].norm()) / -r.L_log;
    rows.push_back(r);
  }
  const std::size_t begin = tail_begin(rows.size(), tail_fraction);
  auto est = summarize_rows(std::move(rows), begin, a.size() - 1);
  est.epsilon = eps;
  return est;
}

/// (2 - b1)(2 - b1 + (2 - b0) b1).
inline double epsilon_one(double beta1, double beta0) {
  if (!(1 < beta1 && beta1 <= beta0 && beta0 < 2)) {
    fail(ErrorKind::kPrecondition, "epsilon_one: need 1 < beta1 <= beta0 < 2");
  }
  return (2 - beta1) * (2 - beta1 + (2 - beta0) * beta1);
}

/// Tail limsup of log V_{i+1} / log V_i. Norms equal to 1 carry no
/// information and are skipped. With `window` = [first, last] the ratios
/// for i in [first, last) are used instead of the tail. Raises
/// growth-hypothesis-violated if the liminf on the window is <= 1.
inline ExponentEstimate growth_exponent(const std::vector<Integer>& norms,
                                        std::optional<std::pair<std::size_t, std::size_t>> window = std::nullopt,
                                        double tail_fraction = 0.5) {
  std::vector<TraceRow> rows;
  for (std::size_t i = 0; i + 1 < norms.size(); ++i) {
    const double a = log_abs(norms[i]);
    if (!(a > 0)) continue;
    TraceRow r;
    r.index = i;
    r.norm_log = a;
    r.ratio = log_abs(norms[i + 1]) / a;
    rows.push_back(r);
  }
  if (rows.size() < 3) fail(ErrorKind::kInsufficientData, "growth_exponent: need at least 4 norms");
  std::size_t begin = 0, end = rows.size();
  if (window) {
    begin = rows.size();
    end = 0;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].index >= window->first && rows[r].index < window->second) {
        begin = std::min(begin, r);
        end = r + 1;
      }
    }
    if (begin >= end) fail(ErrorKind::kInsufficientData, "growth_exponent: window outside the data");
  } else {
    begin = tail_begin(rows.size(), tail_fraction);
  }
  auto est = summarize_rows(std::move(rows), begin, end);
  if (est.liminf <= 1) {
    fail(ErrorKind::kAssertion, "growth-hypothesis-violated: liminf of log ratios is <= 1");
  }
  return est;
}

/// Rate check on the tail: -log L(u_i) / log U_i within 1 +- tol, and
/// liminf log U_{i+1} / log U_i >= 3 - beta1 - tol.
struct RateCheck {
  bool rate_ok = true;
  bool growth_ok = true;
  double min_rate = INFINITY, max_rate = -INFINITY;
  double growth_liminf = INFINITY;
};

inline RateCheck approximation_rate_check(const std::vector<Triple>& pts, RealEnclosure& xi, double beta1,
                                  double tol = 0.1, double tail_fraction = 0.5) {
  std::vector<Triple> u;
  for (const auto& p : pts) {
    if (p.norm() > 1) u.push_back(p);
  }
  if (u.size() < 4) fail(ErrorKind::kInsufficientData, "approximation_rate_check: too few points");
  RateCheck c;
  const std::size_t begin = tail_begin(u.size(), tail_fraction);
  for (std::size_t i = begin; i < u.size(); ++i) {
    RationalInterval l = eval_L_relative(u[i], xi, 1e-3);
    const double rate = -l.log_mid() / log_abs(u[i].norm());
    c.min_rate = std::min(c.min_rate, rate);
    c.max_rate = std::max(c.max_rate, rate);
    if (i + 1 < u.size()) {
      c.growth_liminf = std::min(c.growth_liminf, log_abs(u[i + 1].norm()) / log_abs(u[i].norm()));
    }
  }
  c.rate_ok = c.min_rate >= 1 - tol && c.max_rate <= 1 + tol;
  c.growth_ok = c.growth_liminf >= 3 - beta1 - tol;
  return c;
}

/// Bracket of three points of A_eps landing in A_eps2.
struct BracketPrecisionResult {
  bool member = false;
  double kappa_measured = 0;   // log Z / log(XY)
  double exponent = 0;         // 1 + log L(u) / log U
};

inline BracketPrecisionResult bracket_precision_check(const Triple& x, const Triple& y, const Triple& z,
                                                      RealEnclosure& xi, double kappa, double eps, double eps2) {
  const Rational k = rational_from_double(kappa), e = rational_from_double(eps), e2 = rational_from_double(eps2);
  if (!(k > 0 && k < 1)) fail(ErrorKind::kPrecondition, "bracket_precision_check: kappa must lie in (0, 1)");
  if (!(e * (1 + k) / (1 - k) < e2 && e2 < 1)) {
    fail(ErrorKind::kPrecondition, "bracket_precision_check: need eps (1 + kappa) / (1 - kappa) < eps2 < 1");
  }
  const Integer X = x.norm(), Y = y.norm(), Z = z.norm();
  if (!(X <= Z && Y <= Z && le_power(Z, Integer(X * Y), k))) {
    fail(ErrorKind::kPrecondition, "bracket_precision_check: need X, Y <= Z <= (XY)^kappa");
  }
  if (det2(x) == 0 || det2(y) == 0 || det2(z) == 0) fail(ErrorKind::kPrecondition, "bracket_precision_check: zero det");
  for (const Triple* t : {&x, &y, &z}) {
    if (!in_A(*t, xi, e)) fail(ErrorKind::kPrecondition, "bracket_precision_check: input outside A_eps");
  }
  Triple u = bracket(x, y, z);
  BracketPrecisionResult r;
  r.member = !u.is_zero() && in_A(u, xi, e2);
  r.kappa_measured = log_abs(Z) / log_abs(Integer(X * Y));
  if (!u.is_zero()) {
    RationalInterval l = eval_L_relative(u, xi, 1e-3);
    r.exponent = 1 + l.log_mid() / log_abs(u.norm());
  }
  return r;
}

}  // namespace pprefix
