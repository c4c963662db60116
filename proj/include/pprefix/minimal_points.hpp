#pragma once

// Minimal points of (xi, xi^2): strict record-breakers of L over
// a0 = 1..b_max, with the corner subsequence d_k and its companions e_k.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "pprefix/bracket.hpp"
#include "pprefix/constants.hpp"
#include "pprefix/error.hpp"
#include "pprefix/exact.hpp"
#include "pprefix/membership.hpp"

namespace pprefix {

struct MinimalPointSequence {
  std::vector<Triple> points;             // a_0, a_1, ... by increasing first coordinate
  std::vector<RationalInterval> L;        // enclosures of L(a_i)
  std::vector<Integer> det;               // det2(a_i)
  std::vector<std::size_t> independent;   // I_0: det3(a_{i-1}, a_i, a_{i+1}) != 0
  std::uint64_t bound = 0;
  RealEnclosure xi{Rational(0), Rational(0)};
  std::size_t candidates_checked = 0;     // a0 values that reached exact evaluation

  std::size_t size() const { return points.size(); }
};

/// Nearest integer to m * v for v ranging over an enclosure of xi^2.
inline Integer nearest_square_multiple(const Integer& m, RealEnclosure& xi,
                                      std::size_t max_terms = kRefinementTerms) {
  const std::size_t limit = xi.index() + max_terms;
  do {
    RealEnclosure sq = square_enclosure(xi);
    if (auto r = nearest_integer(m, sq)) return *r;
  } while (xi.refine(limit));
  fail(ErrorKind::kRefinementCap, "nearest integer to a0 xi^2 undecided");
}

namespace detail {

/// a0 values in [lo, hi] that may break the running record. Works on a
/// double image of xi with an explicit error bound, so it never drops a
/// true record; survivors are settled exactly afterwards.
inline std::vector<std::uint64_t> scan_range(std::uint64_t lo, std::uint64_t hi, double xd, double xi_err) {
  std::vector<std::uint64_t> keep;
  const double x2 = xd * xd;
  const double scale = 1.0 + std::fabs(xd) + x2;
  double best = std::numeric_limits<double>::infinity();
  double best_err = 0;
  for (std::uint64_t a0 = lo; a0 <= hi; ++a0) {
    const double a = static_cast<double>(a0);
    double f1 = a * xd, f2 = a * x2;
    double l = std::max(std::fabs(f1 - std::nearbyint(f1)), std::fabs(f2 - std::nearbyint(f2)));
    double err = a * (1e-15 * scale + xi_err * (1.0 + 2.0 * std::fabs(xd)));
    if (l - err <= best + best_err) keep.push_back(a0);
    if (l < best) {
      best = l;
      best_err = err;
    }
  }
  return keep;
}

}  // namespace detail

/// Scans a0 = 1..b_max with the candidate (a0, nearest(a0 xi), nearest(a0 xi^2))
/// and keeps strict records in L (decided exactly). The range is split
/// across `workers` threads; the merge runs in a0 order, so the output does
/// not depend on the worker count.
inline MinimalPointSequence minimal_points(const ContinuedFraction& cf, std::uint64_t b_max,
                                           unsigned workers = 1) {
  if (b_max == 0) fail(ErrorKind::kPrecondition, "minimal_points: b_max must be >= 1");
  if (cf.is_finite()) fail(ErrorKind::kPrecondition, "minimal_points: xi must be irrational");
  MinimalPointSequence seq;
  seq.bound = b_max;
  auto stream = std::make_shared<ConvergentStream>(cf);
  seq.xi = RealEnclosure(stream, 0);
  seq.xi.refine_to(Rational(Integer(1), Integer(b_max) * b_max * b_max * 1024));

  const double xd = seq.xi.midpoint().get_d();
  const double xi_err = seq.xi.width().get_d() + 1e-300;
  const double m = std::max({1.0, std::fabs(xd), xd * xd});
  if (static_cast<double>(b_max) * m > 1e15) {
    fail(ErrorKind::kPrecondition, "minimal_points: b_max too large for the double prefilter");
  }

  workers = std::max(1u, workers);
  std::vector<std::vector<std::uint64_t>> parts(workers);
  {
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (b_max + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::uint64_t lo = 1 + w * chunk;
      const std::uint64_t hi = std::min<std::uint64_t>(b_max, lo + chunk - 1);
      if (lo > hi) continue;
      if (workers == 1) {
        parts[w] = detail::scan_range(lo, hi, xd, xi_err);
      } else {
        pool.emplace_back([&parts, w, lo, hi, xd, xi_err] { parts[w] = detail::scan_range(lo, hi, xd, xi_err); });
      }
    }
    for (auto& t : pool) t.join();
  }

  std::optional<Triple> best;
  for (const auto& part : parts) {
    for (std::uint64_t a0v : part) {
      ++seq.candidates_checked;
      Integer a0(static_cast<unsigned long>(a0v));
      Integer a1 = nearest_integer_refined(a0, seq.xi);
      Integer a2 = nearest_square_multiple(a0, seq.xi);
      Triple c{a0, a1, a2};
      bool record = true;
      if (best) {
        try {
          record = L_less(c, *best, seq.xi);
        } catch (const Error& e) {
          // only an exact tie survives the cap, which needs a quadratic xi
          fail(ErrorKind::kRefinementCap, "minimal_points: L tie at a0 = " + a0.get_str() +
                                              " (xi quadratic?); records are ambiguous");
        }
      }
      if (!record) continue;
      RationalInterval l = eval_L(c, seq.xi);
      if (l.lo > 1) continue;
      best = c;
      seq.points.push_back(c);
    }
  }
  for (const auto& p : seq.points) {
    seq.L.push_back(eval_L(p, seq.xi));
    seq.det.push_back(det2(p));
  }
  for (std::size_t i = 1; i + 1 < seq.points.size(); ++i) {
    if (det3(seq.points[i - 1], seq.points[i], seq.points[i + 1]) != 0) seq.independent.push_back(i);
  }
  return seq;
}

/// Structural checks on a scan; returns one line per violation.
inline std::vector<std::string> check_minimal_invariants(MinimalPointSequence& seq) {
  std::vector<std::string> bad;
  const auto& a = seq.points;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].x0 < 1) bad.push_back("a_" + std::to_string(i) + " has a0 < 1");
    if (!is_primitive(a[i])) bad.push_back("a_" + std::to_string(i) + " not primitive");
    if (i > 0) {
      if (!L_less(a[i], a[i - 1], seq.xi)) bad.push_back("L not decreasing at " + std::to_string(i));
      if (a[i].x0 <= a[i - 1].x0) bad.push_back("a0 not increasing at " + std::to_string(i));
      if (seq.L[i - 1].hi < Rational(1, 2) && a[i].norm() <= a[i - 1].norm()) {
        bad.push_back("norm not increasing at " + std::to_string(i));
      }
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (is_collinear(a[i], a[j])) bad.push_back("a_" + std::to_string(j) + ", a_" + std::to_string(i) + " collinear");
    }
  }
  return bad;
}

/// d_k with its companion e_k, the next point of A_eps2 after d_k.
struct DEPair {
  std::size_t k = 0;
  std::size_t d_index = 0;               // index into the scan
  std::size_t e_index = 0;
  std::optional<std::size_t> next_d_index;
  bool ordered = true;                   // D_k < E_k <= D_{k+1} when d_{k+1} is known
};

struct DESelection {
  std::vector<std::size_t> in_A;         // scan indices of points in A_eps2
  std::vector<DEPair> pairs;
  std::vector<std::string> warnings;
};

/// Pairs each corner d_k = a_{i_k} with its successor inside A_eps2.
/// A corner outside A_eps2 at k >= grace raises d-not-in-A.
inline DESelection select_e_points(MinimalPointSequence& seq, double eps2, std::size_t grace = 0) {
  if (!(eps2 > 0 && eps2 < 1)) fail(ErrorKind::kConfig, "eps2 must lie in (0, 1)");
  const Rational e = rational_from_double(eps2);
  DESelection out;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (in_A(seq.points[i], seq.xi, e)) out.in_A.push_back(i);
  }
  const auto& I0 = seq.independent;
  for (std::size_t k = 0; k < I0.size(); ++k) {
    auto it = std::find(out.in_A.begin(), out.in_A.end(), I0[k]);
    if (it == out.in_A.end()) {
      if (k >= grace) fail(ErrorKind::kAssertion, "d-not-in-A: d_" + std::to_string(k) + " outside A_eps2");
      out.warnings.push_back("d_" + std::to_string(k) + " outside A_eps2 (below grace)");
      continue;
    }
    if (it + 1 == out.in_A.end()) {
      out.warnings.push_back("d_" + std::to_string(k) + " has no successor in A_eps2 within the scan");
      continue;
    }
    DEPair p;
    p.k = k;
    p.d_index = I0[k];
    p.e_index = *(it + 1);
    const Integer D = seq.points[p.d_index].norm(), E = seq.points[p.e_index].norm();
    p.ordered = D < E;
    if (k + 1 < I0.size()) {
      p.next_d_index = I0[k + 1];
      p.ordered = p.ordered && E <= seq.points[I0[k + 1]].norm();
    }
    out.pairs.push_back(p);
  }
  return out;
}

/// Explicit-constant checks at one scan point.
struct ConstantCheck {
  std::size_t i = 0;
  bool det_bound = true;       // |det a_i| <= (2 + |xi|) A_i L(a_i)
  bool det_floor = true;       // A_i L(a_i) >= 1 / (2 + |xi|) when det a_i != 0
  double floor_ratio = 0;      // A_i L(a_i) (2 + |xi|), >= 1 expected
  double det_ratio = 0;        // |det| / ((2 + |xi|) A L), <= 1 expected
};

inline std::vector<ConstantCheck> constant_checks(const MinimalPointSequence& seq) {
  std::vector<ConstantCheck> out;
  const Rational s = seq.xi.abs_upper();
  for (std::size_t i = 0; i < seq.size(); ++i) {
    ConstantCheck c;
    c.i = i;
    const Rational A(seq.points[i].norm());
    const Integer d = abs(seq.det[i]);
    Rational upper = constants::det_bound(s) * A * seq.L[i].hi;
    c.det_bound = Rational(d) <= upper;
    c.det_ratio = upper > 0 ? Rational(Rational(d) / upper).get_d() : 0.0;
    if (d != 0) {
      // The lower end of L matters here; use the lower bound of |xi| too.
      Rational s_lo = abs(seq.xi.lo()) < abs(seq.xi.hi()) ? abs(seq.xi.lo()) : abs(seq.xi.hi());
      Rational lower = A * seq.L[i].lo;
      c.det_floor = lower >= constants::det_nonzero_floor(s);
      c.floor_ratio = Rational(lower * (2 + s_lo)).get_d();
    }
    out.push_back(c);
  }
  return out;
}

/// Height data for consecutive minimal points and for the planes V_k.
struct HeightRow {
  std::size_t i = 0;             // pair (a_i, a_{i+1})
  Integer height;
  Integer index;                 // wedge content; 1 when the pair is a basis
  RationalInterval ratio;        // A_{i+1} L(a_i) / H
  bool ratio_ok = true;          // inside [1/(2 C7), 2 C7]
};

struct PlaneRow {
  std::size_t k = 0;
  Integer height;                // H(V_k)
  double log_ratio_next = 0;     // log H / log D_{k+1}
  double log_ratio_this = 0;     // log H / log D_k
  bool lower_next_ok = true;     // >= 2 - alpha - slack
  bool lower_this_ok = true;     // >= 1/alpha - slack
};

struct HeightDiagnostics {
  std::vector<HeightRow> pairs;
  std::vector<PlaneRow> planes;
  Rational ratio_lo, ratio_hi;
};

inline HeightDiagnostics height_diagnostics(const MinimalPointSequence& seq, double alpha, double slack = 0.1) {
  HeightDiagnostics out;
  const Rational s = seq.xi.abs_upper();
  out.ratio_lo = constants::height_ratio_lower(s);
  out.ratio_hi = constants::height_ratio_upper(s);
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
    PlaneModule pm = height_of_plane(seq.points[i], seq.points[i + 1]);
    HeightRow r;
    r.i = i;
    r.height = pm.height;
    r.index = pm.index;
    const Rational A(seq.points[i + 1].norm());
    const Rational H(pm.height);
    r.ratio = {A * seq.L[i].lo / H, A * seq.L[i].hi / H};
    r.ratio_ok = r.ratio.lo >= out.ratio_lo && r.ratio.hi <= out.ratio_hi;
    out.pairs.push_back(r);
  }
  const auto& I0 = seq.independent;
  for (std::size_t k = 0; k + 1 < I0.size(); ++k) {
    const std::size_t i = I0[k];
    PlaneRow p;
    p.k = k;
    p.height = height_of_plane(seq.points[i], seq.points[i + 1]).height;
    const double lh = log_abs(p.height);
    const double ld = log_abs(seq.points[i].norm());
    const double ln = log_abs(seq.points[I0[k + 1]].norm());
    p.log_ratio_this = ld > 0 ? lh / ld : 0;
    p.log_ratio_next = ln > 0 ? lh / ln : 0;
    p.lower_next_ok = p.log_ratio_next >= 2 - alpha - slack;
    p.lower_this_ok = p.log_ratio_this >= 1 / alpha - slack;
    out.planes.push_back(p);
  }
  return out;
}

/// x_i = a_i + a_{i-1} for corners i.
struct SumPointRow {
  std::size_t i = 0;
  Triple x;
  bool primitive = false;
  bool collinear_to_minimal = false;   // expected false
  bool norm_chain = false;             // a_{i,0} < x_0 < 2 a_{i,0} < a_{i+1,0}
  bool L_bound = false;                // L_hi(x) <= 2 L_hi(a_{i-1})
  double membership_exponent = 0;      // 1 + log L(x) / log X
};

inline std::vector<SumPointRow> sum_point_check(const MinimalPointSequence& seq) {
  std::vector<SumPointRow> out;
  for (std::size_t i : seq.independent) {
    SumPointRow r;
    r.i = i;
    r.x = seq.points[i] + seq.points[i - 1];
    r.primitive = is_primitive(r.x);
    for (const auto& a : seq.points) r.collinear_to_minimal = r.collinear_to_minimal || is_collinear(a, r.x);
    const Integer& ai = seq.points[i].x0;
    r.norm_chain = ai < r.x.x0 && r.x.x0 < 2 * ai && i + 1 < seq.size() && 2 * ai < seq.points[i + 1].x0;
    RationalInterval lx = eval_L(r.x, seq.xi);
    r.L_bound = lx.hi <= 2 * seq.L[i - 1].hi;
    const double lX = log_abs(r.x.norm());
    r.membership_exponent = lX > 0 ? 1 + log_abs(Rational(lx.midpoint())) / lX : 0;
    out.push_back(r);
  }
  return out;
}

}  // namespace pprefix
