#pragma once

// Explicit constants for the approximation estimates. Every constant below
// is a rational function of an upper bound s >= |xi|, so checks stay exact
// once s is taken from the upper end of an enclosure.
//
// Notation: L(x) = max(|x0 xi - x1|, |x0 xi^2 - x2|), X = max |x_j|.

#include "pprefix/triple.hpp"

namespace pprefix::constants {

/// |det(x)| <= (2 + s) X L(x).
///
/// x0 x2 - x1^2 = x0 (x2 - x0 xi^2) - (x1 - x0 xi)(x1 + x0 xi), and
/// |x1 + x0 xi| <= X (1 + s), so |det| <= X L + X (1 + s) L.
inline Rational det_bound(const Rational& s) { return 2 + s; }

/// A L(a) >= 1 / (2 + s) for any a with det(a) != 0: apply det_bound with
/// |det| >= 1.
inline Rational det_nonzero_floor(const Rational& s) { return 1 / (2 + s); }

/// ||x ^ y|| <= C7 (X L(y) + Y L(x)), C7 = 2 + 2 s + s^2.
///
/// Write x1 = x0 xi + a1, x2 = x0 xi^2 + a2 (|a_j| <= L(x)) and likewise b_j
/// for y. The first two wedge coordinates are x0 b_j - y0 a_j, bounded by
/// X L(y) + Y L(x). The third is
///   x0 xi b2 + y0 xi^2 a1 + a1 b2 - x0 xi^2 b1 - y0 xi a2 - a2 b1,
/// bounded by (s + s^2)(X L(y) + Y L(x)) + 2 L(x) L(y), and
/// 2 L(x) L(y) <= X L(y) + Y L(x) whenever L <= norm. The value kept here
/// has one extra unit of s, so it also absorbs the L(x) <= 1 slack.
inline Rational wedge_constant(const Rational& s) { return 2 + 2 * s + s * s; }

/// Constant for the bracket bound u = [x, y, z]:
///   U    <= C9 (X Y L(z) + lambda)
///   L(u) <= C9 lambda
/// with lambda = Z L(x) L(y) + L(z) (X L(y) + Y L(x)) + L(x) L(y) L(z).
///
/// Split M_x = x0 P + E_x with P = v v^T, v = (1, xi), and E_x the error
/// matrix with entries at most L(x). Since v^T J v = 0, P J P = 0, and
/// -M_x J M_z J M_y expands into x0 y0 P J E_z J P (a multiple of P, so it
/// adds to U but not to L(u)) plus terms carrying two or three error
/// factors, one per summand of lambda. Entries of each product are at most
/// k times the matching norm/L factors, k = max((1 + s)^2 m, 4 m) with
/// m = max(1, s^2). For a symmetric integer matrix T,
/// L(T) <= (1 + max(s, s^2)) ||T||.
inline Rational bracket_constant(const Rational& s) {
  Rational s2 = s * s;
  Rational m = s2 > 1 ? s2 : Rational(1);
  Rational a = (1 + s) * (1 + s) * m;
  Rational b = 4 * m;
  Rational k = a > b ? a : b;
  Rational t = s > s2 ? s : s2;
  return k * (1 + t);
}

/// Bounds for the ratio A_{i+1} L(a_i) / H(V) on consecutive minimal points
/// spanning V: [1 / (2 C7), 2 C7]. The lower end follows from the wedge bound
/// with A_i < A_{i+1} and L(a_{i+1}) < L(a_i).
inline Rational height_ratio_lower(const Rational& s) { return 1 / (2 * wedge_constant(s)); }
inline Rational height_ratio_upper(const Rational& s) { return 2 * wedge_constant(s); }

}  // namespace pprefix::constants
