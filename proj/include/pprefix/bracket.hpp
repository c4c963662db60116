#pragma once

// Integer triples as symmetric matrices: determinants, the bracket
// [x, y, z] = -x J z J y, wedges and heights of rank-2 sublattices.

#include <array>
#include <string>

#include "pprefix/error.hpp"
#include "pprefix/triple.hpp"

namespace pprefix {

/// x0 x2 - x1^2.
inline Integer det2(const Triple& x) { return x.x0 * x.x2 - x.x1 * x.x1; }

/// Cofactor expansion of the 3x3 determinant with rows x, y, z.
inline Integer det3_cofactor(const Triple& x, const Triple& y, const Triple& z) {
  return x.x0 * (y.x1 * z.x2 - y.x2 * z.x1) - x.x1 * (y.x0 * z.x2 - y.x2 * z.x0) +
         x.x2 * (y.x0 * z.x1 - y.x1 * z.x0);
}

/// The same determinant as Trace(J M_x J M_z J M_y).
inline Integer det3_trace(const Triple& x, const Triple& y, const Triple& z) {
  const Matrix2 j = Matrix2::J();
  return (j * Matrix2::of(x) * j * Matrix2::of(z) * j * Matrix2::of(y)).trace();
}

/// 3x3 determinant; both evaluations must agree.
inline Integer det3(const Triple& x, const Triple& y, const Triple& z) {
  Integer d = det3_cofactor(x, y, z);
  if (d != det3_trace(x, y, z)) {
    fail(ErrorKind::kAssertion, "det3: cofactor and trace formulas disagree");
  }
  return d;
}

/// M is symmetric iff Trace(J M) = 0.
inline bool symmetric_by_trace(const Matrix2& m) { return (Matrix2::J() * m).trace() == 0; }

/// -M_x J M_z J M_y as a raw matrix; symmetric exactly when x, y, z are dependent.
inline Matrix2 bracket_matrix(const Triple& x, const Triple& y, const Triple& z) {
  const Matrix2 j = Matrix2::J();
  return -(Matrix2::of(x) * j * Matrix2::of(z) * j * Matrix2::of(y));
}

/// [x, y, z] for linearly dependent x, y, z.
inline Triple bracket(const Triple& x, const Triple& y, const Triple& z) {
  if (det3_cofactor(x, y, z) != 0) {
    fail(ErrorKind::kPrecondition, "bracket: arguments are not linearly dependent");
  }
  Matrix2 m = bracket_matrix(x, y, z);
  if (!m.is_symmetric() || !symmetric_by_trace(m)) {
    fail(ErrorKind::kAssertion, "bracket: result is not symmetric");
  }
  return m.as_triple();
}

/// (J M_y)^2 + det(y) Id, which must vanish.
inline bool j_square_identity(const Triple& y) {
  Matrix2 jy = Matrix2::J() * Matrix2::of(y);
  Integer d = det2(y);
  return jy * jy == -d * Matrix2::identity();
}

/// Cross product of the coordinate vectors.
inline Triple wedge(const Triple& x, const Triple& y) {
  return {x.x1 * y.x2 - x.x2 * y.x1, x.x2 * y.x0 - x.x0 * y.x2, x.x0 * y.x1 - x.x1 * y.x0};
}

inline bool is_collinear(const Triple& x, const Triple& y) { return wedge(x, y).is_zero(); }

/// gcd of the coordinates (0 for the zero vector).
inline Integer content(const Triple& x) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), x.x0.get_mpz_t(), x.x1.get_mpz_t());
  mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.x2.get_mpz_t());
  return g;
}

inline bool is_primitive(const Triple& x) { return content(x) == 1; }

/// x / content(x), signed so the first nonzero coordinate is positive.
inline Triple primitive_normalize(const Triple& x) {
  if (x.is_zero()) fail(ErrorKind::kPrecondition, "primitive_normalize: zero vector");
  Integer g = content(x);
  Triple r{x.x0 / g, x.x1 / g, x.x2 / g};
  const Integer& lead = r.x0 != 0 ? r.x0 : (r.x1 != 0 ? r.x1 : r.x2);
  if (lead < 0) r = -r;
  return r;
}

/// Z-basis of the rank-2 lattice {v in Z^3 : <w, v> = 0} for primitive w.
inline std::array<Triple, 2> orthogonal_lattice_basis(const Triple& w) {
  Integer g, u, v;
  mpz_gcdext(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), w.x0.get_mpz_t(), w.x1.get_mpz_t());
  if (g == 0) return {Triple(1, 0, 0), Triple(0, 1, 0)};
  // b1 x b2 = w, so the pair spans the whole orthogonal lattice.
  return {Triple{Integer(w.x1 / g), Integer(-w.x0 / g), Integer(0)},
          Triple{Integer(u * w.x2), Integer(v * w.x2), Integer(-g)}};
}

/// Rank-2 sublattice V = Z^3 cap span(x, y).
struct PlaneModule {
  std::array<Triple, 2> basis;  // the generating pair as given
  Triple wedge;                 // basis[0] ^ basis[1]
  Triple primitive_wedge;       // wedge of a Z-basis of V
  Integer height;               // H(V) = norm of the primitive wedge
  Integer index;                // [V : Z x + Z y]
};

/// Height of the plane spanned by x and y. The index is computed from the
/// coordinates of x, y in an explicit basis of V and cross-checked against
/// ||x ^ y|| = index * H(V).
inline PlaneModule height_of_plane(const Triple& x, const Triple& y) {
  Triple w = wedge(x, y);
  if (w.is_zero()) fail(ErrorKind::kPrecondition, "height_of_plane: collinear input");
  Integer c = content(w);
  Triple pw{w.x0 / c, w.x1 / c, w.x2 / c};

  auto b = orthogonal_lattice_basis(pw);
  // Coordinates (alpha, beta) with v = alpha b0 + beta b1; b0 and b1 have a
  // nonsingular 2x2 minor somewhere, pick one and solve by Cramer's rule.
  auto coords = [&](const Triple& v) -> std::array<Integer, 2> {
    for (int r = 0; r < 3; ++r) {
      for (int s = r + 1; s < 3; ++s) {
        Integer d = b[0][r] * b[1][s] - b[0][s] * b[1][r];
        if (d == 0) continue;
        Integer na = v[r] * b[1][s] - v[s] * b[1][r];
        Integer nb = b[0][r] * v[s] - b[0][s] * v[r];
        if (na % d != 0 || nb % d != 0) {
          fail(ErrorKind::kAssertion, "height_of_plane: vector outside its own plane lattice");
        }
        return {Integer(na / d), Integer(nb / d)};
      }
    }
    fail(ErrorKind::kAssertion, "height_of_plane: degenerate plane basis");
  };
  auto cx = coords(x), cy = coords(y);
  Integer index = abs(Integer(cx[0] * cy[1] - cx[1] * cy[0]));
  if (index != c) fail(ErrorKind::kAssertion, "height_of_plane: index disagrees with wedge content");
  return {{x, y}, w, pw, pw.norm(), index};
}

}  // namespace pprefix
