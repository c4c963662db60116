#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <ostream>
#include <string>

namespace pprefix {

using Integer = mpz_class;
using Rational = mpq_class;

inline Integer abs_value(const Integer& v) { return abs(v); }

/// Integer point of Z^3, identified with the symmetric matrix
/// [[x0, x1], [x1, x2]].
struct Triple {
  Integer x0{0};
  Integer x1{0};
  Integer x2{0};

  Triple() = default;
  Triple(Integer a, Integer b, Integer c)
      : x0(std::move(a)), x1(std::move(b)), x2(std::move(c)) {}
  Triple(long a, long b, long c) : x0(a), x1(b), x2(c) {}

  /// Max-absolute-coordinate norm.
  Integer norm() const {
    Integer n = abs(x0);
    if (abs(x1) > n) n = abs(x1);
    if (abs(x2) > n) n = abs(x2);
    return n;
  }

  bool is_zero() const { return x0 == 0 && x1 == 0 && x2 == 0; }

  const Integer& operator[](int i) const { return i == 0 ? x0 : (i == 1 ? x1 : x2); }
  Integer& operator[](int i) { return i == 0 ? x0 : (i == 1 ? x1 : x2); }

  friend bool operator==(const Triple& a, const Triple& b) {
    return a.x0 == b.x0 && a.x1 == b.x1 && a.x2 == b.x2;
  }
  friend bool operator!=(const Triple& a, const Triple& b) { return !(a == b); }

  friend Triple operator+(const Triple& a, const Triple& b) {
    return {a.x0 + b.x0, a.x1 + b.x1, a.x2 + b.x2};
  }
  friend Triple operator-(const Triple& a, const Triple& b) {
    return {a.x0 - b.x0, a.x1 - b.x1, a.x2 - b.x2};
  }
  friend Triple operator-(const Triple& a) { return {-a.x0, -a.x1, -a.x2}; }
  friend Triple operator*(const Integer& s, const Triple& a) {
    return {s * a.x0, s * a.x1, s * a.x2};
  }

  friend std::ostream& operator<<(std::ostream& os, const Triple& t) {
    return os << '(' << t.x0 << ", " << t.x1 << ", " << t.x2 << ')';
  }
};

/// 2x2 integer matrix [[a, b], [c, d]].
struct Matrix2 {
  Integer a{1}, b{0}, c{0}, d{1};

  static Matrix2 identity() { return {}; }
  static Matrix2 J() { return {Integer(0), Integer(1), Integer(-1), Integer(0)}; }
  static Matrix2 of(const Triple& x) { return {x.x0, x.x1, x.x1, x.x2}; }

  Integer det() const { return a * d - b * c; }
  Integer trace() const { return a + d; }
  bool is_symmetric() const { return b == c; }
  Matrix2 transpose() const { return {a, c, b, d}; }
  /// Adjugate; equals det() times the inverse.
  Matrix2 adjugate() const { return {d, -b, -c, a}; }

  Triple as_triple() const { return {a, b, d}; }

  friend Matrix2 operator*(const Matrix2& m, const Matrix2& n) {
    return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d,
            m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
  }
  friend Matrix2 operator*(const Integer& s, const Matrix2& m) {
    return {s * m.a, s * m.b, s * m.c, s * m.d};
  }
  friend Matrix2 operator-(const Matrix2& m) { return {-m.a, -m.b, -m.c, -m.d}; }
  friend bool operator==(const Matrix2& m, const Matrix2& n) {
    return m.a == n.a && m.b == n.b && m.c == n.c && m.d == n.d;
  }

  friend std::ostream& operator<<(std::ostream& os, const Matrix2& m) {
    return os << "[[" << m.a << ", " << m.b << "], [" << m.c << ", " << m.d << "]]";
  }
};

}  // namespace pprefix
