#include <gtest/gtest.h>

#include <random>

#include "pprefix/exact.hpp"

using namespace pprefix;

namespace {

ContinuedFraction golden() { return ContinuedFraction::periodic(Integer(0), {}, {1}); }

// Sign of 5 q^2 - (2p + q)^2 tells on which side of (sqrt5 - 1)/2 lies p/q:
// p/q < x  <=>  2p + q < sqrt5 q  <=>  (2p + q)^2 < 5 q^2.
bool below_golden_conjugate(const Rational& r) {
  Integer p = r.get_num(), q = r.get_den();
  Integer a = 2 * p + q;
  return a * a < 5 * q * q;
}

}  // namespace

TEST(Convergents, GoldenRatio) {
  auto c = convergents(ContinuedFraction::finite(Integer(0), {1, 1, 1, 1, 1}), 5);
  const int p[] = {0, 1, 1, 2, 3}, q[] = {1, 1, 2, 3, 5};
  for (int i = 0; i < 5; ++i) {
    EXPECT_EQ(c[i].p, p[i]) << i;
    EXPECT_EQ(c[i].q, q[i]) << i;
  }
}

TEST(Convergents, SilverByHand) {
  auto c = convergents(ContinuedFraction::finite(Integer(0), {2, 2, 2}), 4);
  const int p[] = {0, 1, 2, 5}, q[] = {1, 2, 5, 12};
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ(c[i].p, p[i]);
    EXPECT_EQ(c[i].q, q[i]);
  }
}

TEST(Convergents, DeterminantAlternates) {
  std::mt19937_64 rng(7);
  std::vector<std::uint64_t> a(300);
  for (auto& x : a) x = 1 + rng() % 50;
  auto c = convergents(ContinuedFraction::finite(Integer(3), a), 300);
  for (std::size_t n = 1; n < c.size(); ++n) {
    Integer d = c[n].p * c[n - 1].q - c[n - 1].p * c[n].q;
    EXPECT_EQ(d, (n % 2 == 1) ? 1 : -1) << n;  // (-1)^{n-1}
    Integer g;
    mpz_gcd(g.get_mpz_t(), c[n].p.get_mpz_t(), c[n].q.get_mpz_t());
    EXPECT_EQ(g, 1);
  }
}

TEST(Convergents, MatrixProductMatchesRecurrence) {
  std::vector<std::uint64_t> a{1, 2, 1, 1, 2, 1, 2, 1};
  ConvergentStream s(ContinuedFraction::finite(Integer(0), a));
  Matrix2 prod = Matrix2::identity();
  for (std::size_t n = 1; n <= a.size(); ++n) {
    prod = prod * Matrix2{Integer(a[n - 1]), Integer(1), Integer(1), Integer(0)};
    EXPECT_EQ(s.state_at(n).quotient_product(), prod) << n;
  }
}

TEST(Convergents, CheckpointReplayAgrees) {
  ConvergentStream s(golden(), 16);
  s.advance_to(1000);
  auto all = convergents(golden(), 1001);
  for (std::size_t n : {0u, 1u, 15u, 16u, 17u, 500u, 999u, 1000u}) {
    auto st = s.state_at(n);
    EXPECT_EQ(st.p, all[n].p);
    EXPECT_EQ(st.q, all[n].q);
  }
}

TEST(Convergents, GrowthBounds) {
  // 2^{floor(n/2)} <= max entry <= (2 Omega)^n for quotients in [1, Omega].
  std::mt19937_64 rng(11);
  const std::uint64_t omega = 5;
  std::vector<std::uint64_t> a(200);
  for (auto& x : a) x = 1 + rng() % omega;
  ConvergentStream s(ContinuedFraction::finite(Integer(0), a));
  for (std::size_t n = 1; n <= a.size(); ++n) {
    Matrix2 m = s.state_at(n).quotient_product();
    Integer mx = m.a;
    for (const Integer* e : {&m.b, &m.c, &m.d}) if (*e > mx) mx = *e;
    Integer lo, hi;
    mpz_ui_pow_ui(lo.get_mpz_t(), 2, n / 2);
    mpz_ui_pow_ui(hi.get_mpz_t(), 2 * omega, n);
    EXPECT_LE(lo, mx);
    EXPECT_LE(mx, hi);
  }
}

TEST(Enclose, GoldenTenth) {
  RealEnclosure e = enclose(golden(), Rational(1, 10));
  EXPECT_LE(e.width(), Rational(1, 10));
  EXPECT_TRUE(below_golden_conjugate(e.lo()));
  EXPECT_FALSE(below_golden_conjugate(e.hi()));
  // [3/5, 2/3] or tighter
  EXPECT_GE(e.lo(), Rational(3, 5));
  EXPECT_LE(e.hi(), Rational(2, 3));
}

TEST(Enclose, FiftyDigits) {
  Integer ten50;
  mpz_ui_pow_ui(ten50.get_mpz_t(), 10, 50);
  RealEnclosure e = enclose(golden(), Rational(Integer(1), ten50));
  EXPECT_LE(e.width(), Rational(Integer(1), ten50));
  EXPECT_TRUE(below_golden_conjugate(e.lo()));
  EXPECT_FALSE(below_golden_conjugate(e.hi()));
  // Width equals 1/(q_n q_{n+1}) for the two bracketing convergents.
  EXPECT_EQ(e.width(), Rational(Integer(1), Integer(e.lo().get_den() * e.hi().get_den())));
}

TEST(Enclose, FiniteIsPoint) {
  RealEnclosure e = enclose(ContinuedFraction::finite(Integer(0), {1, 2}), Rational(1, 1000000));
  EXPECT_TRUE(e.is_point());
  EXPECT_EQ(e.lo(), Rational(2, 3));
}

TEST(Enclose, RefinementIsNested) {
  auto stream = std::make_shared<ConvergentStream>(ContinuedFraction::periodic(Integer(1), {2}, {1, 3, 1}));
  RealEnclosure e(stream, 0);
  for (int k = 0; k < 12; ++k) {
    Rational lo = e.lo(), hi = e.hi();
    e.refine();
    EXPECT_LE(lo, e.lo());
    EXPECT_LE(e.hi(), hi);
    EXPECT_LT(e.width(), hi - lo);
  }
}

TEST(Enclose, ConvergentDistance) {
  // |xi - p_n/q_n| <= 1/(q_n q_{n+1}) as containment in the refined enclosure.
  auto cf = ContinuedFraction::periodic(Integer(0), {}, {1, 2, 2, 1, 5});
  auto c = convergents(cf, 60);
  RealEnclosure xi = enclose(cf, Rational(Integer(1), Integer(c[59].q * c[59].q)));
  for (std::size_t n = 0; n + 1 < 50; ++n) {
    Rational pn(c[n].p, c[n].q);
    pn.canonicalize();
    Rational bound(Integer(1), Integer(c[n].q * c[n + 1].q));
    EXPECT_LE(abs(Rational(xi.hi() - pn)), bound);
    EXPECT_LE(abs(Rational(xi.lo() - pn)), bound);
  }
}

TEST(SquareEnclosure, Cases) {
  RealEnclosure e(Rational(3, 5), Rational(2, 3));
  RealEnclosure s = square_enclosure(e);
  EXPECT_EQ(s.lo(), Rational(9, 25));
  EXPECT_EQ(s.hi(), Rational(4, 9));
  RealEnclosure p(Rational(2, 7), Rational(2, 7));
  EXPECT_EQ(square_enclosure(p).lo(), Rational(4, 49));
  EXPECT_EQ(square_enclosure(p).hi(), Rational(4, 49));
  RealEnclosure mixed(Rational(-1, 2), Rational(1, 3));
  EXPECT_EQ(square_enclosure(mixed).lo(), 0);
  EXPECT_EQ(square_enclosure(mixed).hi(), Rational(1, 4));
}

TEST(SquareEnclosure, WidthLinearInInput) {
  auto stream = std::make_shared<ConvergentStream>(golden());
  RealEnclosure e(stream, 2);
  for (int k = 0; k < 8; ++k) {
    RealEnclosure s = square_enclosure(e);
    EXPECT_EQ(s.width(), (e.hi() + e.lo()) * e.width());
    EXPECT_LE(s.width(), 2 * e.width());
    e.refine();
  }
}

TEST(NearestInteger, Examples) {
  RealEnclosure e(Rational(3, 5), Rational(2, 3));
  EXPECT_EQ(nearest_integer(Integer(5), e), Integer(3));
  RealEnclosure p(Rational(2, 3), Rational(2, 3));
  EXPECT_EQ(nearest_integer(Integer(1), p), Integer(1));
  RealEnclosure straddle(Rational(2, 5), Rational(3, 5));
  EXPECT_FALSE(nearest_integer(Integer(1), straddle).has_value());
  RealEnclosure half(Rational(1, 2), Rational(1, 2));
  // A point at k + 1/2 is rounded up deterministically; only an interval
  // reaching a boundary is undecidable.
  EXPECT_EQ(nearest_integer(Integer(1), half), Integer(1));
  RealEnclosure touch(Rational(1, 3), Rational(1, 2));
  EXPECT_FALSE(nearest_integer(Integer(1), touch).has_value());
}

TEST(NearestInteger, RefinedMatchesRounding) {
  auto cf = golden();
  auto stream = std::make_shared<ConvergentStream>(cf);
  RealEnclosure e(stream, 0);
  const double x = (std::sqrt(5.0) - 1) / 2;
  for (long m = 1; m <= 2000; m += 7) {
    Integer r = nearest_integer_refined(Integer(m), e);
    EXPECT_EQ(r, Integer(static_cast<long>(std::llround(m * x)))) << m;
  }
}

TEST(EvalL, ConvergentBound) {
  auto cf = ContinuedFraction::periodic(Integer(0), {}, {1, 2, 1, 1, 2});
  auto stream = std::make_shared<ConvergentStream>(cf);
  RealEnclosure xi(stream, 200);
  Triple x(1, 1, 1);
  RealEnclosure one(Rational(1), Rational(1));
  RationalInterval l = eval_L(x, one);
  EXPECT_EQ(l.lo, 0);
  EXPECT_EQ(l.hi, 0);
  RationalInterval lx = eval_L(Triple(5, 3, 2), xi);
  EXPECT_LE(lx.lo, lx.hi);
}

TEST(EvalL, DifferentSchedulesNest) {
  auto cf = ContinuedFraction::periodic(Integer(0), {}, {1, 2, 1, 1, 2});
  auto s1 = std::make_shared<ConvergentStream>(cf), s2 = std::make_shared<ConvergentStream>(cf);
  RealEnclosure a(s1, 3), b(s2, 5);
  Triple x(12, 7, 4);
  for (int k = 0; k < 6; ++k) {
    RationalInterval la = eval_L(x, a), lb = eval_L(x, b);
    // Both contain the true value, so they intersect.
    EXPECT_LE(la.lo, lb.hi);
    EXPECT_LE(lb.lo, la.hi);
    RationalInterval before = la;
    a.refine();
    RationalInterval after = eval_L(x, a);
    EXPECT_LE(before.lo, after.lo);
    EXPECT_LE(after.hi, before.hi);
    b.refine();
    b.refine();
  }
}

TEST(EvalL, ComparisonRefines) {
  auto cf = golden();
  auto stream = std::make_shared<ConvergentStream>(cf);
  RealEnclosure xi(stream, 0);
  // (3,2,1) vs (5,3,2): errors decided only after refinement from a coarse start.
  bool a = L_less(Triple(5, 3, 2), Triple(3, 2, 1), xi);
  RealEnclosure fine = enclose(cf, Rational(1, 1000000000));
  RationalInterval l1 = eval_L(Triple(5, 3, 2), fine), l2 = eval_L(Triple(3, 2, 1), fine);
  EXPECT_EQ(a, l1.hi < l2.lo);
}

TEST(Logs, HugeNumbers) {
  Integer big;
  mpz_ui_pow_ui(big.get_mpz_t(), 3, 5000);
  EXPECT_NEAR(log_abs(big), 5000 * std::log(3.0), 1e-9 * 5000);
  EXPECT_TRUE(std::isinf(log_abs(Integer(0))));
}

TEST(Errors, ZeroQuotient) {
  ContinuedFraction cf = ContinuedFraction::finite(Integer(0), {1, 0, 2});
  EXPECT_THROW(convergents(cf, 3), Error);
  EXPECT_THROW(convergents(golden(), 0), Error);
  EXPECT_THROW(enclose(golden(), Rational(0)), Error);
}
