#pragma once

// Exact reals: continued fractions, convergents, and rational enclosures of
// xi and xi^2 that can be refined on demand.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pprefix/error.hpp"
#include "pprefix/triple.hpp"

namespace pprefix {

/// Natural log of |v|; -inf for zero. Exact up to double rounding for any size.
inline double log_abs(const Integer& v) {
  if (v == 0) return -std::numeric_limits<double>::infinity();
  long exp = 0;
  double mant = mpz_get_d_2exp(&exp, v.get_mpz_t());
  return std::log(std::fabs(mant)) + static_cast<double>(exp) * std::log(2.0);
}

inline double log_abs(const Rational& v) {
  if (v == 0) return -std::numeric_limits<double>::infinity();
  return log_abs(Integer(v.get_num())) - log_abs(Integer(v.get_den()));
}

/// Floor of a rational.
inline Integer floor_of(const Rational& r) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }
inline std::string to_string(const Integer& v) { return v.get_str(); }

/// Parses "p/q" or "p".
inline Rational parse_rational(const std::string& s) {
  Rational r;
  if (r.set_str(s, 10) != 0) fail(ErrorKind::kConfig, "invalid rational '" + s + "'");
  r.canonicalize();
  return r;
}

/// [a0; a1, a2, ...] with a replayable stream of positive partial quotients.
class ContinuedFraction {
 public:
  using Term = std::uint64_t;
  /// Returns a_n for n >= 1. Must be deterministic.
  using Source = std::function<Term(std::size_t)>;

  ContinuedFraction(Integer a0, Source source,
                    std::optional<std::size_t> length = std::nullopt)
      : a0_(std::move(a0)), source_(std::move(source)), length_(length) {}

  static ContinuedFraction finite(Integer a0, std::vector<Term> terms) {
    auto data = std::make_shared<const std::vector<Term>>(std::move(terms));
    const std::size_t n = data->size();
    return ContinuedFraction(
        std::move(a0), [data](std::size_t i) { return (*data)[i - 1]; }, n);
  }

  /// Pre-period followed by an infinitely repeated period.
  static ContinuedFraction periodic(Integer a0, std::vector<Term> pre,
                                    std::vector<Term> period) {
    if (period.empty()) return finite(std::move(a0), std::move(pre));
    auto head = std::make_shared<const std::vector<Term>>(std::move(pre));
    auto tail = std::make_shared<const std::vector<Term>>(std::move(period));
    return ContinuedFraction(std::move(a0), [head, tail](std::size_t i) {
      if (i <= head->size()) return (*head)[i - 1];
      return (*tail)[(i - 1 - head->size()) % tail->size()];
    });
  }

  const Integer& a0() const { return a0_; }
  std::optional<std::size_t> length() const { return length_; }
  bool is_finite() const { return length_.has_value(); }

  Term term(std::size_t n) const {
    if (n == 0) fail(ErrorKind::kPrecondition, "partial quotients are 1-indexed");
    if (length_ && n > *length_) {
      fail(ErrorKind::kPrecondition, "continued fraction has only " +
                                         std::to_string(*length_) + " partial quotients");
    }
    Term t = source_(n);
    if (t == 0) fail(ErrorKind::kConfig, "partial quotient a_" + std::to_string(n) + " is zero");
    return t;
  }

 private:
  Integer a0_;
  Source source_;
  std::optional<std::size_t> length_;
};

/// p_n / q_n, the n-th convergent.
struct ConvergentPair {
  Integer p;
  Integer q;
  std::size_t index = 0;
};

/// State of the matrix recurrence at index n:
/// [[p_n, p_{n-1}], [q_n, q_{n-1}]] = [[a0, 1], [1, 0]] * prod_k [[a_k, 1], [1, 0]].
struct ConvergentState {
  Integer p{0}, q{1}, p_prev{1}, q_prev{0};
  std::size_t n = 0;

  /// The product of the quotient matrices alone,
  /// [[q_n, q_{n-1}], [p_n, p_{n-1}]] when a0 = 0.
  Matrix2 quotient_product() const { return {q, q_prev, p, p_prev}; }

  void step(ContinuedFraction::Term a) {
    Integer np = p * a + p_prev;
    Integer nq = q * a + q_prev;
    p_prev.swap(p);
    q_prev.swap(q);
    p.swap(np);
    q.swap(nq);
    ++n;
  }
};

/// Incremental convergent computation with periodic checkpoints so earlier
/// indices can be replayed without starting from zero.
class ConvergentStream {
 public:
  explicit ConvergentStream(ContinuedFraction cf, std::size_t checkpoint_every = 256)
      : cf_(std::move(cf)), every_(checkpoint_every == 0 ? 256 : checkpoint_every) {
    head_.p = cf_.a0();
    checkpoints_.push_back(head_);
  }

  const ContinuedFraction& fraction() const { return cf_; }
  std::size_t index() const { return head_.n; }
  const ConvergentState& head() const { return head_; }

  /// Last index available (finite fractions only).
  std::optional<std::size_t> last_index() const { return cf_.length(); }

  void advance_to(std::size_t n) {
    if (cf_.length() && n > *cf_.length()) {
      fail(ErrorKind::kPrecondition, "convergent index beyond finite expansion");
    }
    while (head_.n < n) {
      head_.step(cf_.term(head_.n + 1));
      if (head_.n % every_ == 0) checkpoints_.push_back(head_);
    }
  }

  /// State at index n; advances the head when n is past it.
  ConvergentState state_at(std::size_t n) {
    if (n >= head_.n) {
      advance_to(n);
      return head_;
    }
    ConvergentState s = checkpoints_[n / every_];
    while (s.n < n) s.step(cf_.term(s.n + 1));
    return s;
  }

  ConvergentPair pair_at(std::size_t n) {
    ConvergentState s = state_at(n);
    return {s.p, s.q, n};
  }

 private:
  ContinuedFraction cf_;
  std::size_t every_;
  ConvergentState head_;
  std::vector<ConvergentState> checkpoints_;
};

/// Convergents p_0/q_0 ... p_{count-1}/q_{count-1}.
inline std::vector<ConvergentPair> convergents(const ContinuedFraction& cf, std::size_t count) {
  if (count == 0) fail(ErrorKind::kPrecondition, "convergents: count must be >= 1");
  std::vector<ConvergentPair> out;
  out.reserve(count);
  ConvergentState s;
  s.p = cf.a0();
  out.push_back({s.p, s.q, 0});
  while (out.size() < count) {
    s.step(cf.term(s.n + 1));
    out.push_back({s.p, s.q, s.n});
  }
  return out;
}

/// Refinement loops stop after advancing this many partial quotients past
/// their starting point; an undecided comparison there is reported, not guessed.
inline constexpr std::size_t kRefinementTerms = 10000;

/// Closed rational interval.
struct RationalInterval {
  Rational lo;
  Rational hi;

  Rational width() const { return hi - lo; }
  Rational midpoint() const { return (lo + hi) / 2; }
  bool contains(const Rational& v) const { return lo <= v && v <= hi; }
  bool strictly_below(const RationalInterval& o) const { return hi < o.lo; }
  /// Relative width (hi - lo) / lo as a double; +inf when lo <= 0.
  double relative_width() const {
    if (lo <= 0) return std::numeric_limits<double>::infinity();
    Rational r = width() / lo;
    return r.get_d();
  }
  double log_mid() const { return log_abs(Rational(midpoint())); }
};

/// Rational interval [lo, hi] guaranteed to contain the value of a continued
/// fraction; refinable by advancing a shared convergent stream.
///
/// Copies share the stream, so a single enclosure (and its copies) must stay
/// within one thread while refining.
class RealEnclosure {
 public:
  /// Fixed, non-refinable interval.
  RealEnclosure(Rational lo, Rational hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
    if (lo_ > hi_) fail(ErrorKind::kPrecondition, "enclosure with lo > hi");
  }

  RealEnclosure(std::shared_ptr<ConvergentStream> stream, std::size_t index)
      : stream_(std::move(stream)) {
    set_index(index);
  }

  const Rational& lo() const { return lo_; }
  const Rational& hi() const { return hi_; }
  Rational width() const { return hi_ - lo_; }
  Rational midpoint() const { return (lo_ + hi_) / 2; }
  RationalInterval interval() const { return {lo_, hi_}; }
  bool is_point() const { return lo_ == hi_; }
  bool refinable() const { return stream_ != nullptr && !is_point(); }
  std::size_t index() const { return index_; }
  const std::shared_ptr<ConvergentStream>& stream() const { return stream_; }

  /// Upper bound of |value|.
  Rational abs_upper() const {
    Rational a = abs(lo_), b = abs(hi_);
    return a > b ? a : b;
  }

  /// Roughly doubles the number of correct digits.
  void refine() {
    if (!refinable()) return;
    set_index(2 * index_ + 8);
  }

  /// refine() without passing convergent index `limit`; false once stuck.
  bool refine(std::size_t limit) {
    if (!refinable() || index_ >= limit) return false;
    set_index(std::min(2 * index_ + 8, limit));
    return true;
  }

  /// Refines until width <= target (or the expansion ends).
  void refine_to(const Rational& target) {
    while (refinable() && width() > target) {
      std::size_t next = index_ + 1;
      // q_{n+2} >= 2 q_n, so two steps at least halve 1/(q_n q_{n+1}).
      Rational ratio = width() / target;
      double lg = log_abs(Rational(ratio)) / std::log(2.0);
      if (lg > 4) next = index_ + static_cast<std::size_t>(lg);
      set_index(next);
    }
  }

 private:
  void set_index(std::size_t n) {
    const auto last = stream_->last_index();
    if (last && n + 1 > *last) {
      n = *last;
      ConvergentPair c = stream_->pair_at(n);
      lo_ = hi_ = Rational(c.p, c.q);
      lo_.canonicalize();
      hi_ = lo_;
      index_ = n;
      return;
    }
    ConvergentPair a = stream_->pair_at(n);
    ConvergentPair b = stream_->pair_at(n + 1);
    Rational ra(a.p, a.q), rb(b.p, b.q);
    ra.canonicalize();
    rb.canonicalize();
    if (ra <= rb) {
      lo_ = std::move(ra);
      hi_ = std::move(rb);
    } else {
      lo_ = std::move(rb);
      hi_ = std::move(ra);
    }
    index_ = n;
  }

  Rational lo_, hi_;
  std::shared_ptr<ConvergentStream> stream_;
  std::size_t index_ = 0;
};

/// Enclosure of the continued fraction's value of width <= `width`, built
/// from two consecutive convergents (width 1/(q_n q_{n+1})).
inline RealEnclosure enclose(const ContinuedFraction& cf, const Rational& width) {
  if (width <= 0) fail(ErrorKind::kPrecondition, "enclose: width must be positive");
  auto stream = std::make_shared<ConvergentStream>(cf);
  RealEnclosure e(stream, 0);
  e.refine_to(width);
  return e;
}

/// Interval square; handles intervals straddling zero.
inline RationalInterval square_interval(const RationalInterval& v) {
  Rational a = v.lo * v.lo, b = v.hi * v.hi;
  if (v.lo >= 0) return {a, b};
  if (v.hi <= 0) return {b, a};
  return {Rational(0), a > b ? a : b};
}

/// Enclosure of xi^2 from an enclosure of xi (a non-refinable snapshot).
inline RealEnclosure square_enclosure(const RealEnclosure& e) {
  RationalInterval s = square_interval(e.interval());
  return RealEnclosure(s.lo, s.hi);
}

/// round(multiplier * xi) when [m lo, m hi] avoids every half-integer
/// boundary; std::nullopt (Undecidable) otherwise.
inline std::optional<Integer> nearest_integer(const Integer& multiplier, const RealEnclosure& e) {
  if (multiplier < 1) fail(ErrorKind::kPrecondition, "nearest_integer: multiplier must be >= 1");
  const Rational half(1, 2);
  Rational lo = multiplier * e.lo() + half;
  Rational hi = multiplier * e.hi() + half;
  Integer a = floor_of(lo), b = floor_of(hi);
  if (a != b) return std::nullopt;
  // hi + 1/2 landing exactly on an integer means hi is a half-integer.
  if (hi == Rational(b) && e.width() > 0) return std::nullopt;
  return a;
}

/// nearest_integer with the retry policy: first refine to width 1/(4 m), then
/// double the digits until decided, within `max_terms` further partial quotients.
inline Integer nearest_integer_refined(const Integer& multiplier, RealEnclosure& e,
                                       std::size_t max_terms = kRefinementTerms) {
  e.refine_to(Rational(Integer(1), Integer(4 * multiplier)));
  const std::size_t limit = e.index() + max_terms;
  do {
    if (auto r = nearest_integer(multiplier, e)) return *r;
  } while (e.refine(limit));
  fail(ErrorKind::kRefinementCap, "nearest_integer: could not separate from a half-integer");
}

/// |x0 * v - x1| for v in `xi`, as an interval.
inline RationalInterval abs_linear(const Integer& x0, const Integer& x1, const RationalInterval& v) {
  Rational a = x0 * v.lo - x1;
  Rational b = x0 * v.hi - x1;
  if (a > b) std::swap(a, b);
  if (a >= 0) return {a, b};
  if (b <= 0) return {-b, -a};
  Rational m = -a > b ? Rational(-a) : b;
  return {Rational(0), m};
}

/// Enclosure of L(x) = max(|x0 xi - x1|, |x0 xi^2 - x2|).
inline RationalInterval eval_L(const Triple& x, const RealEnclosure& xi) {
  RationalInterval v = xi.interval();
  RationalInterval v2 = square_interval(v);
  RationalInterval e1 = abs_linear(x.x0, x.x1, v);
  RationalInterval e2 = abs_linear(x.x0, x.x2, v2);
  return {e1.lo > e2.lo ? e1.lo : e2.lo, e1.hi > e2.hi ? e1.hi : e2.hi};
}

/// eval_L refined until the relative width is below `rel_width`.
inline RationalInterval eval_L_relative(const Triple& x, RealEnclosure& xi, double rel_width,
                                        std::size_t max_terms = kRefinementTerms) {
  const std::size_t limit = xi.index() + max_terms;
  do {
    RationalInterval l = eval_L(x, xi);
    if (l.relative_width() <= rel_width || !xi.refinable()) return l;
  } while (xi.refine(limit));
  fail(ErrorKind::kRefinementCap, "eval_L: relative width not reached");
}

/// Decides L(x) < L(y) by refining until the enclosures separate.
inline bool L_less(const Triple& x, const Triple& y, RealEnclosure& xi,
                   std::size_t max_terms = kRefinementTerms) {
  if (x == y) return false;
  const std::size_t limit = xi.index() + max_terms;
  do {
    RationalInterval lx = eval_L(x, xi), ly = eval_L(y, xi);
    if (lx.hi < ly.lo) return true;
    if (ly.hi < lx.lo) return false;
  } while (xi.refine(limit));
  fail(ErrorKind::kRefinementCap, "L comparison undecided within the refinement cap");
}

}  // namespace pprefix
