#pragma once

// Infinite words, palindromic prefixes and the ratio estimate delta(w).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pprefix/error.hpp"
#include "pprefix/triple.hpp"

namespace pprefix {

/// Symbols are small integers; 'a' + s is only used for display.
using Symbol = std::uint8_t;
using Symbols = std::vector<Symbol>;

inline std::string to_letters(const Symbols& w) {
  std::string out;
  out.reserve(w.size());
  for (Symbol s : w) out.push_back(static_cast<char>('a' + s));
  return out;
}

inline Symbols from_letters(const std::string& s) {
  Symbols w;
  w.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    char ch = s[i];
    if (ch < 'a' || ch > 'z') {
      fail(ErrorKind::kConfig, "invalid letter '" + std::string(1, ch) + "' at position " +
                                   std::to_string(i + 1));
    }
    w.push_back(static_cast<Symbol>(ch - 'a'));
  }
  return w;
}

/// A lazily generated word. The extender appends symbols to the buffer until
/// it holds at least `target` of them; it must never change existing ones.
/// Materialization mutates the buffer, so one Word belongs to one thread.
class Word {
 public:
  using Extender = std::function<void(Symbols&, std::size_t target)>;

  Word(std::size_t alphabet_size, Extender extend, std::string name,
       std::optional<std::size_t> max_length = std::nullopt)
      : alphabet_size_(alphabet_size), extend_(std::move(extend)), name_(std::move(name)),
        max_length_(max_length) {}

  static Word literal(Symbols w, std::string name = "literal") {
    std::size_t k = 0;
    for (Symbol s : w) k = std::max<std::size_t>(k, s + 1u);
    const std::size_t n = w.size();
    auto data = std::make_shared<const Symbols>(std::move(w));
    return Word(
        k, [data](Symbols& buf, std::size_t target) {
          buf.assign(data->begin(), data->begin() + static_cast<std::ptrdiff_t>(target));
        },
        std::move(name), n);
  }

  const std::string& name() const { return name_; }
  std::size_t alphabet_size() const { return alphabet_size_; }
  std::optional<std::size_t> max_length() const { return max_length_; }
  std::size_t materialized() const { return buffer_.size(); }

  /// First n symbols.
  Symbols prefix(std::size_t n) {
    materialize(n);
    return Symbols(buffer_.begin(), buffer_.begin() + static_cast<std::ptrdiff_t>(n));
  }

  /// Symbol at 1-indexed position n.
  Symbol at(std::size_t n) {
    if (n == 0) fail(ErrorKind::kPrecondition, "word positions are 1-indexed");
    materialize(n);
    return buffer_[n - 1];
  }

  void materialize(std::size_t n) {
    if (n <= buffer_.size()) return;
    if (max_length_ && n > *max_length_) {
      fail(ErrorKind::kPrecondition, "word '" + name_ + "' has only " +
                                         std::to_string(*max_length_) + " symbols");
    }
    const std::size_t old = buffer_.size();
    Symbols before(buffer_.begin(), buffer_.end());
    extend_(buffer_, n);
    if (buffer_.size() < n || !std::equal(before.begin(), before.end(), buffer_.begin())) {
      fail(ErrorKind::kAssertion, "word extension changed or missed symbols");
    }
    for (std::size_t i = old; i < buffer_.size(); ++i) {
      if (buffer_[i] >= alphabet_size_) fail(ErrorKind::kAssertion, "symbol outside alphabet");
    }
  }

 private:
  std::size_t alphabet_size_;
  Extender extend_;
  std::string name_;
  std::optional<std::size_t> max_length_;
  Symbols buffer_;
};

/// First `length` symbols of the fixed point of a -> ab, b -> a.
inline Symbols generate_fibonacci(std::size_t length) {
  if (length == 0) fail(ErrorKind::kPrecondition, "length must be >= 1");
  // f_{k+1} = f_k f_{k-1}
  Symbols prev{0}, cur{0, 1};
  while (cur.size() < length) {
    Symbols next = cur;
    next.insert(next.end(), prev.begin(), prev.end());
    prev.swap(cur);
    cur.swap(next);
  }
  cur.resize(length);
  return cur;
}

inline Word fibonacci_word() {
  return Word(2, [](Symbols& buf, std::size_t target) {
    buf = generate_fibonacci(std::max<std::size_t>(target, 2 * buf.size()));
  }, "fibonacci");
}

namespace detail {

/// Closed cylinder of slopes whose expansion starts with s_1..s_K:
/// the endpoints are [0; s_1..s_K] and [0; s_1..s_K + 1].
inline std::pair<Rational, Rational> slope_cylinder(const std::vector<std::uint64_t>& s) {
  Integer p{0}, q{1}, pp{1}, qp{0};
  for (std::uint64_t a : s) {
    Integer np = p * a + pp, nq = q * a + qp;
    pp = p;
    qp = q;
    p = np;
    q = nq;
  }
  Rational x(p, q), y(p + pp, q + qp);
  x.canonicalize();
  y.canonicalize();
  if (x > y) std::swap(x, y);
  return {x, y};
}

}  // namespace detail

/// First `length` symbols of the characteristic Sturmian word with slope
/// [0; s_1, s_2, ...], computed as c_n = floor((n+1) alpha) - floor(n alpha)
/// over the cylinder fixed by the given quotients. Letters are named so the
/// word starts with 'a'.
inline Symbols generate_sturmian(const std::vector<std::uint64_t>& quotients, std::size_t length) {
  if (length == 0) fail(ErrorKind::kPrecondition, "length must be >= 1");
  if (quotients.empty()) fail(ErrorKind::kConfig, "sturmian: no partial quotients");
  for (auto a : quotients) {
    if (a == 0) fail(ErrorKind::kConfig, "sturmian: partial quotients must be positive");
  }
  auto [lo, hi] = detail::slope_cylinder(quotients);
  const Integer& plo = lo.get_num();
  const Integer& qlo = lo.get_den();
  const Integer& phi = hi.get_num();
  const Integer& qhi = hi.get_den();
  // floor(k alpha) is fixed iff no integer lies strictly inside (k lo, k hi).
  auto floor_at = [&](std::size_t k) {
    Integer a, b;
    Integer kl = plo * k, kh = phi * k;
    mpz_fdiv_q(a.get_mpz_t(), kl.get_mpz_t(), qlo.get_mpz_t());
    mpz_cdiv_q(b.get_mpz_t(), kh.get_mpz_t(), qhi.get_mpz_t());
    if (b - a > 1) {
      fail(ErrorKind::kInsufficientData,
           "sturmian: insufficient-quotients, " + std::to_string(quotients.size()) +
               " quotients do not determine position " + std::to_string(k));
    }
    return a;
  };
  Symbols out;
  out.reserve(length);
  Integer prev = floor_at(1);
  int first = -1;
  for (std::size_t n = 1; n <= length; ++n) {
    Integer next = floor_at(n + 1);
    int c = (next - prev) == 0 ? 0 : 1;
    if (first < 0) first = c;
    out.push_back(static_cast<Symbol>(c == first ? 0 : 1));
    prev.swap(next);
  }
  return out;
}

/// Sturmian word whose quotient stream is given by `quotient(k)` (k >= 1).
/// Enough quotients are taken to determine each requested prefix.
inline Word sturmian_word(std::function<std::uint64_t(std::size_t)> quotient, std::string name) {
  return Word(2, [quotient](Symbols& buf, std::size_t target) {
    std::size_t want = std::max<std::size_t>(target, 2 * buf.size());
    std::vector<std::uint64_t> qs;
    Integer q{1}, qp{0};
    // Take quotients until q_K exceeds 4 * want, then retry with more if needed.
    while (q <= Integer(4) * want) {
      qs.push_back(quotient(qs.size() + 1));
      Integer nq = q * qs.back() + qp;
      qp = q;
      q = nq;
    }
    for (int attempt = 0;; ++attempt) {
      try {
        buf = generate_sturmian(qs, want);
        return;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::kInsufficientData || attempt > 64) throw;
        for (int k = 0; k < 4; ++k) qs.push_back(quotient(qs.size() + 1));
      }
    }
  }, std::move(name));
}

/// Sturmian word of slope [0; pre..., (period)...].
inline Word sturmian_word_periodic(std::vector<std::uint64_t> pre, std::vector<std::uint64_t> period) {
  if (period.empty()) fail(ErrorKind::kConfig, "sturmian: empty period");
  for (auto a : pre) if (a == 0) fail(ErrorKind::kConfig, "sturmian: zero partial quotient");
  for (auto a : period) if (a == 0) fail(ErrorKind::kConfig, "sturmian: zero partial quotient");
  std::string name = "sturmian:";
  for (auto a : pre) name += std::to_string(a) + ",";
  name += "(";
  for (std::size_t i = 0; i < period.size(); ++i) name += (i ? "," : "") + std::to_string(period[i]);
  name += ")";
  return sturmian_word([pre, period](std::size_t k) {
    if (k <= pre.size()) return pre[k - 1];
    return period[(k - 1 - pre.size()) % period.size()];
  }, std::move(name));
}

/// Palindromic prefix lengths of a finite prefix.
struct PalindromicPrefixTable {
  std::vector<std::size_t> lengths;  // n_1 < n_2 < ...
  std::size_t horizon = 0;
};

/// Manacher's algorithm; a prefix of length n is a palindrome iff the
/// radius around its centre reaches position 0.
inline PalindromicPrefixTable palindromic_prefix_lengths(const Symbols& w) {
  if (w.empty()) fail(ErrorKind::kPrecondition, "palindromic_prefix_lengths: empty prefix");
  const std::size_t n = w.size();
  // d1[i]: odd palindromes centred at i (radius incl. centre);
  // d2[i]: even palindromes centred between i-1 and i.
  std::vector<long> d1(n), d2(n);
  const long len = static_cast<long>(n);
  for (long i = 0, l = 0, r = -1; i < len; ++i) {
    long k = (i > r) ? 1 : std::min(d1[l + r - i], r - i + 1);
    while (i - k >= 0 && i + k < len && w[i - k] == w[i + k]) ++k;
    d1[i] = k--;
    if (i + k > r) {
      l = i - k;
      r = i + k;
    }
  }
  for (long i = 0, l = 0, r = -1; i < len; ++i) {
    long k = (i > r) ? 0 : std::min(d2[l + r - i + 1], r - i + 1);
    while (i - k - 1 >= 0 && i + k < len && w[i - k - 1] == w[i + k]) ++k;
    d2[i] = k--;
    if (i + k > r) {
      l = i - k - 1;
      r = i + k;
    }
  }
  PalindromicPrefixTable t;
  t.horizon = n;
  // Prefix of length m: odd m centred at (m-1)/2, even m centred before m/2.
  for (std::size_t m = 1; m <= n; ++m) {
    const auto need = static_cast<long>(m);
    bool pal = (m % 2 == 1) ? 2 * d1[(m - 1) / 2] - 1 >= need : 2 * d2[m / 2] >= need;
    if (pal) t.lengths.push_back(m);
  }
  return t;
}

/// Reference check by reversal; quadratic.
inline bool is_palindrome(const Symbols& w, std::size_t n) {
  for (std::size_t i = 0; i < n / 2; ++i) {
    if (w[i] != w[n - 1 - i]) return false;
  }
  return true;
}

/// Tail maximum of consecutive ratios, with the full trace.
struct DeltaEstimate {
  double value = 0;
  double liminf = 0;                 // tail minimum over the same window
  std::size_t window_begin = 0;      // first ratio index used (0-based)
  std::size_t window_end = 0;        // one past the last
  std::vector<double> ratio_trace;   // ratio_trace[i] = x_{i+1} / x_i
};

/// Window covering the last ceil(fraction * count) entries.
inline std::size_t tail_begin(std::size_t count, double tail_fraction) {
  if (!(tail_fraction > 0 && tail_fraction <= 1)) {
    fail(ErrorKind::kPrecondition, "tail_fraction must lie in (0, 1]");
  }
  auto take = static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(count)));
  take = std::clamp<std::size_t>(take, 1, count);
  return count - take;
}

inline DeltaEstimate summarize_ratios(std::vector<double> trace, double tail_fraction) {
  DeltaEstimate d;
  d.window_begin = tail_begin(trace.size(), tail_fraction);
  d.window_end = trace.size();
  auto [mn, mx] = std::minmax_element(trace.begin() + static_cast<std::ptrdiff_t>(d.window_begin),
                                      trace.end());
  d.value = *mx;
  d.liminf = *mn;
  d.ratio_trace = std::move(trace);
  return d;
}

inline DeltaEstimate delta_of_lengths(const std::vector<std::size_t>& lengths, double tail_fraction = 0.5) {
  if (lengths.size() < 3) {
    fail(ErrorKind::kInsufficientData,
         "delta: need at least 3 palindromic lengths, have " + std::to_string(lengths.size()));
  }
  std::vector<double> trace;
  for (std::size_t i = 0; i + 1 < lengths.size(); ++i) {
    trace.push_back(static_cast<double>(lengths[i + 1]) / static_cast<double>(lengths[i]));
  }
  return summarize_ratios(std::move(trace), tail_fraction);
}

inline DeltaEstimate delta_of_word(const PalindromicPrefixTable& t, double tail_fraction = 0.5) {
  return delta_of_lengths(t.lengths, tail_fraction);
}

/// Letter-to-word substitution, e.g. each letter replaced by a palindrome.
/// The image keeps the palindromic prefixes that come from those of w but
/// may gain others.
inline Symbols substitute(const Symbols& w, const std::vector<Symbols>& images) {
  Symbols out;
  for (Symbol s : w) {
    if (s >= images.size()) fail(ErrorKind::kPrecondition, "substitute: no image for symbol");
    out.insert(out.end(), images[s].begin(), images[s].end());
  }
  return out;
}

}  // namespace pprefix
