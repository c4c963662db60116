#pragma once

// Index functions psi with i - c <= psi(i) <= i - 1, the recurrence
// pi_{i+1} = pi_i pi_{psi(i)}^{-1} pi_i in both directions, and delta(psi).

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pprefix/error.hpp"
#include "pprefix/exact.hpp"
#include "pprefix/word.hpp"

namespace pprefix {

/// psi(i) = exceptions[i] if present; otherwise i - offsets_period[(i - start) % p]
/// for i >= start; otherwise i - 1.
struct PsiFunction {
  std::map<std::size_t, std::size_t> exceptions;
  std::vector<std::size_t> offsets_period;
  std::size_t start = 1;
  std::size_t c = 1;
  /// Set for functions read off finite data; values past it are not known.
  std::optional<std::size_t> defined_up_to;

  std::size_t operator()(std::size_t i) const {
    if (i == 0) fail(ErrorKind::kPrecondition, "psi is defined for i >= 1");
    if (auto it = exceptions.find(i); it != exceptions.end()) return it->second;
    std::size_t off = 1;
    if (i >= start && !offsets_period.empty()) off = offsets_period[(i - start) % offsets_period.size()];
    if (off > i) fail(ErrorKind::kPrecondition, "psi(" + std::to_string(i) + ") would be negative");
    return i - off;
  }

  std::size_t offset(std::size_t i) const { return i - (*this)(i); }

  /// Last index where values are meaningful, capped at `horizon`.
  std::size_t usable(std::size_t horizon) const {
    return defined_up_to ? std::min(horizon, *defined_up_to) : horizon;
  }

  /// Checks psi(i) <= i - 1 everywhere and i - c <= psi(i) from `start` on.
  void validate(std::size_t horizon) const {
    for (const auto& [i, v] : exceptions) {
      if (i == 0 || v >= i) {
        fail(ErrorKind::kConfig, "psi(" + std::to_string(i) + ") = " + std::to_string(v) +
                                     " violates psi(i) <= i - 1");
      }
    }
    for (std::size_t o : offsets_period) {
      if (o == 0 || o > c) fail(ErrorKind::kConfig, "psi tail offset outside [1, c]");
    }
    for (std::size_t i = std::max<std::size_t>(start, 1); i <= usable(horizon); ++i) {
      if (offset(i) > c) {
        fail(ErrorKind::kConfig, "psi(" + std::to_string(i) + ") below i - c");
      }
    }
  }
};

/// Closed-form psi of the Sturmian word with constant quotients s:
/// offset s + 1 at the multiples of s from 2s on, offset 1 elsewhere.
inline PsiFunction sturmian_psi(std::size_t s) {
  if (s == 0) fail(ErrorKind::kConfig, "sturmian_psi: s must be positive");
  PsiFunction p;
  p.start = 2 * s;
  p.offsets_period.assign(s, 1);
  p.offsets_period[0] = s + 1;
  p.c = s + 1;
  return p;
}

/// psi(i) = i - k from `start` on.
inline PsiFunction constant_offset_psi(std::size_t k, std::size_t start) {
  PsiFunction p;
  p.start = start;
  p.offsets_period = {k};
  p.c = k;
  return p;
}

/// Strictly increasing list of i <= horizon with psi(i) <= i - 2.
inline std::vector<std::size_t> theta_sequence(const PsiFunction& psi, std::size_t horizon) {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i <= psi.usable(horizon); ++i) {
    if (psi.offset(i) >= 2) out.push_back(i);
  }
  return out;
}

struct ReducedCheck {
  bool reduced = true;
  std::optional<std::size_t> k;        // position in the theta list of the first violation
  std::optional<std::size_t> index;    // theta_k itself
  std::string reason;
};

/// psi(theta_k) < theta_{k-1} and psi(theta_k) != psi(theta_{k-1}) for all
/// theta_k in [grace, horizon]. A finite theta list counts as reduced.
inline ReducedCheck is_asymptotically_reduced(const PsiFunction& psi, std::size_t horizon,
                                              std::size_t grace) {
  ReducedCheck r;
  auto th = theta_sequence(psi, horizon);
  for (std::size_t k = 1; k < th.size(); ++k) {
    if (th[k] < grace) continue;
    std::size_t a = psi(th[k]), b = psi(th[k - 1]);
    if (a >= th[k - 1] || a == b) {
      r.reduced = false;
      r.k = k;
      r.index = th[k];
      r.reason = a >= th[k - 1] ? "psi(theta_k) >= theta_{k-1}" : "psi(theta_k) == psi(theta_{k-1})";
      return r;
    }
  }
  return r;
}

/// Lengths with the empty palindrome prepended: n_0 = 0.
inline std::vector<std::size_t> with_empty(const std::vector<std::size_t>& lengths) {
  std::vector<std::size_t> n{0};
  n.insert(n.end(), lengths.begin(), lengths.end());
  return n;
}

struct PsiExtraction {
  PsiFunction psi;                    // exceptions hold every verified value
  std::vector<std::size_t> lengths;   // n_0 = 0, n_1, ...
  std::vector<std::size_t> failures;  // indices i where the recurrence does not hold
};

/// Reads psi off the palindromic prefixes of `w`: psi(i) = j where
/// n_j = 2 n_i - n_{i+1}, checked letter by letter. Failures at indices
/// >= `threshold` raise not-in-W.
inline PsiExtraction psi_from_word(const Symbols& w, std::size_t threshold = 8) {
  auto table = palindromic_prefix_lengths(w);
  if (table.lengths.size() < 4) {
    fail(ErrorKind::kInsufficientData, "psi_from_word: fewer than 4 palindromic prefixes");
  }
  PsiExtraction out;
  out.lengths = with_empty(table.lengths);
  const auto& n = out.lengths;
  std::map<std::size_t, std::size_t> index_of;
  for (std::size_t j = 0; j < n.size(); ++j) index_of[n[j]] = j;

  std::size_t cmax = 1;
  for (std::size_t i = 1; i + 1 < n.size(); ++i) {
    bool ok = 2 * n[i] >= n[i + 1];
    std::size_t j = 0;
    if (ok) {
      auto it = index_of.find(2 * n[i] - n[i + 1]);
      ok = it != index_of.end() && it->second < i;
      if (ok) j = it->second;
    }
    // pi_{i+1} = pi_i followed by pi_i without its first n_j letters.
    if (ok) ok = std::equal(w.begin() + static_cast<std::ptrdiff_t>(n[i]),
                            w.begin() + static_cast<std::ptrdiff_t>(n[i + 1]),
                            w.begin() + static_cast<std::ptrdiff_t>(n[j]));
    if (!ok) {
      out.failures.push_back(i);
      continue;
    }
    out.psi.exceptions[i] = j;
    if (i >= threshold) cmax = std::max(cmax, i - j);
  }
  if (!out.failures.empty() && out.failures.back() >= threshold) {
    fail(ErrorKind::kAssertion, "psi_from_word: not-in-W, recurrence fails at index " +
                                    std::to_string(out.failures.back()));
  }
  out.psi.defined_up_to = n.size() - 2;
  out.psi.start = out.failures.empty() ? 1 : out.failures.back() + 1;
  out.psi.c = cmax;
  for (const auto& [i, v] : out.psi.exceptions) {
    if (i >= out.psi.start) out.psi.c = std::max(out.psi.c, i - v);
  }
  return out;
}

struct PsiWord {
  Symbols word;                       // pi_last, of length >= max_length
  std::vector<std::size_t> lengths;   // n_0 = 0, n_1, ... of the generated pi_i
  std::size_t seed_depth = 0;         // pi_1..pi_r come from the seed
  bool periodic_flag = false;         // no theta index in the generated range
  bool exact = false;                 // the generated lengths are all the palindromic prefixes
};

/// Builds a word with psi as its palindromic recurrence. The seed is the
/// Zimin word of depth r = max(2, c, start): pi_1 = a, pi_{k+1} = pi_k x_{k+1} pi_k
/// with a new letter at each level; from i = r on,
/// pi_{i+1} = pi_i pi_{psi(i)}^{-1} pi_i. Values of psi below r are ignored:
/// offsets of 1 there would make the word periodic for good.
inline PsiWord word_from_psi(const PsiFunction& psi, std::size_t max_length) {
  if (max_length == 0) fail(ErrorKind::kPrecondition, "word_from_psi: max_length must be >= 1");
  PsiWord out;
  const std::size_t r = std::max({std::size_t{2}, psi.c, psi.start});
  Symbols pi{0};
  out.lengths = {0, 1};
  for (std::size_t k = 1; k < r && pi.size() < max_length; ++k) {
    if (k > 255) fail(ErrorKind::kConfig, "word_from_psi: seed too deep for the alphabet");
    Symbols next = pi;
    next.push_back(static_cast<Symbol>(k));
    next.insert(next.end(), pi.begin(), pi.end());
    pi.swap(next);
    out.lengths.push_back(pi.size());
  }
  out.seed_depth = out.lengths.size() - 1;
  bool any_theta = false;
  for (std::size_t i = r; pi.size() < max_length; ++i) {
    if (psi.defined_up_to && i > *psi.defined_up_to) {
      fail(ErrorKind::kInsufficientData, "word_from_psi: psi undefined at " + std::to_string(i));
    }
    std::size_t j = psi(i);
    if (j >= i) fail(ErrorKind::kPrecondition, "word_from_psi: psi(i) >= i");
    if (i - j >= 2) any_theta = true;
    const std::size_t nj = out.lengths[j];
    pi.insert(pi.end(), pi.begin() + static_cast<std::ptrdiff_t>(nj),
              pi.begin() + static_cast<std::ptrdiff_t>(out.lengths[i]));
    out.lengths.push_back(pi.size());
  }
  out.periodic_flag = !any_theta;
  auto table = palindromic_prefix_lengths(pi);
  for (std::size_t k = 1; k < out.lengths.size(); ++k) {
    if (!std::binary_search(table.lengths.begin(), table.lengths.end(), out.lengths[k])) {
      fail(ErrorKind::kAssertion, "word_from_psi: seed-incompatible, generated length " +
                                      std::to_string(out.lengths[k]) + " is not a palindrome");
    }
  }
  out.exact = table.lengths.size() == out.lengths.size() - 1;
  out.word = std::move(pi);
  return out;
}

/// Ratio estimate for psi, plus the checks made along the way.
struct PsiDelta {
  DeltaEstimate estimate;
  std::vector<Integer> m;         // m_0 = 0, m_1 = 1, m_2 = 2, ...
  std::size_t gap_bound = 0;      // B: theta gaps and offsets at theta bounded by it
  bool lower_growth_ok = false;   // m_{i+1} >= (1 + 2^{-B}) m_i on the window
};

/// delta(psi) from m_{i+1} = 2 m_i - m_{psi(i)}, seeded m_1 = 1, m_2 = 2 and
/// forced increasing (m_{i+1} >= m_i + 1) before psi.start.
inline PsiDelta delta_of_psi(const PsiFunction& psi, std::size_t horizon, double tail_fraction = 0.5) {
  horizon = psi.usable(horizon);
  if (horizon < 4) fail(ErrorKind::kInsufficientData, "delta_of_psi: horizon too small");
  PsiDelta out;
  auto& m = out.m;
  m = {Integer(0), Integer(1), Integer(2)};
  for (std::size_t i = 2; i < horizon; ++i) {
    Integer next = 2 * m[i] - m[psi(i)];
    if (i < psi.start && next <= m[i]) next = m[i] + 1;
    if (next <= m[i]) {
      fail(ErrorKind::kAssertion, "delta_of_psi: non-increasing-sequence at " + std::to_string(i));
    }
    m.push_back(std::move(next));
  }
  std::vector<double> trace;
  for (std::size_t i = 1; i + 1 < m.size(); ++i) {
    trace.push_back(std::exp(log_abs(m[i + 1]) - log_abs(m[i])));
  }
  out.estimate = summarize_ratios(std::move(trace), tail_fraction);

  auto th = theta_sequence(psi, horizon);
  const std::size_t from = out.estimate.window_begin + 1;  // ratio k is m_{k+2}/m_{k+1}
  std::size_t b = 0;
  for (std::size_t k = 1; k < th.size(); ++k) {
    if (th[k] < from) continue;
    b = std::max({b, psi.offset(th[k]), th[k] - th[k - 1] + 1});
  }
  out.gap_bound = b;
  if (b > 0 && b < 60) {
    const double floor_ratio = 1.0 + std::ldexp(1.0, -static_cast<int>(b));
    out.lower_growth_ok = out.estimate.liminf >= floor_ratio;
  }
  return out;
}

struct PsiEquivalence {
  bool equivalent = false;
  long shift = 0;            // psi(i) - i = psi2(i - shift) - (i - shift) for i >= i1
  std::size_t i1 = 0;
};

/// Searches |shift| <= max_shift for agreement of offsets from some i1 up to
/// hi, the last index both functions know (at most `horizon`), with i1 <= hi / 2.
inline PsiEquivalence psi_equivalent(const PsiFunction& a, const PsiFunction& b, std::size_t horizon,
                                     long max_shift = 32) {
  PsiEquivalence best;
  for (long d = 0; d <= max_shift; ++d) {
    for (long shift : {d, -d}) {
      if (d == 0 && shift < 0) continue;
      // indices i of a, i - shift of b, both within their usable ranges
      long hi = static_cast<long>(a.usable(horizon));
      hi = std::min(hi, static_cast<long>(b.usable(horizon)) + shift);
      long lo = std::max(1L, 1 + shift);
      if (hi < lo) continue;
      long i = hi;
      while (i >= lo && a.offset(static_cast<std::size_t>(i)) ==
                            b.offset(static_cast<std::size_t>(i - shift))) {
        --i;
      }
      const long i1 = i + 1;
      // the agreement must cover the upper half of at least 8 indices
      if (hi >= 8 && i1 <= hi / 2) {
        best.equivalent = true;
        best.shift = shift;
        best.i1 = static_cast<std::size_t>(i1);
        return best;
      }
    }
  }
  return best;
}

/// One sampled psi with its delta.
struct SpectrumPoint {
  std::vector<std::size_t> pattern;
  double delta = 0;
  double liminf = 0;
};

/// All reduced psi with offset pattern of period <= max_period, offsets in
/// [1, max_c], not all 1, repeated from `start` on (psi(i) = i - 1 before).
inline std::vector<SpectrumPoint> spectrum_sample(std::size_t max_period, std::size_t max_c,
                                                  std::size_t horizon = 1000) {
  std::vector<SpectrumPoint> out;
  const std::size_t start = max_c + 2;
  for (std::size_t p = 1; p <= max_period; ++p) {
    std::vector<std::size_t> pat(p, 1);
    while (true) {
      bool nontrivial = std::any_of(pat.begin(), pat.end(), [](std::size_t o) { return o >= 2; });
      if (nontrivial) {
        PsiFunction psi;
        psi.start = start;
        psi.offsets_period = pat;
        psi.c = max_c;
        if (is_asymptotically_reduced(psi, start + 8 * p + 8, start + 2 * max_c).reduced) {
          auto d = delta_of_psi(psi, horizon);
          out.push_back({pat, d.estimate.value, d.estimate.liminf});
        }
      }
      std::size_t k = 0;
      while (k < p && pat[k] == max_c) pat[k++] = 1;
      if (k == p) break;
      ++pat[k];
    }
  }
  return out;
}

}  // namespace pprefix
