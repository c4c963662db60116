#pragma once

// Palindromic prefix method: xi = [0; phi(w_1), phi(w_2), ...] and the
// symmetric convergent matrices at palindromic prefix lengths.

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pprefix/bracket.hpp"
#include "pprefix/error.hpp"
#include "pprefix/exact.hpp"
#include "pprefix/psi.hpp"
#include "pprefix/word.hpp"

namespace pprefix {

/// Symbol -> partial quotient.
using Phi = std::vector<std::uint64_t>;

inline void check_phi(const Phi& phi, std::size_t alphabet_size) {
  if (phi.size() < alphabet_size) fail(ErrorKind::kConfig, "phi does not cover the alphabet");
  std::set<std::uint64_t> seen;
  for (std::size_t s = 0; s < alphabet_size; ++s) {
    if (phi[s] == 0) fail(ErrorKind::kConfig, "phi values must be positive integers");
    if (!seen.insert(phi[s]).second) fail(ErrorKind::kConfig, "non-injective-phi");
  }
}

/// [0; phi(w_1), phi(w_2), ...]. Rejects words that look constant, since
/// those give rational or quadratic numbers.
inline ContinuedFraction build_xi_from_word(const std::shared_ptr<Word>& w, const Phi& phi) {
  check_phi(phi, w->alphabet_size());
  const std::size_t probe = w->max_length() ? std::min<std::size_t>(*w->max_length(), 1024) : 1024;
  Symbols head = w->prefix(probe);
  if (std::all_of(head.begin(), head.end(), [&](Symbol s) { return s == head.front(); })) {
    fail(ErrorKind::kConfig, "build_xi_from_word: constant word gives a rational or quadratic number");
  }
  return ContinuedFraction(Integer(0), [w, phi](std::size_t n) { return phi[w->at(n)]; },
                           w->max_length());
}

/// v_i = (q_{n_i}, p_{n_i}, p_{n_i - 1}) for the palindromic lengths n_i,
/// with v_0 = (1, 0, 1) for the empty palindrome.
struct ApproximantSequence {
  std::vector<Triple> v;
  std::vector<std::size_t> lengths;    // n_0 = 0, n_1, ...
  std::vector<Integer> det;            // det2(v_i) = (-1)^{n_i}
  std::vector<RationalInterval> L;     // enclosures of L(v_i)
  Symbols prefix;                      // covers n_last
  Phi phi;
  std::string word_name;
  std::shared_ptr<ConvergentStream> stream;
  RealEnclosure xi{Rational(0), Rational(0)};

  std::size_t size() const { return v.size(); }
  std::vector<Integer> norms() const {
    std::vector<Integer> out;
    for (const auto& t : v) out.push_back(t.norm());
    return out;
  }
};

/// The first `count` palindromic prefixes of w give v_1..v_count.
inline ApproximantSequence palindromic_approximants(const std::shared_ptr<Word>& w, const Phi& phi,
                                                    std::size_t count) {
  if (count == 0) fail(ErrorKind::kPrecondition, "palindromic_approximants: count must be >= 1");
  ContinuedFraction cf = build_xi_from_word(w, phi);
  ApproximantSequence seq;
  seq.phi = phi;
  seq.word_name = w->name();

  std::size_t horizon = 64;
  PalindromicPrefixTable table;
  while (true) {
    if (w->max_length()) horizon = std::min(horizon, *w->max_length());
    table = palindromic_prefix_lengths(w->prefix(horizon));
    if (table.lengths.size() >= count) break;
    if (w->max_length() && horizon == *w->max_length()) {
      fail(ErrorKind::kInsufficientData, "word has only " + std::to_string(table.lengths.size()) +
                                             " palindromic prefixes");
    }
    if (horizon > (std::size_t{1} << 32)) fail(ErrorKind::kInsufficientData, "too few palindromic prefixes");
    horizon *= 2;
  }
  table.lengths.resize(count);
  seq.lengths = with_empty(table.lengths);
  seq.prefix = w->prefix(seq.lengths.back());

  seq.stream = std::make_shared<ConvergentStream>(cf);
  for (std::size_t n : seq.lengths) {
    ConvergentState s = seq.stream->state_at(n);
    if (s.q_prev != s.p) {
      fail(ErrorKind::kAssertion, "symmetry-violation at palindromic length " + std::to_string(n));
    }
    seq.v.emplace_back(s.q, s.p, s.p_prev);
    seq.det.push_back(det2(seq.v.back()));
  }

  const std::size_t n_last = seq.lengths.back();
  // width ~ 1 / q_idx^2 leaves L(v_i) ~ 1 / q_{n_i} with ~64 correct bits
  std::size_t idx = n_last + 64;
  if (cf.length()) idx = std::min(idx, *cf.length());
  seq.xi = RealEnclosure(seq.stream, idx);

  for (std::size_t i = 0; i < seq.v.size(); ++i) {
    seq.L.push_back(eval_L(seq.v[i], seq.xi));
    if (i == 0) continue;
    // |q xi - p| <= 1/q and the symmetric form give L(v_i) <= (1 + xi) / q_{n_i - 1}.
    Rational bound = (1 + seq.xi.hi()) / Rational(seq.v[i].x1);
    if (seq.L[i].hi > bound) {
      fail(ErrorKind::kAssertion, "approximant " + std::to_string(i) + " exceeds the convergent L bound");
    }
  }
  return seq;
}

struct RecurrenceFailure {
  std::size_t i = 0;
  bool below_grace = false;
  std::string reason;
};

struct RecurrenceReport {
  std::size_t checked = 0;
  std::vector<RecurrenceFailure> failures;
  std::size_t failures_above_grace() const {
    std::size_t k = 0;
    for (const auto& f : failures) k += f.below_grace ? 0 : 1;
    return k;
  }
};

/// [v_i, v_i, v_{i+1}] = +-v_{psi(i)} for every i with v_{i+1} and psi(i) known.
inline RecurrenceReport verify_bracket_recurrence(const ApproximantSequence& seq, const PsiFunction& psi,
                                                  std::size_t grace) {
  RecurrenceReport rep;
  for (std::size_t i = 1; i + 1 < seq.size(); ++i) {
    if (psi.defined_up_to && i > *psi.defined_up_to) break;
    std::size_t j = psi(i);
    ++rep.checked;
    Triple b = bracket(seq.v[i], seq.v[i], seq.v[i + 1]);
    std::string why;
    if (!is_collinear(b, seq.v[j])) {
      why = "bracket not collinear to v_psi(i)";
    } else if (b != seq.v[j] && b != -seq.v[j]) {
      why = "bracket collinear but not +-v_psi(i)";
    }
    if (!why.empty()) rep.failures.push_back({i, i < grace, why});
  }
  return rep;
}

struct PalindromeDependenceReport {
  bool palindrome = false;     // prefix of length n_i0 + n_i1 - n_i2 is a palindrome
  bool dependent = false;      // det3(v_i0, v_i1, v_i2) = 0
  bool matrix_identity = false;  // M_i0 adj(M_i2) M_i1 = det(M_i2) M
  bool bracket_identity = false; // [v_i0, v_i1, v_i2] = +-v for the same prefix
  std::size_t length = 0;
  bool agree() const { return palindrome == dependent; }
};

/// Both sides of the palindrome / dependence equivalence for one index triple.
inline PalindromeDependenceReport palindrome_dependence_check(const ApproximantSequence& seq, std::size_t i0,
                                                              std::size_t i1, std::size_t i2) {
  if (std::max({i0, i1, i2}) >= seq.size()) {
    fail(ErrorKind::kPrecondition, "palindrome_dependence_check: index out of range");
  }
  const auto& n = seq.lengths;
  if (n[i2] < std::min(n[i0], n[i1]) || n[i2] > n[i0] + n[i1]) {
    fail(ErrorKind::kPrecondition, "palindrome_dependence_check: need min(n_i0, n_i1) <= n_i2 <= n_i0 + n_i1");
  }
  PalindromeDependenceReport r;
  r.length = n[i0] + n[i1] - n[i2];
  if (r.length > seq.prefix.size()) fail(ErrorKind::kPrecondition, "palindrome_dependence_check: prefix too short");
  r.palindrome = is_palindrome(seq.prefix, r.length);
  r.dependent = det3(seq.v[i0], seq.v[i1], seq.v[i2]) == 0;
  if (r.palindrome && r.dependent) {
    Matrix2 m = seq.stream->state_at(r.length).quotient_product();
    Matrix2 m0 = Matrix2::of(seq.v[i0]), m1 = Matrix2::of(seq.v[i1]), m2 = Matrix2::of(seq.v[i2]);
    r.matrix_identity = m0 * m2.adjugate() * m1 == m2.det() * m;
    Triple b = bracket(seq.v[i0], seq.v[i1], seq.v[i2]);
    Triple t = m.as_triple();
    r.bracket_identity = m.is_symmetric() && (b == t || b == -t);
  }
  return r;
}

struct PsiFromPoints {
  PsiFunction psi;                     // exceptions hold every matched t
  std::vector<std::size_t> not_found;
};

/// psi(t) is the index of the earlier point collinear to [u_t, u_t, u_{t+1}],
/// searched backwards from t - 1.
inline PsiFromPoints extract_psi_from_points(const std::vector<Triple>& u) {
  PsiFromPoints out;
  std::size_t cmax = 1;
  for (std::size_t t = 1; t + 1 < u.size(); ++t) {
    if (det2(u[t]) == 0) fail(ErrorKind::kPrecondition, "extract_psi_from_points: det(u_t) = 0");
    Triple b = primitive_normalize(bracket(u[t], u[t], u[t + 1]));
    std::optional<std::size_t> hit;
    for (std::size_t s = t; s-- > 0;) {
      if (is_collinear(b, u[s])) {
        hit = s;
        break;
      }
    }
    if (!hit) {
      out.not_found.push_back(t);
      continue;
    }
    out.psi.exceptions[t] = *hit;
    cmax = std::max(cmax, t - *hit);
  }
  out.psi.c = cmax;
  out.psi.start = out.not_found.empty() ? 1 : out.not_found.back() + 1;
  out.psi.defined_up_to = u.size() >= 2 ? u.size() - 2 : 0;
  return out;
}

/// Indices i with det3(u_{i-1}, u_i, u_{i+1}) != 0.
inline std::vector<std::size_t> corner_indices(const std::vector<Triple>& u) {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i + 1 < u.size(); ++i) {
    if (det3(u[i - 1], u[i], u[i + 1]) != 0) out.push_back(i);
  }
  return out;
}

/// Corners together with their successors, in increasing order.
inline std::vector<std::size_t> corner_and_successor_indices(const std::vector<Triple>& u) {
  std::set<std::size_t> s;
  for (std::size_t i : corner_indices(u)) {
    s.insert(i);
    if (i + 1 < u.size()) s.insert(i + 1);
  }
  return {s.begin(), s.end()};
}

}  // namespace pprefix
