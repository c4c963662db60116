#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "pprefix/word.hpp"

using namespace pprefix;

namespace {

// Quadratic oracle: every n with the length-n prefix equal to its reversal.
std::vector<std::size_t> naive_lengths(const Symbols& w) {
  std::vector<std::size_t> out;
  for (std::size_t n = 1; n <= w.size(); ++n) {
    Symbols p(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(n)), r(p.rbegin(), p.rend());
    if (p == r) out.push_back(n);
  }
  return out;
}

// Mechanical word with alpha = (sqrt(s^2 + 4) - s) / 2 = [0; s, s, ...],
// floors decided with exact integer arithmetic on the quadratic:
// floor(k alpha) = largest m with m <= k alpha, i.e. 2m + k s <= k sqrt(s^2+4).
long floor_k_alpha(long k, long s) {
  long m = static_cast<long>(std::floor(k * (std::sqrt(double(s * s + 4)) - s) / 2.0)) + 1;
  auto ok = [&](long mm) {
    long lhs = 2 * mm + k * s;
    return lhs <= 0 || lhs * lhs <= k * k * (s * s + 4);
  };
  while (!ok(m)) --m;
  while (ok(m + 1)) ++m;
  return m;
}

std::string sturmian_oracle(long s, std::size_t length) {
  std::string raw;
  for (std::size_t n = 1; n <= length; ++n) {
    long c = floor_k_alpha(static_cast<long>(n) + 1, s) - floor_k_alpha(static_cast<long>(n), s);
    raw.push_back(c ? '1' : '0');
  }
  std::string out;
  for (char ch : raw) out.push_back(ch == raw[0] ? 'a' : 'b');
  return out;
}

}  // namespace

TEST(Fibonacci, Prefixes) {
  EXPECT_EQ(to_letters(generate_fibonacci(6)), "abaaba");
  EXPECT_EQ(to_letters(generate_fibonacci(1)), "a");
  EXPECT_EQ(to_letters(generate_fibonacci(13)), "abaababaabaab");
}

TEST(Fibonacci, IsSubstitutionFixedPoint) {
  Symbols w = generate_fibonacci(5000);
  Symbols img;
  for (Symbol s : w) {
    img.push_back(0);
    if (s == 0) img.push_back(1);
    if (img.size() >= w.size()) break;
  }
  img.resize(w.size());
  EXPECT_EQ(img, w);
}

TEST(Word, LazyExtensionIsStable) {
  Word w = fibonacci_word();
  Symbols a = w.prefix(10);
  Symbols b = w.prefix(1000);
  EXPECT_TRUE(std::equal(a.begin(), a.end(), b.begin()));
  EXPECT_EQ(w.at(1), 0);
  EXPECT_EQ(w.at(2), 1);
  Word lit = Word::literal(from_letters("abc"));
  EXPECT_EQ(lit.alphabet_size(), 3u);
  EXPECT_THROW(lit.prefix(4), Error);
}

TEST(Sturmian, AllOnesIsFibonacci) {
  std::vector<std::uint64_t> ones(30, 1);
  EXPECT_EQ(to_letters(generate_sturmian(ones, 6)), "abaaba");
  EXPECT_EQ(generate_sturmian(ones, 2000), generate_fibonacci(2000));
}

TEST(Sturmian, MatchesQuadraticOracle) {
  for (long s : {2L, 3L, 5L}) {
    std::vector<std::uint64_t> q(40, static_cast<std::uint64_t>(s));
    EXPECT_EQ(to_letters(generate_sturmian(q, 8)), sturmian_oracle(s, 8));
    EXPECT_EQ(to_letters(generate_sturmian(q, 3000)), sturmian_oracle(s, 3000)) << s;
  }
}

TEST(Sturmian, InsufficientQuotients) {
  EXPECT_THROW(generate_sturmian({3, 3}, 500), Error);
  try {
    generate_sturmian({3, 3}, 500);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInsufficientData);
  }
  EXPECT_NO_THROW(generate_sturmian(std::vector<std::uint64_t>(8, 3), 2000));
}

TEST(Sturmian, LazyPeriodicWord) {
  Word w = sturmian_word_periodic({}, {3});
  std::vector<std::uint64_t> q(40, 3);
  EXPECT_EQ(w.prefix(4000), generate_sturmian(q, 4000));
}

TEST(Palindromes, FibonacciForty) {
  auto t = palindromic_prefix_lengths(generate_fibonacci(40));
  EXPECT_EQ(t.lengths, (std::vector<std::size_t>{1, 3, 6, 11, 19, 32}));
  EXPECT_EQ(t.horizon, 40u);
}

TEST(Palindromes, SmallCases) {
  EXPECT_EQ(palindromic_prefix_lengths(from_letters("a")).lengths, (std::vector<std::size_t>{1}));
  EXPECT_EQ(palindromic_prefix_lengths(from_letters("abababababab")).lengths,
            (std::vector<std::size_t>{1, 3, 5, 7, 9, 11}));
  EXPECT_EQ(palindromic_prefix_lengths(from_letters("ab")).lengths, (std::vector<std::size_t>{1}));
  EXPECT_EQ(palindromic_prefix_lengths(from_letters("aaaa")).lengths, (std::vector<std::size_t>{1, 2, 3, 4}));
  EXPECT_THROW(palindromic_prefix_lengths(Symbols{}), Error);
}

// Soundness and completeness against the reversal oracle.
TEST(Palindromes, MatchesNaiveOracle) {
  std::mt19937_64 rng(29);
  for (int k = 0; k < 300; ++k) {
    std::size_t n = 1 + rng() % 300;
    std::size_t sigma = 1 + rng() % 3;
    Symbols w(n);
    for (auto& s : w) s = static_cast<Symbol>(rng() % sigma);
    EXPECT_EQ(palindromic_prefix_lengths(w).lengths, naive_lengths(w));
  }
  for (std::size_t n : {1000u, 10000u}) {
    Symbols f = generate_fibonacci(n);
    EXPECT_EQ(palindromic_prefix_lengths(f).lengths, naive_lengths(f));
    std::vector<std::uint64_t> q(40, 2);
    Symbols s = generate_sturmian(q, n);
    EXPECT_EQ(palindromic_prefix_lengths(s).lengths, naive_lengths(s));
  }
}

TEST(Delta, FibonacciNearGolden) {
  auto t = palindromic_prefix_lengths(generate_fibonacci(4000000));
  ASSERT_GE(t.lengths.size(), 20u);
  auto d = delta_of_word(t, 0.5);
  EXPECT_NEAR(d.value, (1 + std::sqrt(5.0)) / 2, 1e-3);
  EXPECT_EQ(d.ratio_trace.size(), t.lengths.size() - 1);
  double mx = 0;
  for (std::size_t i = d.window_begin; i < d.window_end; ++i) mx = std::max(mx, d.ratio_trace[i]);
  EXPECT_EQ(d.value, mx);
}

TEST(Delta, SturmianThree) {
  Word w = sturmian_word_periodic({}, {3});
  auto t = palindromic_prefix_lengths(w.prefix(400000));
  ASSERT_GE(t.lengths.size(), 20u);
  EXPECT_NEAR(delta_of_word(t, 0.5).value, 1.767, 5e-3);
}

TEST(Delta, Trivial) {
  EXPECT_EQ(delta_of_lengths({1, 2, 4, 8}).value, 2.0);
  EXPECT_THROW(delta_of_lengths({1, 2}), Error);
}

TEST(Substitute, PalindromeImages) {
  Symbols w = generate_fibonacci(200);
  Symbols image = substitute(w, {from_letters("aba"), from_letters("c")});
  auto t = palindromic_prefix_lengths(image);
  auto base = palindromic_prefix_lengths(w);
  // Each palindromic prefix of w maps to one of the image.
  for (std::size_t n : base.lengths) {
    Symbols p(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(n));
    std::size_t m = substitute(p, {from_letters("aba"), from_letters("c")}).size();
    EXPECT_TRUE(std::binary_search(t.lengths.begin(), t.lengths.end(), m)) << n;
  }
}
