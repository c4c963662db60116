#include <gtest/gtest.h>

#include <cmath>

#include "pprefix/psi.hpp"

using namespace pprefix;

namespace {

const double kGolden = (1 + std::sqrt(5.0)) / 2;
const double kSigma2 = 1 + std::sqrt(2.0) / 2;

Symbols sturmian(std::uint64_t s, std::size_t n) {
  return generate_sturmian(std::vector<std::uint64_t>(60, s), n);
}

// All offset patterns of period <= 4 with entries in [1, c], tail from `start`.
std::vector<PsiFunction> periodic_family(std::size_t max_period, std::size_t max_c, std::size_t start) {
  std::vector<PsiFunction> out;
  for (std::size_t p = 1; p <= max_period; ++p) {
    std::vector<std::size_t> pat(p, 1);
    while (true) {
      PsiFunction psi;
      psi.start = start;
      psi.offsets_period = pat;
      psi.c = max_c;
      out.push_back(psi);
      std::size_t k = 0;
      while (k < p && pat[k] == max_c) pat[k++] = 1;
      if (k == p) break;
      ++pat[k];
    }
  }
  return out;
}

bool in_F(const PsiFunction& psi, std::size_t horizon) {
  return !theta_sequence(psi, horizon).empty() &&
         theta_sequence(psi, horizon).back() > horizon / 2 &&
         is_asymptotically_reduced(psi, horizon, psi.start + 2 * psi.c).reduced;
}

}  // namespace

TEST(PsiFromWord, Fibonacci) {
  auto ex = psi_from_word(generate_fibonacci(100000));
  for (const auto& [i, j] : ex.psi.exceptions) {
    if (i >= 3) {
      EXPECT_EQ(j, i - 2) << i;
    }
  }
  EXPECT_EQ(ex.failures, (std::vector<std::size_t>{1}));
}

TEST(PsiFromWord, SturmianTwoMatchesFormulaUpToShift) {
  auto ex = psi_from_word(sturmian(2, 100000));
  EXPECT_TRUE(psi_equivalent(ex.psi, sturmian_psi(2), 40).equivalent);
  // offsets are 3 at every other index and 1 elsewhere
  std::size_t threes = 0, ones = 0;
  for (const auto& [i, j] : ex.psi.exceptions) {
    if (i < 5) continue;
    (i - j == 3 ? threes : ones) += 1;
    EXPECT_TRUE(i - j == 3 || i - j == 1);
  }
  EXPECT_NEAR(double(threes), double(ones), 1.0);
}

TEST(PsiFromWord, SturmianThreeOffsets) {
  auto ex = psi_from_word(sturmian(3, 100000));
  auto eq = psi_equivalent(ex.psi, sturmian_psi(3), 30);
  EXPECT_TRUE(eq.equivalent);
  auto th = theta_sequence(ex.psi, *ex.psi.defined_up_to);
  for (std::size_t k = 1; k < th.size(); ++k) {
    if (th[k] < 8) continue;
    EXPECT_EQ(th[k] - th[k - 1], 3u);
    EXPECT_EQ(ex.psi.offset(th[k]), 4u);
  }
}

TEST(PsiFromWord, RecurrenceArithmetic) {
  // lengths 1, 3, 6, 11: psi at the index of 6 is the index of 1
  auto ex = psi_from_word(generate_fibonacci(12));
  EXPECT_EQ(ex.lengths[3], 6u);
  EXPECT_EQ(ex.psi(3), 1u);
}

TEST(PsiFromWord, NotInW) {
  // a^k b a^k b ... has palindromic prefixes a, aa, ..., without the recurrence
  Symbols w;
  for (int r = 0; r < 30; ++r) {
    for (int k = 0; k < r + 1; ++k) w.push_back(0);
    w.push_back(1);
  }
  EXPECT_THROW(psi_from_word(w, 3), Error);
}

TEST(WordFromPsi, FibonacciRule) {
  auto pw = word_from_psi(constant_offset_psi(2, 2), 5000);
  Symbols f = generate_fibonacci(pw.word.size());
  EXPECT_EQ(pw.word, f);
  EXPECT_FALSE(pw.periodic_flag);
}

TEST(WordFromPsi, ConstantOneIsFlagged) {
  PsiFunction psi;  // psi(i) = i - 1 everywhere
  auto pw = word_from_psi(psi, 200);
  EXPECT_TRUE(pw.periodic_flag);
  for (std::size_t i = 2; i + 1 < pw.lengths.size(); ++i) {
    EXPECT_EQ(pw.lengths[i + 1] - pw.lengths[i], pw.lengths[i] - pw.lengths[i - 1]);
  }
  EXPECT_TRUE(theta_sequence(psi, 100).empty());
}

TEST(WordFromPsi, RecurrenceConsistency) {
  for (const auto& psi : periodic_family(3, 4, 6)) {
    auto pw = word_from_psi(psi, 3000);
    for (std::size_t i = pw.seed_depth; i + 1 < pw.lengths.size(); ++i) {
      EXPECT_EQ(pw.lengths[i + 1], 2 * pw.lengths[i] - pw.lengths[psi(i)]);
    }
  }
}

// psi_from_word . word_from_psi is the identity modulo R on reduced psi
// with c <= 5, compared up to index 200 or as far as the word reaches.
TEST(WordFromPsi, RoundTrip) {
  std::size_t tested = 0;
  for (std::size_t c : {2u, 3u, 4u, 5u}) {
    for (const auto& psi : periodic_family(c == 5 ? 2 : 3, c, c + 2)) {
      if (!in_F(psi, 200)) continue;
      auto pw = word_from_psi(psi, 300000);
      EXPECT_TRUE(pw.exact);
      auto back = psi_from_word(pw.word, pw.seed_depth + 1);
      ASSERT_GE(*back.psi.defined_up_to, 15u);
      auto eq = psi_equivalent(back.psi, psi, 200);
      EXPECT_TRUE(eq.equivalent) << "c=" << c;
      ++tested;
    }
  }
  EXPECT_GT(tested, 50u);
}

TEST(WordFromPsi, SturmianThreeRoundTrip) {
  auto pw = word_from_psi(sturmian_psi(3), 50000);
  auto back = psi_from_word(pw.word, 8);
  EXPECT_TRUE(psi_equivalent(back.psi, sturmian_psi(3), *back.psi.defined_up_to).equivalent);
}

TEST(Theta, Examples) {
  auto th = theta_sequence(constant_offset_psi(2, 3), 10);
  EXPECT_EQ(th, (std::vector<std::size_t>{3, 4, 5, 6, 7, 8, 9, 10}));
  auto t3 = theta_sequence(sturmian_psi(3), 20);
  EXPECT_EQ(t3, (std::vector<std::size_t>{6, 9, 12, 15, 18}));
}

TEST(Reduced, Examples) {
  EXPECT_TRUE(is_asymptotically_reduced(constant_offset_psi(2, 3), 1000, 1).reduced);
  EXPECT_TRUE(is_asymptotically_reduced(sturmian_psi(2), 1000, 1).reduced);
  EXPECT_TRUE(is_asymptotically_reduced(PsiFunction{}, 1000, 1).reduced);
  // psi(theta_k) = psi(theta_{k-1}) at theta = 20, 21
  PsiFunction bad = constant_offset_psi(2, 3);
  bad.exceptions[21] = 18;
  bad.c = 3;
  auto r = is_asymptotically_reduced(bad, 1000, 1);
  EXPECT_FALSE(r.reduced);
  EXPECT_EQ(r.index, 21u);
}

TEST(DeltaPsi, Anchors) {
  auto fib = delta_of_psi(constant_offset_psi(2, 3), 1000);
  EXPECT_NEAR(fib.estimate.value, kGolden, 1e-6);
  auto s2 = delta_of_psi(sturmian_psi(2), 1000);
  EXPECT_NEAR(s2.estimate.value, kSigma2, 1e-3);
  auto s3 = delta_of_psi(sturmian_psi(3), 1000);
  EXPECT_NEAR(s3.estimate.value, 1.767, 1e-3);
  for (const auto* d : {&fib, &s2, &s3}) {
    EXPECT_GT(d->estimate.liminf, 1.0);
    EXPECT_TRUE(d->lower_growth_ok);
    for (std::size_t i = 1; i + 1 < d->m.size(); ++i) ASSERT_LT(d->m[i], d->m[i + 1]);
  }
}

TEST(DeltaPsi, FactorsThroughR) {
  // The same rule started at different indices, and an extracted psi.
  auto a = delta_of_psi(sturmian_psi(3), 1000).estimate.value;
  PsiFunction shifted = sturmian_psi(3);
  shifted.start = 12;
  shifted.offsets_period = {1, 4, 1};
  ASSERT_TRUE(psi_equivalent(sturmian_psi(3), shifted, 1000).equivalent);
  auto b = delta_of_psi(shifted, 1000).estimate.value;
  EXPECT_NEAR(a, b, 1e-6);
  for (const auto& psi : periodic_family(3, 3, 5)) {
    if (!in_F(psi, 400)) continue;
    PsiFunction later = psi;
    later.exceptions.clear();
    later.start = psi.start + 3;
    // rotate the period so offsets agree with psi from the new start
    std::rotate(later.offsets_period.begin(),
                later.offsets_period.begin() + static_cast<long>(3 % psi.offsets_period.size()),
                later.offsets_period.end());
    ASSERT_TRUE(psi_equivalent(psi, later, 1000).equivalent);
    EXPECT_NEAR(delta_of_psi(psi, 1000).estimate.value, delta_of_psi(later, 1000).estimate.value, 1e-6);
  }
}

TEST(Equivalent, Examples) {
  auto self = psi_equivalent(sturmian_psi(2), sturmian_psi(2), 200);
  EXPECT_TRUE(self.equivalent);
  EXPECT_EQ(self.shift, 0);
  auto later = psi_equivalent(constant_offset_psi(2, 3), constant_offset_psi(2, 9), 200);
  EXPECT_TRUE(later.equivalent);
  EXPECT_FALSE(psi_equivalent(constant_offset_psi(2, 3), sturmian_psi(2), 200).equivalent);
  EXPECT_FALSE(psi_equivalent(sturmian_psi(2), sturmian_psi(3), 200).equivalent);
}

TEST(Spectrum, GapBetweenGoldenAndSigma2) {
  auto pts = spectrum_sample(4, 4);
  ASSERT_GT(pts.size(), 50u);
  double mn = 10;
  for (const auto& p : pts) {
    EXPECT_FALSE(p.delta > kGolden + 0.01 && p.delta < kSigma2 - 0.01);
    mn = std::min(mn, p.delta);
  }
  EXPECT_NEAR(mn, kGolden, 1e-6);
}

TEST(Psi, Validation) {
  PsiFunction p;
  p.exceptions[4] = 4;
  EXPECT_THROW(p.validate(10), Error);
  PsiFunction q = constant_offset_psi(3, 5);
  q.c = 2;
  EXPECT_THROW(q.validate(10), Error);
}
