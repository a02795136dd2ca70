#include <gtest/gtest.h>

#include "brandt/brandt_matrix.hpp"
#include "support.hpp"

using namespace brandt;
using namespace testing_support;

TEST(BrandtMatrix, LevelElevenExamples) {
  const auto& L = level(11);
  const BrandtMatrix& B2 = L.family.at(2);
  EXPECT_EQ(B2.entries, (std::vector<std::int64_t>{0, 3, 2, 1}));
  EXPECT_EQ(L.family.at(1).entries, (std::vector<std::int64_t>{1, 0, 0, 1}));
  EXPECT_EQ(L.family.at(11).trace(), to_int64(numerator(trace_brandt_closed_form(11, 11))));
}

TEST(BrandtMatrix, LevelThirtySevenSpectrumOfB2) {
  // Eigenvalues 3 (Eisenstein), 0 and -2 (the two newforms).
  const auto& B = level(37).family.at(2);
  const IntMatrix sq = matmul(B.entries, B.entries, 3);
  EXPECT_EQ(B.trace(), 1);
  EXPECT_EQ(sq[0] + sq[4] + sq[8], 9 + 4);
  const IntMatrix cube = matmul(sq, B.entries, 3);
  EXPECT_EQ(cube[0] + cube[4] + cube[8], 27 - 8);
}

TEST(BrandtMatrix, ThetaCountsMatchBoxEnumeration) {
  for (std::int64_t N : {11, 23, 37}) {
    const auto& data = *level(N).classdata;
    const Order& O = data.maximal_order;
    for (const auto& I : data.classes)
      for (const auto& J : data.classes) {
        const Lattice P = product(O, conjugate(O, J.ideal), I.ideal);
        ASSERT_EQ(P.denominator, 1);
        const auto counts = theta_counts(O, I.ideal, J.ideal, 12);
        EXPECT_EQ(counts[0], 0);
        for (std::int64_t m = 1; m <= 12; ++m)
          ASSERT_EQ(counts[static_cast<std::size_t>(m)], box_count(P.basis, O.trace_form(), 2 * I.norm * J.norm * m))
              << N << " m=" << m;
        EXPECT_EQ(theta_count(O, I.ideal, J.ideal, 7), counts[7]);
      }
  }
}

TEST(BrandtMatrix, EntriesAreThetaCountsOverUnits) {
  const auto& data = *level(43).classdata;
  const auto& fam = level(43).family;
  for (std::size_t i = 0; i < data.size(); ++i)
    for (std::size_t j = 0; j < data.size(); ++j) {
      const auto counts = theta_counts(data.maximal_order, data.classes[i].ideal, data.classes[j].ideal, 10);
      for (std::int64_t m = 1; m <= 10; ++m) {
        const std::int64_t c = counts[static_cast<std::size_t>(m)];
        ASSERT_EQ(c % (2 * data.classes[j].weight), 0);
        EXPECT_EQ(fam.at(m)(i, j), c / (2 * data.classes[j].weight));
      }
    }
}

TEST(BrandtMatrix, SingleIndexAgreesWithFamily) {
  const auto& L = level(29);
  EXPECT_EQ(brandt_matrix(*L.classdata, 6), L.family.at(6));
  EXPECT_THROW(brandt_matrix(*L.classdata, 0), std::invalid_argument);
}

TEST(BrandtMatrix, InvariantsHoldOverASweepOfLevels) {
  for (std::int64_t N : primes_between(5, 61)) {
    const auto& fam = level(N).family;
    const auto rep = verify_brandt_family(fam, 50);
    EXPECT_TRUE(rep.all_pass()) << N;
    EXPECT_GT(rep.rows.size(), 0u);
  }
}

TEST(BrandtMatrix, TraceEqualsHurwitzSum) {
  for (std::int64_t N : primes_between(5, 47)) {
    const auto& fam = level(N).family;
    for (std::int64_t m = 1; m <= 50; ++m)
      ASSERT_EQ(Rational(fam.at(m).trace()), trace_brandt_closed_form(N, m)) << N << " " << m;
  }
}

TEST(BrandtMatrix, RowSumsAndAdjointness) {
  for (std::int64_t N : {11, 37, 59}) {
    const auto& fam = level(N).family;
    const auto w = fam.classdata->weights();
    const std::size_t n = fam.size();
    for (std::int64_t m = 1; m <= 50; ++m) {
      const auto& B = fam.at(m);
      for (std::size_t i = 0; i < n; ++i) {
        std::int64_t row = 0;
        for (std::size_t j = 0; j < n; ++j) {
          row += B(i, j);
          ASSERT_EQ(w[j] * B(i, j), w[i] * B(j, i));
          ASSERT_GE(B(i, j), 0);
        }
        ASSERT_EQ(row, sigma_N(m, N));
      }
    }
  }
}

TEST(BrandtFamily, EnsureExtendsAndAtRejectsMissingIndex) {
  auto fam = make_family(level(11).classdata, 5);
  EXPECT_EQ(fam.max_index(), 5);
  EXPECT_THROW(fam.at(6), std::out_of_range);
  fam.ensure(9);
  EXPECT_EQ(fam.max_index(), 9);
  EXPECT_EQ(fam.at(9), level(11).family.at(9));
}

TEST(BrandtFamily, VerificationDetectsACorruptedMatrix) {
  auto fam = make_family(level(37).classdata, 12);
  fam.matrices.at(6)(0, 1) += 1;
  EXPECT_FALSE(verify_brandt_family(fam, 12).all_pass());
}
