#include <gtest/gtest.h>

#include <algorithm>

#include "brandt/eigenforms.hpp"
#include "support.hpp"

using namespace brandt;
using namespace testing_support;

namespace {

struct Curve {
  std::int64_t a1, a2, a3, a4, a6;
};

// a_p = p + 1 - #E(F_p), counting affine points of the Weierstrass model plus infinity.
std::int64_t curve_ap(const Curve& E, std::int64_t p) {
  auto md = [p](std::int64_t v) { return ((v % p) + p) % p; };
  std::int64_t affine = 0;
  for (std::int64_t x = 0; x < p; ++x)
    for (std::int64_t y = 0; y < p; ++y) {
      const std::int64_t lhs = md(y * y + E.a1 * x * y + E.a3 * y);
      const std::int64_t rhs = md(x * x * x + E.a2 * x * x + E.a4 * x + E.a6);
      affine += lhs == rhs;
    }
  return p - affine;
}

// Coefficients of q prod (1 - q^n)^2 (1 - q^{11n})^2 up to q^M.
std::vector<std::int64_t> eta_product_11(std::int64_t M) {
  std::vector<std::int64_t> c(static_cast<std::size_t>(M + 1), 0);
  c[0] = 1;
  auto times_one_minus = [&](std::int64_t k) {
    for (std::int64_t i = M; i >= k; --i) c[static_cast<std::size_t>(i)] -= c[static_cast<std::size_t>(i - k)];
  };
  for (std::int64_t n = 1; n <= M; ++n) {
    times_one_minus(n);
    times_one_minus(n);
    if (11 * n <= M) {
      times_one_minus(11 * n);
      times_one_minus(11 * n);
    }
  }
  std::vector<std::int64_t> a(static_cast<std::size_t>(M + 1), 0);
  for (std::int64_t m = 1; m <= M; ++m) a[static_cast<std::size_t>(m)] = c[static_cast<std::size_t>(m - 1)];
  return a;
}

double as_double(const Real& x) { return x.convert_to<double>(); }

}  // namespace

TEST(Eigenbasis, LevelElevenForm) {
  const auto& forms = level(11).forms;
  ASSERT_EQ(forms.size(), 1u);
  const auto& f = forms[0];
  EXPECT_EQ(f.label, "11.1");
  const Real r5 = 1 / boost::multiprecision::sqrt(Real(5));
  EXPECT_LT(as_double(abs(f.lambda[0] - r5)), 1e-30);
  EXPECT_LT(as_double(abs(f.lambda[1] + r5)), 1e-30);
  EXPECT_EQ(f.a(1), 1);
  EXPECT_EQ(f.a(2), -2);
  EXPECT_EQ(f.a(11), 1);
  EXPECT_EQ(f.sign_at_level(Real("1e-9")), std::optional<int>(1));
  EXPECT_LT(as_double(f.error_bound), 1e-30);
}

TEST(Eigenbasis, LevelElevenMatchesEtaProduct) {
  const auto& f = level(11).forms[0];
  const auto a = eta_product_11(50);
  for (std::int64_t m = 1; m <= 50; ++m) EXPECT_EQ(f.a(m), a[static_cast<std::size_t>(m)]) << m;
}

TEST(Eigenbasis, MatchesPointCountsOfRationalCurves) {
  const std::map<std::int64_t, std::vector<Curve>> curves{
      {11, {{0, -1, 1, -10, -20}}},
      {17, {{1, -1, 1, -1, -14}}},
      {19, {{0, 1, 1, -9, -15}}},
      {37, {{0, 0, 1, -1, 0}, {0, 1, 1, -23, -50}}},
  };
  for (const auto& [N, list] : curves) {
    const auto& forms = level(N).forms;
    ASSERT_EQ(forms.size(), list.size());
    std::vector<bool> used(forms.size(), false);
    for (const auto& E : list) {
      std::size_t matches = 0;
      for (std::size_t k = 0; k < forms.size(); ++k) {
        bool all = true;
        for (std::int64_t p : primes_between(2, 50)) all = all && forms[k].a(p) == curve_ap(E, p);
        if (all && !used[k]) {
          used[k] = true;
          ++matches;
        }
      }
      EXPECT_EQ(matches, 1u) << N;
    }
  }
}

TEST(Eigenbasis, LevelThirtySevenVectors) {
  const auto& forms = level(37).forms;
  ASSERT_EQ(forms.size(), 2u);
  EXPECT_EQ(forms[0].label, "37.1");
  EXPECT_EQ(forms[0].a(2), -2);
  EXPECT_EQ(forms[1].a(2), 0);
  EXPECT_EQ(forms[0].a(37), -1);
  EXPECT_EQ(forms[1].a(37), 1);
  auto sorted_abs = [](const RealVector& v) {
    std::vector<double> out;
    for (const auto& x : v) out.push_back(std::abs(as_double(x)));
    std::sort(out.begin(), out.end());
    return out;
  };
  const double s6 = 1 / std::sqrt(6.0), s2 = 1 / std::sqrt(2.0);
  const auto a = sorted_abs(forms[0].lambda), b = sorted_abs(forms[1].lambda);
  EXPECT_NEAR(a[0], 0, 1e-12);
  EXPECT_NEAR(a[1], s2, 1e-12);
  EXPECT_NEAR(a[2], s2, 1e-12);
  EXPECT_NEAR(b[0], s6, 1e-12);
  EXPECT_NEAR(b[1], s6, 1e-12);
  EXPECT_NEAR(b[2], 2 * s6, 1e-12);
}

TEST(Eigenbasis, IrrationalEigenvaluesAtTwentyThree) {
  // a_2 are the roots of x^2 + x - 1.
  const auto& forms = level(23).forms;
  ASSERT_EQ(forms.size(), 2u);
  const Real s = forms[0].a(2) + forms[1].a(2), p = forms[0].a(2) * forms[1].a(2);
  EXPECT_LT(as_double(abs(s + 1)), 1e-30);
  EXPECT_LT(as_double(abs(p + 1)), 1e-30);
  EXPECT_LT(forms[0].a(2), forms[1].a(2));
}

TEST(Eigenbasis, EmptyWhenThereAreNoCuspForms) {
  for (std::int64_t N : {5, 7, 13}) EXPECT_TRUE(level(N).forms.empty()) << N;
}

TEST(Eigenbasis, CanonicalSignMakesTheFirstSignificantEntryPositive) {
  for (std::int64_t N : primes_between(11, 113)) {
    for (const auto& f : level(N).forms) {
      const auto it = std::find_if(f.lambda.begin(), f.lambda.end(), [](const Real& x) { return abs(x) > Real("1e-9"); });
      ASSERT_NE(it, f.lambda.end());
      EXPECT_GT(*it, 0) << f.label;
    }
  }
}

TEST(Eigenbasis, VerificationRowsPass) {
  for (std::int64_t N : primes_between(5, 113)) {
    const auto& L = level(N);
    const auto rep = verify_eigenforms(L.family, L.forms);
    EXPECT_TRUE(rep.all_pass()) << N;
  }
}

TEST(Eigenbasis, EigenvaluesAreRealAndRamanujanBounded) {
  for (std::int64_t N : primes_between(11, 113))
    for (const auto& f : level(N).forms)
      for (std::int64_t p : primes_between(2, 50)) {
        if (p == N) continue;
        EXPECT_LE(as_double(abs(f.a(p))), 2 * std::sqrt(static_cast<double>(p)) + 1e-9) << f.label << " p=" << p;
      }
}

TEST(Eigenbasis, LabelsFollowLexicographicEigenvalueOrder) {
  for (std::int64_t N : primes_between(11, 113)) {
    const auto& forms = level(N).forms;
    for (std::size_t k = 0; k < forms.size(); ++k) {
      EXPECT_EQ(forms[k].label, std::to_string(N) + "." + std::to_string(k + 1));
      if (k == 0) continue;
      for (std::int64_t p : primes_between(2, 50)) {
        if (p == N) continue;
        const Real d = forms[k].a(p) - forms[k - 1].a(p);
        if (abs(d) <= Real("1e-9")) continue;
        EXPECT_GT(d, 0) << forms[k].label;
        break;
      }
    }
  }
}

TEST(HeckeEigenvalue, AgreesWithStoredCoefficients) {
  auto fam = level(43).family;
  for (const auto& f : level(43).forms) {
    for (std::int64_t m : {1, 2, 9, 43})
      EXPECT_LT(as_double(abs(hecke_eigenvalue(f, m, fam) - f.a(m))), 1e-25);
    const Real a60 = hecke_eigenvalue(f, 60, fam);
    EXPECT_LT(as_double(abs(a60 - f.a(4) * f.a(3) * f.a(5))), 1e-20);
  }
}

TEST(HeckeEigenvalue, RejectsNonEigenvectors) {
  const auto& L = level(37);
  Eigenform mix = L.forms[0];
  for (std::size_t i = 0; i < mix.lambda.size(); ++i) mix.lambda[i] = (L.forms[0].lambda[i] + L.forms[1].lambda[i]) / boost::multiprecision::sqrt(Real(2));
  EXPECT_THROW(hecke_eigenvalue(mix, L.family.at(2), L.classdata->weights()), ResidualTooLarge);
}

TEST(Eigenbasis, RejectsAClassSetOfTheWrongSize) {
  auto data = std::make_shared<IdealClassData>(*level(37).classdata);
  data->classes.pop_back();
  BrandtFamily fam{data, {}};
  EXPECT_THROW(eigenbasis(fam), DimensionMismatch);
}

TEST(Eigenbasis, RequiresHeckeOperatorsToSeparateTheSpectrum) {
  auto fam = make_family(level(37).classdata, 1);
  EXPECT_THROW(eigenbasis(fam), DegenerateSpectrum);
}

TEST(EisensteinVector, IsAnEigenvectorWithDivisorSumEigenvalue) {
  for (std::int64_t N : {11, 37, 61}) {
    const auto& L = level(N);
    const auto e = eisenstein_vector(*L.classdata);
    Rational inner(0);
    for (std::size_t i = 0; i < e.size(); ++i) inner += L.classdata->weights()[i] * e[i] * e[i];
    EXPECT_EQ(inner, Rational(N - 1, 12));
    for (std::int64_t m = 1; m <= 30; ++m) {
      const auto& B = L.family.at(m);
      for (std::size_t j = 0; j < e.size(); ++j) {
        Rational s(0);
        for (std::size_t i = 0; i < e.size(); ++i) s += B(i, j) * e[i];
        ASSERT_EQ(s, sigma_N(m, N) * e[j]);
      }
    }
  }
}
