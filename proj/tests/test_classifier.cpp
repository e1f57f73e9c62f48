#include <doctest.h>

#include "amalgam/classifier.hpp"

#include <random>

using namespace amalgam;

namespace {

ReciprocalExponent P(const char* text) { return ReciprocalExponent::parse(text); }
ReciprocalExponent U(long long num, long long den = 1) {
  return ReciprocalExponent::from_reciprocal(Rational(num, den));
}
Rational R(long long num, long long den = 1) { return Rational(num, den); }

// Random reciprocal in [0, hi] with denominator up to 24.
Rational random_reciprocal(std::mt19937_64& rng, long long hi) {
  std::uniform_int_distribution<long long> den(1, 24);
  const long long d = den(rng);
  std::uniform_int_distribution<long long> num(0, hi * d);
  return Rational(num(rng), d);
}

}  // namespace

TEST_CASE("reciprocal exponent parsing and round trip") {
  CHECK(P("inf").is_infinite());
  CHECK(P("4").reciprocal() == R(1, 4));
  CHECK(P("1/2").reciprocal() == R(2));
  CHECK(P("3/4").p() == R(3, 4));
  CHECK(P("inf").to_string() == "inf");
  CHECK(P("7/3").to_string() == "7/3");
  CHECK_THROWS_AS(P("0.5"), std::invalid_argument);
  CHECK_THROWS_AS(P("0"), std::invalid_argument);
  CHECK_THROWS_AS(P("-2"), std::invalid_argument);
  CHECK_THROWS_AS(P("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(ReciprocalExponent::from_reciprocal(R(-1)), std::invalid_argument);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    const Rational p = random_reciprocal(rng, 9) + R(1, 97);
    CHECK(ReciprocalExponent::from_p(p).p() == p);
  }
}

TEST_CASE("alpha and beta examples") {
  CHECK(alpha(U(1, 2), U(1, 2), 1) == 0);
  CHECK(alpha(U(0), U(0), 1) == 1);
  CHECK(alpha(U(1), U(0), 1) == R(1, 2));
  CHECK(beta(U(1), U(0), 1) == 0);
  CHECK(beta(U(1, 2), U(1), 1) == R(-1, 2));
  CHECK(beta(U(0), U(1), 1) == R(-1, 2));
}

TEST_CASE("region labels") {
  CHECK(alpha_region(U(1, 4), U(3, 4)) == RegionLabel::A1);
  CHECK(alpha_region(U(1), U(0)) == RegionLabel::A3);
  CHECK(alpha_region(U(1, 2), U(1, 2)) == RegionLabel::BoundaryOfSeveral);
  CHECK(beta_region(U(1, 2), U(1, 2)) == RegionLabel::BoundaryOfSeveral);
  CHECK(alpha_region(U(0), U(0)) == RegionLabel::A2);
  CHECK(beta_region(U(1), U(0)) == RegionLabel::B1);
  CHECK(beta_region(U(1, 2), U(1)) == RegionLabel::B2);
  CHECK(beta_region(U(0), U(1)) == RegionLabel::B3);
}

TEST_CASE("region branch formulas agree with the max/min formulas") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 10000; ++i) {
    const auto p = ReciprocalExponent::from_reciprocal(random_reciprocal(rng, 3));
    const auto q = ReciprocalExponent::from_reciprocal(random_reciprocal(rng, 3));
    const int n = 1 + static_cast<int>(i % 3);
    const auto ra = alpha_region(p, q);
    const auto rb = beta_region(p, q);
    REQUIRE(region_branch(ra, p, q, n) == alpha(p, q, n));
    REQUIRE(region_branch(rb, p, q, n) == beta(p, q, n));
    if (ra != RegionLabel::BoundaryOfSeveral) REQUIRE(in_closed_region(ra, p, q));
    if (rb != RegionLabel::BoundaryOfSeveral) REQUIRE(in_closed_region(rb, p, q));
    REQUIRE(alpha(p, q, n) >= 0);
    REQUIRE(beta(p, q, n) <= 0);
  }
}

TEST_CASE("duality alpha(p,q) = -beta(p',q')") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 2000; ++i) {
    const Rational up = random_reciprocal(rng, 1);
    const Rational uq = random_reciprocal(rng, 1);
    const auto a = alpha(ReciprocalExponent::from_reciprocal(up),
                         ReciprocalExponent::from_reciprocal(uq), 2);
    const auto b = beta(ReciprocalExponent::from_reciprocal(1 - up),
                        ReciprocalExponent::from_reciprocal(1 - uq), 2);
    REQUIRE(a == -b);
  }
}

TEST_CASE("W and B embeddings") {
  CHECK(decide_W_subset_B(P("2"), P("2"), 0, 1).holds);
  CHECK_FALSE(decide_W_subset_B(P("4"), P("2"), R(1, 4), 1).holds);
  CHECK(decide_W_subset_B(P("4"), P("2"), R(3, 10), 1).holds);
  CHECK(decide_W_subset_B(P("4"), P("2"), R(1, 4), 1).strict_required);
  CHECK(decide_B_subset_W(P("2"), P("1"), R(-1, 2), 1).holds);
  CHECK_FALSE(decide_B_subset_W(P("1"), P("2"), 0, 1).holds);
  // beta(1,2) = min(0, -1/2, 0) = -1/2, so s = -1/10 lies above it.
  CHECK(decide_B_subset_W(P("1"), P("2"), 0, 1).critical_s == R(-1, 2));
  CHECK_FALSE(decide_B_subset_W(P("1"), P("2"), R(-1, 10), 1).holds);
  CHECK(decide_B_subset_W(P("1"), P("2"), R(-3, 5), 1).holds);
  CHECK_FALSE(decide_B_subset_W(P("1"), P("2"), R(-1, 2), 1).holds);
}

TEST_CASE("mutual W/B embedding only on the diagonal at s = 0") {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 3000; ++i) {
    const auto p = ReciprocalExponent::from_reciprocal(random_reciprocal(rng, 2));
    const auto q = ReciprocalExponent::from_reciprocal(random_reciprocal(rng, 2));
    std::uniform_int_distribution<int> sd(-4, 4);
    const Rational s(sd(rng), 4);
    if (decide_W_subset_B(p, q, s, 1).holds && decide_B_subset_W(p, q, s, 1).holds) {
      REQUIRE(s == 0);
      REQUIRE(p == q);
      REQUIRE(alpha(p, q, 1) == 0);
      REQUIRE(beta(p, q, 1) == 0);
    }
  }
}

TEST_CASE("W and h_p embeddings") {
  CHECK(decide_W_subset_hp(P("2"), P("2"), 0, 1).holds);
  CHECK_FALSE(decide_W_subset_hp(P("2"), P("4"), R(1, 4), 1).holds);
  CHECK(decide_W_subset_hp(P("1/2"), P("inf"), 1, 1).holds);
  CHECK(decide_W_subset_hp(P("1/2"), P("inf"), 1, 1).critical_s == R(1, 2));
  CHECK(decide_W_subset_hp(P("1/2"), P("inf"), 1, 1).strict_required);
  CHECK(decide_hp_subset_W(P("2"), P("2"), 0, 1).holds);
  CHECK_FALSE(decide_hp_subset_W(P("4"), P("1"), R(-1, 2), 1).holds);
  CHECK(decide_hp_subset_W(P("1"), P("2"), R(-1, 2), 1).holds);
  CHECK_THROWS_AS(decide_W_subset_hp(P("inf"), P("2"), 0, 1), DomainError);
  CHECK_THROWS_AS(decide_hp_subset_W(P("inf"), P("2"), 0, 1), DomainError);
  CHECK_THROWS_AS(SpaceSpec::make(SpaceFamily::LocalHardy, P("inf"), P("2"), 0), DomainError);
}

TEST_CASE("non-strict at alpha when 1/q >= min(1/p, 1/2) for 1 < p < inf") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 2000; ++i) {
    const Rational up = random_reciprocal(rng, 1);
    if (up <= 0 || up >= 1) continue;
    const Rational uq = random_reciprocal(rng, 2);
    if (uq < min(up, R(1, 2))) continue;
    const auto p = ReciprocalExponent::from_reciprocal(up);
    const auto q = ReciprocalExponent::from_reciprocal(uq);
    const auto v = decide_W_subset_hp(p, q, alpha(p, q, 1), 1);
    REQUIRE(v.holds);
    REQUIRE_FALSE(v.strict_required);
  }
}

TEST_CASE("Lebesgue endpoints") {
  CHECK(decide_W_subset_Lebesgue_endpoint(P("1"), P("2"), 0, 1).holds);
  CHECK(decide_W_subset_Lebesgue_endpoint(P("inf"), P("1"), 0, 1).holds);
  CHECK_FALSE(decide_W_subset_Lebesgue_endpoint(P("inf"), P("2"), 0, 1).holds);
  CHECK(decide_Lebesgue_subset_W_endpoint(P("1"), P("inf"), -1, 1).holds);
  CHECK_FALSE(decide_Lebesgue_subset_W_endpoint(P("1"), P("2"), R(-1, 2), 1).holds);
  CHECK(decide_Lebesgue_subset_W_endpoint(P("inf"), P("2"), 0, 1).holds);
  CHECK_THROWS_AS(decide_W_subset_Lebesgue_endpoint(P("2"), P("2"), 0, 1), DomainError);
  // 1 < p < inf is routed through h_p.
  CHECK(decide_W_subset_Lebesgue(P("2"), P("4"), R(1, 4), 1) ==
        decide_W_subset_hp(P("2"), P("4"), R(1, 4), 1));
  CHECK(decide_Lebesgue_subset_W(P("3"), P("1"), R(-2, 3), 1) ==
        decide_hp_subset_W(P("3"), P("1"), R(-2, 3), 1));
}

TEST_CASE("Fourier series inequality thresholds") {
  using D = InequalityDirection;
  CHECK(decide_fourier_series(P("2"), P("2"), 0, 1, D::FunctionBelowCoefficients).holds);
  CHECK(decide_fourier_series(P("2"), P("2"), 0, 1, D::CoefficientsBelowFunction).holds);
  CHECK(decide_fourier_series(P("inf"), P("1"), 0, 1, D::FunctionBelowCoefficients).holds);
  CHECK(decide_fourier_series(P("1"), P("2"), 0, 1, D::FunctionBelowCoefficients).holds);
  CHECK_FALSE(decide_fourier_series(P("1"), P("2"), 0, 1, D::CoefficientsBelowFunction).holds);
  CHECK(decide_fourier_series(P("1"), P("inf"), 0, 1, D::CoefficientsBelowFunction).holds);
  CHECK_THROWS_AS(decide_fourier_series(P("1/2"), P("2"), 0, 1, D::CoefficientsBelowFunction),
                  DomainError);
}

TEST_CASE("W into W") {
  CHECK(decide_W_subset_W(P("2"), P("2"), 1, P("4"), P("2"), 1, 1));
  CHECK(decide_W_subset_W(P("2"), P("2"), 0, P("2"), P("2"), 0, 1));
  CHECK(decide_W_subset_W(P("2"), P("2"), 0, P("2"), P("4"), 0, 1));
  CHECK_FALSE(decide_W_subset_W(P("2"), P("2"), 0, P("2"), P("1"), 0, 1));
  CHECK_FALSE(decide_W_subset_W(P("4"), P("2"), 0, P("2"), P("2"), 0, 1));
}

TEST_CASE("W into W matches a two-branch truth table") {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 3000; ++i) {
    const Rational u[4] = {random_reciprocal(rng, 2), random_reciprocal(rng, 2),
                           random_reciprocal(rng, 2), random_reciprocal(rng, 2)};
    std::uniform_int_distribution<int> sd(-2, 2);
    const Rational s1(sd(rng), 2), s2(sd(rng), 2);
    const bool a = s2 <= s1 && u[2] <= u[0] && u[3] + s2 < u[1] + s1;
    const bool b = s2 == s1 && u[2] <= u[0] && u[3] == u[1];
    REQUIRE(decide_W_subset_W(ReciprocalExponent::from_reciprocal(u[0]),
                              ReciprocalExponent::from_reciprocal(u[1]), s1,
                              ReciprocalExponent::from_reciprocal(u[2]),
                              ReciprocalExponent::from_reciprocal(u[3]), s2, 1) == (a || b));
  }
}

TEST_CASE("sequence space embeddings") {
  CHECK(decide_seq_uniform(P("2"), 1, P("4"), 0, 1));
  CHECK(decide_seq_uniform(P("2"), 0, P("2"), 0, 1));
  CHECK_FALSE(decide_seq_uniform(P("inf"), 0, P("2"), 0, 1));
  CHECK(decide_seq_dyadic(P("inf"), 1, P("1"), 0));
  CHECK(decide_seq_dyadic(P("2"), 0, P("4"), 0));
  CHECK_FALSE(decide_seq_dyadic(P("4"), 0, P("2"), 0));
}

TEST_CASE("router") {
  using F = SpaceFamily;
  const auto w = SpaceSpec::make(F::WienerAmalgam, P("2"), P("2"), 0);
  const auto b = SpaceSpec::make(F::Besov, P("2"), P("2"), 0);
  CHECK(decide(w, b).holds);
  CHECK(decide(b, w).holds);
  const auto l = SpaceSpec::make(F::Lebesgue, P("2"), P("2"), 0);
  CHECK(decide(w, l) == decide_W_subset_hp(P("2"), P("2"), 0, 1));
  const auto s0 = SpaceSpec::make(F::SeqUniform, P("2"), P("2"), 0);
  CHECK(decide(s0, s0).holds);
  CHECK_THROWS_AS(decide(w, SpaceSpec::make(F::Besov, P("4"), P("2"), 0)), DomainError);
  CHECK_THROWS_AS(decide(b, b), DomainError);
}
