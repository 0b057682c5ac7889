#include <cmath>

#include "chiralwg/errors.hpp"
#include "chiralwg/fano.hpp"
#include "doctest.h"
#include "fano_harness.hpp"

using namespace chiralwg;
using doctest::Approx;

namespace {

constexpr FanoParams kTruth{0.01, -0.03, 0.8, 3.0, -80.0};

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

FanoFit converged_fit(double A) {
  FanoFit f;
  f.params.A = A;
  f.converged = true;
  return f;
}

}  // namespace

TEST_SUITE("fano") {

TEST_CASE("lineshape values") {
  CHECK(fano_eval({0, 1, 0, 2.0, 5.0}, 5.0) == 0.0);
  CHECK(fano_eval({0, 1, 1, 1.5, 0.0}, 1.5) == Approx(2.0).epsilon(1e-15));
  CHECK(fano_eval({0.2, -0.7, 1.3, 2.0, 0.0}, 1e9) == Approx(0.2 - 0.7).epsilon(1e-8));
  CHECK(fano_eval({0.2, -0.7, 1.3, 2.0, 0.0}, -1e9) == Approx(0.2 - 0.7).epsilon(1e-8));
}

TEST_CASE("mirror invariance under q -> -q, x -> -x") {
  for (double x : {-7.0, -1.0, 0.0, 0.3, 4.0}) {
    CHECK(fano_eval({0.1, 0.4, 0.9, 1.7, 2.0}, 2.0 + x) ==
          Approx(fano_eval({0.1, 0.4, -0.9, 1.7, 2.0}, 2.0 - x)).epsilon(1e-15));
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(validate(FanoParams{0, 1, 0, 0.0, 0}), InvalidParameter);
  CHECK_THROWS_AS(validate(FanoParams{0, NAN, 0, 1.0, 0}), InvalidParameter);
  CHECK_NOTHROW(validate(kTruth));
}

TEST_CASE("noiseless recovery") {
  const auto s = harness::synthetic(kTruth, 0.0, 0);
  const FanoFit fit = fano_fit(s, harness::window_of(kTruth));
  REQUIRE(fit.converged);
  CHECK(fit.rss < 1e-10);
  CHECK(rel(fit.params.y0, kTruth.y0) < 1e-6);
  CHECK(rel(fit.params.A, kTruth.A) < 1e-6);
  CHECK(rel(fit.params.q, kTruth.q) < 1e-6);
  CHECK(rel(fit.params.gamma, kTruth.gamma) < 1e-6);
  CHECK(rel(fit.params.omega0, kTruth.omega0) < 1e-6);
  CHECK(fit.points == 321);
}

TEST_CASE("noiseless recovery of dips, peaks and both q signs") {
  for (const FanoParams truth : {FanoParams{-0.05, 0.05, 0.0, 1.2, 10.0},
                                 FanoParams{0.004, -0.004, 0.0, 4.0, -3.0},
                                 FanoParams{0.0, 0.02, -1.5, 2.5, 40.0},
                                 FanoParams{0.3, 0.1, 3.0, 5.0, 0.0}}) {
    const FanoFit fit = fano_fit(harness::synthetic(truth, 0.0, 0), harness::window_of(truth));
    const FanoParams expected = canonical(truth);
    REQUIRE(fit.converged);
    CHECK(fit.rss < 1e-10);
    CHECK(rel(fit.params.gamma, expected.gamma) < 1e-6);
    CHECK(rel(fit.params.A, expected.A) < 1e-6);
    CHECK(std::abs(fit.params.q - expected.q) < 1e-6);
  }
}

TEST_CASE("canonical form describes the same curve") {
  for (const FanoParams p : {FanoParams{0.3, 0.1, 3.0, 5.0, 0.0}, FanoParams{0.0, 0.02, -1.5, 2.5, 40.0},
                             FanoParams{-0.1, 0.4, 0.9, -1.7, 2.0}, FanoParams{0.2, -0.7, 1.0, 2.0, 0.0}}) {
    const FanoParams c = canonical(p);
    CHECK(std::abs(c.q) <= 1.0);
    CHECK(c.gamma > 0);
    CHECK(c.omega0 == p.omega0);
    for (double x : {-30.0, -4.0, -1.0, 0.0, 0.5, 2.0, 7.0, 100.0}) {
      CHECK(fano_eval(c, p.omega0 + x) == Approx(fano_eval(p, p.omega0 + x)).epsilon(1e-12));
    }
  }
  CHECK(canonical(kTruth) == kTruth);
}

TEST_CASE("explicit initial guess") {
  const auto s = harness::synthetic(kTruth, 0.0, 0);
  const FanoFit fit = fano_fit(s, harness::window_of(kTruth), FanoParams{0, -0.02, 0.5, 2.0, -79.0});
  CHECK(fit.converged);
  CHECK(rel(fit.params.q, kTruth.q) < 1e-6);
}

TEST_CASE("noisy recovery over 100 seeds") {
  int sign_matches = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto s = harness::synthetic(kTruth, 0.05, seed);
    const FanoFit fit = fano_fit(s, harness::window_of(kTruth));
    CHECK(fit.converged);
    CHECK(rel(fit.params.A, kTruth.A) < 0.05);
    CHECK(rel(fit.params.gamma, kTruth.gamma) < 0.05);
    CHECK(rel(fit.params.omega0, kTruth.omega0) < 0.05);
    if (fit.params.q > 0) ++sign_matches;
  }
  CHECK(sign_matches >= 95);
}

TEST_CASE("flipped q sign is recovered") {
  FanoParams truth = kTruth;
  truth.q = -0.8;
  int matches = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const FanoFit fit = fano_fit(harness::synthetic(truth, 0.05, seed), harness::window_of(truth));
    if (fit.params.q < 0) ++matches;
  }
  CHECK(matches >= 95);
}

TEST_CASE("no spurious asymmetry on symmetric data") {
  const FanoParams truth{0.0, 0.03, 0.0, 3.0, 20.0};
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const FanoFit fit = fano_fit(harness::synthetic(truth, 0.02, seed), harness::window_of(truth));
    CHECK(fit.converged);
    CHECK(std::abs(fit.params.q) < 0.05);
  }
}

TEST_CASE("covariance is symmetric positive semidefinite") {
  const FanoFit fit = fano_fit(harness::synthetic(kTruth, 0.05, 9), harness::window_of(kTruth));
  REQUIRE(fit.converged);
  CHECK((fit.covariance - fit.covariance.transpose()).norm() == 0.0);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 5, 5>> es(fit.covariance);
  CHECK(es.eigenvalues().minCoeff() >= -1e-18);
  CHECK(fit.stderr_.gamma > 0);
  CHECK(fit.stderr_.gamma == Approx(std::sqrt(fit.covariance(3, 3))));
  CHECK(fit.rss >= 0);
}

TEST_CASE("fit preconditions") {
  const auto s = harness::synthetic(kTruth, 0.0, 0);
  CHECK_THROWS_AS(fano_fit(s, {10, 5}), DegenerateInput);
  CHECK_THROWS_AS(fano_fit(s, {-80, -78}), DegenerateInput);  // 9 points
  CHECK_THROWS_AS(fano_fit(s, {-80, NAN}), DegenerateInput);
}

TEST_CASE("contrast identities") {
  CHECK(fano_contrast(converged_fit(0.3), converged_fit(0.3)) == 0.0);
  CHECK(fano_contrast(converged_fit(0.3), converged_fit(0.0)) == 1.0);
  CHECK(fano_contrast(converged_fit(3.0), converged_fit(1.0)) == 0.5);
  CHECK(fano_contrast(converged_fit(12.2), converged_fit(1.07)) == Approx(0.84).epsilon(0.01));
  for (double k : {0.5, 2.0, 1024.0}) {
    CHECK(fano_contrast(converged_fit(12.2 * k), converged_fit(1.07 * k)) ==
          fano_contrast(converged_fit(12.2), converged_fit(1.07)));
  }
  const FanoFit real = fano_fit(harness::synthetic(kTruth, 0.0, 0), harness::window_of(kTruth));
  CHECK(fano_contrast(real, real) == 0.0);

  FanoFit unconverged = converged_fit(1.0);
  unconverged.converged = false;
  CHECK_THROWS_AS(fano_contrast(unconverged, converged_fit(1.0)), DegenerateInput);
  CHECK_THROWS_AS(fano_contrast(converged_fit(1.0), converged_fit(-1.0)), DegenerateInput);
  CHECK(fano_contrast_warning(converged_fit(1.0), converged_fit(-0.5)).has_value());
  CHECK(fano_contrast(converged_fit(1.0), converged_fit(-0.5)) == 3.0);
  CHECK_FALSE(fano_contrast_warning(converged_fit(1.0), converged_fit(0.5)).has_value());
}

TEST_CASE("PL contrast identities") {
  CHECK(pl_contrast(0.4, 0.4) == 0.0);
  CHECK(pl_contrast(0.4, 0.0) == 1.0);
  CHECK(pl_contrast(0.0, 0.4) == -1.0);
  CHECK(pl_contrast(0.95, 0.05) == Approx(0.90).epsilon(1e-14));
  for (double k : {0.25, 8.0, 4096.0}) CHECK(pl_contrast(0.95 * k, 0.05 * k) == pl_contrast(0.95, 0.05));
  for (double k : {0.3, 7.0, 1e5}) {
    CHECK(pl_contrast(0.95 * k, 0.05 * k) == Approx(pl_contrast(0.95, 0.05)).epsilon(1e-15));
  }
  CHECK_THROWS_AS(pl_contrast(0, 0), DegenerateInput);
  CHECK_THROWS_AS(pl_contrast(-1, 2), InvalidParameter);
}

}
