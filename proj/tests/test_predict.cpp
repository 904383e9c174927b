#include <cmath>

#include "doctest.h"
#include "splitvar/errors.hpp"
#include "splitvar/predict.hpp"

using namespace splitvar;

TEST_CASE("gamma zero gives unbounded chi") {
  for (double p : {2.0, 3.0, 5.0}) {
    const IntegrabilityPrediction r = predict_integrability(p, 0.0);
    CHECK(r.feasible);
    CHECK(std::isinf(r.chi));
    CHECK(r.which_case == IntegrabilityCase::GammaZero);
    CHECK(to_string(r.which_case) == "gamma-zero");
  }
}

TEST_CASE("0 < gamma < p/(p+1) gives chi beyond p+1") {
  const IntegrabilityPrediction r = predict_integrability(3.0, 0.7);
  CHECK(r.feasible);
  CHECK(r.which_case == IntegrabilityCase::GammaSmall);
  CHECK(r.chi > 4.0);
  // The witness satisfies both exponent conditions.
  CHECK(std::abs(r.tau_s - r.tau_alpha) < 0.5);
  CHECK(r.gamma < (r.p - 1.0 + 2.0 * (r.tau_s - r.tau_alpha)) / (r.p + 2.0 * r.tau_s));
  CHECK(r.tau_alpha > 0.0);
  CHECK(r.s == doctest::Approx(0.5 + r.tau_s));
  CHECK(r.alpha == doctest::Approx(-0.5 + r.tau_alpha));
  CHECK(r.chi == doctest::Approx(3.0 + 2.0 * r.tau_s));
}

TEST_CASE("gamma at or above p/(p+1) is infeasible") {
  const IntegrabilityPrediction r = predict_integrability(3.0, 0.8);
  CHECK_FALSE(r.feasible);
  CHECK(r.which_case == IntegrabilityCase::Infeasible);
  CHECK_FALSE(predict_integrability(3.0, 0.75).feasible);
}

TEST_CASE("chi is monotone in gamma") {
  double last = INFINITY;
  for (int k = 0; k <= 20; ++k) {
    const double gamma = 0.8 * k / 20.0;
    const IntegrabilityPrediction r = predict_integrability(3.0, gamma);
    CHECK(r.chi <= last);
    last = r.chi;
  }
}

TEST_CASE("full gradient case and mu condition") {
  const IntegrabilityPrediction r = predict_integrability(2.0, 0.0, 1.5);
  CHECK(r.kappa_unbounded);
  CHECK(r.which_case == IntegrabilityCase::FullGradient);
  REQUIRE(r.mu_condition.has_value());
  CHECK(*r.mu_condition);
  const IntegrabilityPrediction big = predict_integrability(6.0, 0.0, 1.9);
  REQUIRE(big.mu_condition.has_value());
  CHECK_FALSE(*big.mu_condition);
  CHECK_FALSE(predict_integrability(2.0, 0.0, 2.5).kappa_unbounded);
}

TEST_CASE("pair conditions") {
  CHECK(tau_pair_balanced(0.3, 0.1));
  CHECK_FALSE(tau_pair_balanced(1.0, 0.2));
  CHECK(tau_pair_admits_gamma(3.0, 0.5, 0.5, 0.2));
  CHECK_FALSE(tau_pair_admits_gamma(3.0, 0.9, 0.5, 0.2));
}

TEST_CASE("p must exceed 1") { CHECK_THROWS_AS(predict_integrability(1.0, 0.0), DomainError); }
