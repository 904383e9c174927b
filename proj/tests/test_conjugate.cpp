#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "splitvar/conjugate.hpp"
#include "splitvar/errors.hpp"

using namespace splitvar;

TEST_CASE("conjugate of t^2/2 is itself") {
  const ScalarMap g = [](double t) { return 0.5 * t * t; };
  const ConjugateResult r = conjugate_scalar(g, 3.0, 100.0);
  CHECK(r.value == doctest::Approx(4.5).epsilon(1e-12));
  CHECK(r.argmax == doctest::Approx(3.0).epsilon(1e-8));
  CHECK_FALSE(r.at_boundary);
}

TEST_CASE("conjugate of t^3/3 at s = 2") {
  const ScalarMap g = [](double t) { return t * t * t / 3.0; };
  const double expected = std::pow(2.0, 1.5) * 2.0 / 3.0;
  CHECK(conjugate_scalar(g, 2.0).value == doctest::Approx(expected).epsilon(1e-10));
  CHECK(oracle::dense_conjugate(g, 2.0, 0.0, 10.0) == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("conjugate at zero slope is zero") {
  for (const auto& g : std::vector<ScalarMap>{[](double t) { return t * t; },
                                              [](double t) { return t * std::log1p(t); },
                                              [](double t) { return std::pow(t, 1.5); }}) {
    CHECK(conjugate_scalar(g, 0.0).value == 0.0);
  }
}

TEST_CASE("boundary maximizer is flagged and escalates in strict mode") {
  const ScalarMap g = [](double t) { return t * t / 2.0; };
  const ConjugateResult r = conjugate_scalar(g, 50.0, 10.0);
  CHECK(r.at_boundary);
  try {
    conjugate_scalar(g, 50.0, 10.0, true);
    FAIL("expected a boundary error");
  } catch (const ConjugateError& e) {
    CHECK(e.kind() == std::string("ConjugateBoundary"));
  }
}

TEST_CASE("non-convex input is detected") {
  const ScalarMap g = [](double t) { return std::sin(3.0 * t); };
  CHECK_THROWS_AS(conjugate_on(g, 0.0, -10.0, 10.0), ConjugateError);
}

TEST_CASE("Young residual") {
  CHECK(young_residual(power_nfunction(2.0), 2.0) <= 1e-12);
  const NFunctionSpec cube = power_nfunction(3.0);
  CHECK(young_residual(cube, 1.7) <= 1e-8);
  CHECK(young_residual(cube, 0.0) == 0.0);
  CHECK(young_residual(tlog_nfunction(), 0.0) == 0.0);
  for (double t : {0.1, 1.0, 10.0, 40.0}) {
    const NFunctionSpec a = tlog_nfunction();
    CHECK(young_residual(a, t) <= 1e-8 * (1.0 + t * a.deriv(t)));
  }
}

TEST_CASE("Fenchel-Young inequality on a sample grid") {
  for (double p : {1.5, 2.0, 3.0}) {
    const NFunctionSpec a = power_nfunction(p);
    for (double s : {0.0, 0.5, 2.0, 7.0}) {
      const double as = conjugate_scalar(a.eval, s).value;
      for (double t : {0.0, 0.3, 1.0, 4.0, 20.0}) {
        CHECK(s * t <= a.eval(t) + as + 1e-10);
      }
    }
  }
}

TEST_CASE("biconjugate recovers the density") {
  const NFunctionSpec a = power_nfunction(3.0);
  const ScalarMap star = [&](double s) { return conjugate_scalar(a.eval, s).value; };
  for (double t : {0.2, 1.0, 3.0}) {
    const double back = conjugate_scalar(star, t, 50.0).value;
    CHECK(back == doctest::Approx(a.eval(t)).epsilon(1e-6));
  }
}

TEST_CASE("condition on A*(A') fits") {
  std::vector<double> samples;
  for (int k = 0; k < 60; ++k) {
    samples.push_back(0.5 * k);
  }
  const Dual4Fit q = check_condition_dual4(power_nfunction(2.0), samples);
  CHECK(q.holds);
  CHECK(q.c_fit <= 1.0 + 1e-9);
  const Dual4Fit p4 = check_condition_dual4(power_nfunction(4.0), samples);
  CHECK(p4.holds);
  CHECK(p4.c_fit == doctest::Approx(3.0).epsilon(1e-3));
  const Dual4Fit zero = check_condition_dual4(power_nfunction(2.0), std::vector<double>{0.0});
  CHECK(zero.c_fit == 0.0);
}

TEST_CASE("recession values") {
  CHECK(recession(make_phi_nu(1.5).eval, 1) == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(recession([](double t) { return std::abs(t); }, -1) == doctest::Approx(1.0));
  CHECK_THROWS_AS(recession([](double t) { return t * t; }, 1), NonLinearGrowth);
}

TEST_CASE("tabulated conjugate interpolates monotonically") {
  const NFunctionSpec a = power_nfunction(3.0);
  const TabulatedConjugate table(a.eval, 10.0, 201);
  double last = -1.0;
  for (int k = 0; k <= 1000; ++k) {
    const double s = 10.0 * k / 1000.0;
    const double v = table(s);
    CHECK(v >= last - 1e-14);
    last = v;
    CHECK(v == doctest::Approx(oracle::power_conjugate(3.0, s)).epsilon(1e-3));
  }
}
