#include "splitvar/predict.hpp"

#include <cmath>
#include <limits>

#include "splitvar/errors.hpp"

namespace splitvar {

std::string to_string(IntegrabilityCase c) {
  switch (c) {
  case IntegrabilityCase::GammaZero:
    return "gamma-zero";
  case IntegrabilityCase::GammaSmall:
    return "gamma-small";
  case IntegrabilityCase::FullGradient:
    return "full-gradient";
  case IntegrabilityCase::Infeasible:
    return "infeasible";
  }
  return "infeasible";
}

bool tau_pair_balanced(double tau_s, double tau_alpha) {
  return std::abs(tau_s - tau_alpha) < 0.5;
}

bool tau_pair_admits_gamma(double p, double gamma, double tau_s, double tau_alpha) {
  return gamma < (p - 1.0 + 2.0 * (tau_s - tau_alpha)) / (p + 2.0 * tau_s);
}

IntegrabilityPrediction predict_integrability(double p, double gamma, std::optional<double> mu) {
  if (!(p > 1.0)) {
    throw DomainError("predict_integrability requires p > 1");
  }
  if (!(gamma >= 0.0)) {
    throw DomainError("predict_integrability requires gamma >= 0");
  }
  if (mu && !(*mu > 1.0)) {
    throw DomainError("predict_integrability requires mu > 1");
  }

  IntegrabilityPrediction out;
  out.p = p;
  out.gamma = gamma;
  out.mu = mu;

  constexpr int kSteps = 200;
  constexpr double kStep = 2.0 / kSteps;
  bool found = false;
  double best_tau_s = 0;
  double best_tau_alpha = 0;
  for (int i = 1; i <= kSteps; ++i) {
    const double ts = kStep * i;
    for (int j = 1; j <= kSteps; ++j) {
      const double ta = kStep * j;
      if (!tau_pair_balanced(ts, ta) || !tau_pair_admits_gamma(p, gamma, ts, ta)) {
        continue;
      }
      if (!found || ts > best_tau_s) {
        found = true;
        best_tau_s = ts;
        best_tau_alpha = ta;
      }
    }
  }

  if (found) {
    out.tau_s = best_tau_s;
    out.tau_alpha = best_tau_alpha;
    out.s = (p - 2.0) / 2.0 + best_tau_s;
    out.alpha = -0.5 + best_tau_alpha;
    out.chi = p + 2.0 * best_tau_s;
  } else {
    out.chi = p;
  }

  if (gamma == 0.0) {
    out.feasible = true;
    out.chi = std::numeric_limits<double>::infinity();
    out.which_case = IntegrabilityCase::GammaZero;
    if (mu && *mu < 2.0) {
      out.which_case = IntegrabilityCase::FullGradient;
      out.kappa_unbounded = true;
    }
  } else if (gamma < p / (p + 1.0) && found && out.chi > p + 1.0) {
    out.feasible = true;
    out.which_case = IntegrabilityCase::GammaSmall;
  } else {
    out.feasible = false;
    out.which_case = IntegrabilityCase::Infeasible;
  }

  if (mu) {
    out.mu_condition = 3.0 * (2.0 - *mu) - (p - 2.0) > 0.0;
  }
  return out;
}

} // namespace splitvar
