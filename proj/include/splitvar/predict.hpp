#pragma once

#include <optional>
#include <string>

namespace splitvar {

enum class IntegrabilityCase { GammaZero, GammaSmall, FullGradient, Infeasible };

std::string to_string(IntegrabilityCase c);

/// Outcome of the exponent bookkeeping behind the higher integrability
/// results. `chi` is +inf when every finite exponent is admissible.
struct IntegrabilityPrediction {
  double p = 0;
  double gamma = 0;
  std::optional<double> mu;
  double tau_s = 0;
  double tau_alpha = 0;
  double s = 0;      // (p - 2)/2 + tau_s
  double alpha = 0;  // -1/2 + tau_alpha
  double chi = 0;    // p + 2 tau_s, or +inf
  bool feasible = false;
  IntegrabilityCase which_case = IntegrabilityCase::Infeasible;
  // Full gradient (d1 u) integrable for every finite kappa.
  bool kappa_unbounded = false;
  // 3(2 - mu) - (p - 2) > 0; only set when mu is given.
  std::optional<bool> mu_condition;
};

/// |tau_s - tau_alpha| < 1/2.
bool tau_pair_balanced(double tau_s, double tau_alpha);
/// gamma < (p - 1 + 2 (tau_s - tau_alpha)) / (p + 2 tau_s).
bool tau_pair_admits_gamma(double p, double gamma, double tau_s, double tau_alpha);

/// Scans (tau_s, tau_alpha) on a 200 x 200 grid of (0, 2]^2 and reports the
/// largest admissible chi = p + 2 tau_s.
IntegrabilityPrediction predict_integrability(double p, double gamma,
                                              std::optional<double> mu = std::nullopt);

} // namespace splitvar
