#include "splitvar/report.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

namespace splitvar {

namespace {

// JSON has no infinity; unbounded exponents are written as null.
Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

} // namespace

Json to_json(const EnergyBreakdown& e) {
  return Json{{"j_total", e.j_total},       {"j_f1", e.j_f1},     {"j_f2", e.j_f2},
              {"k_singular", e.k_singular}, {"k_boundary", e.k_boundary},
              {"e_part", e.e_part},         {"delta_term", e.delta_term}};
}

Json to_json(const DualReport& r) {
  return Json{{"j", r.j_value},
              {"r", r.r_value},
              {"gap_abs", r.gap_absolute},
              {"gap_rel", r.gap_relative},
              {"div_residual", r.div_residual_max},
              {"extremality", r.extremality_max_violation},
              {"delta_stress_norm", r.delta_stress_norm},
              {"certified", r.certified}};
}

Json to_json(const DeltaRecord& r) {
  return Json{{"delta", r.delta},
              {"j", r.j_value},
              {"j_delta", r.j_delta_value},
              {"delta_term", r.delta_term},
              {"euler_residual", r.euler_residual_max},
              {"iterations", r.iterations},
              {"newton_steps", r.newton_steps},
              {"converged", r.converged},
              {"status", r.status}};
}

Json to_json(const SolveReport& r) {
  Json records = Json::array();
  for (const auto& rec : r.records) {
    records.push_back(to_json(rec));
  }
  return Json{{"records", records},
              {"j_monotone", r.j_monotone},
              {"delta_term_ratio_ok", r.delta_term_ratio_ok},
              {"all_converged", r.all_converged}};
}

Json to_json(const IntegrabilityPrediction& p) {
  Json j{{"p", p.p},
         {"gamma", p.gamma},
         {"feasible", p.feasible},
         {"case", to_string(p.which_case)},
         {"chi", number(p.chi)},
         {"chi_unbounded", std::isinf(p.chi)},
         {"tau_s", p.tau_s},
         {"tau_alpha", p.tau_alpha},
         {"s", p.s},
         {"alpha", p.alpha},
         {"kappa_unbounded", p.kappa_unbounded}};
  j["mu"] = p.mu ? Json(*p.mu) : Json(nullptr);
  j["mu_condition"] = p.mu_condition ? Json(*p.mu_condition) : Json(nullptr);
  return j;
}

Json to_json(const SweepTable& t) {
  Json flags = Json::array();
  for (const auto& f : t.flags) {
    flags.push_back(Json{{"kind", f.kind},
                         {"exponent", f.exponent},
                         {"last_change", f.last_change},
                         {"flag", f.bounded ? "BOUNDED" : "GROWING"}});
  }
  return Json{{"interior_margin", t.interior_margin},
              {"all_bounded", t.all_bounded()},
              {"flags", flags}};
}

Json to_json(const ApproxTable& t) {
  Json rows = Json::array();
  for (const auto& r : t.rows) {
    rows.push_back(Json{{"width", r.width},
                        {"l1_distance", r.l1_distance},
                        {"area", r.area},
                        {"f2_energy", r.f2_energy},
                        {"j", r.j_value}});
  }
  return Json{{"k", t.k_value},
              {"area_limit", t.area_limit},
              {"f2_limit", t.f2_limit},
              {"terminal_deviation", t.terminal_deviation},
              {"rows", rows}};
}

void write_records_csv(std::ostream& os, const std::vector<DeltaRecord>& records) {
  os << "delta,j,j_delta,delta_term,euler_residual,iterations\n" << std::setprecision(17);
  for (const auto& r : records) {
    os << r.delta << ',' << r.j_value << ',' << r.j_delta_value << ',' << r.delta_term << ','
       << r.euler_residual_max << ',' << r.iterations << '\n';
  }
}

} // namespace splitvar
