#pragma once

#include <iosfwd>
#include <vector>

#include "json.hpp"
#include "splitvar/diagnostics.hpp"
#include "splitvar/duality.hpp"
#include "splitvar/energy.hpp"
#include "splitvar/predict.hpp"
#include "splitvar/solve.hpp"

namespace splitvar {

using Json = nlohmann::ordered_json;

/// Keys j_total, j_f1, j_f2, k_singular, k_boundary, e_part, delta_term.
Json to_json(const EnergyBreakdown& e);
/// Keys r, gap_abs, gap_rel, div_residual, extremality, delta_stress_norm
/// plus j and certified.
Json to_json(const DualReport& r);
Json to_json(const DeltaRecord& r);
/// Records plus the continuation flags; fields are not included.
Json to_json(const SolveReport& r);
Json to_json(const IntegrabilityPrediction& p);
Json to_json(const SweepTable& t);
Json to_json(const ApproxTable& t);

/// Columns delta, j, j_delta, delta_term, euler_residual, iterations.
void write_records_csv(std::ostream& os, const std::vector<DeltaRecord>& records);

} // namespace splitvar
