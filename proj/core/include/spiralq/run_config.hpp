#pragma once

#include <vector>

#include "spiralq/design_explorer.hpp"
#include "spiralq/keyvalue.hpp"

namespace spiralq {

/// [model] section: freq_min_ghz, freq_max_ghz, freq_points,
/// substrate_resistivity_ohm_cm, substrate_rel_permittivity,
/// substrate_thickness_um, spot_ghz, elements_per_segment,
/// deflection_limit_um. Missing keys keep the values in `base`.
EvaluationSettings apply_model_section(const KeyValueDocument& doc, EvaluationSettings base = {});

/// [constraints] section: max_shock_deflection_um, min_resonant_frequency_hz,
/// min_q, min_inductance_nh, shock_accel_g.
ConstraintSet constraints_from_document(const KeyValueDocument& doc);

/// [pareto] objectives = q_max, f_max_impact (default when absent).
std::vector<Objective> objectives_from_document(const KeyValueDocument& doc);

/// Grid file: a spec file whose [spiral] values may be comma-separated lists.
/// Every key with more than one value becomes an axis, in file order.
SweepGrid grid_from_document(const KeyValueDocument& doc, const MaterialTable& materials);

}  // namespace spiralq
