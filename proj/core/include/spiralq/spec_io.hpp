#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spiralq/geometry.hpp"
#include "spiralq/keyvalue.hpp"
#include "spiralq/material.hpp"

namespace spiralq {

/// Environment variable naming a material-table file that overrides the
/// built-in handbook values.
inline constexpr const char* kMaterialsEnvVar = "SPIRALQ_MATERIALS";

/// Material file: one `[name]` section per material with keys
/// youngs_modulus_gpa, density_kg_m3, poisson_ratio, resistivity_ohm_m,
/// rel_permittivity. Sections naming an existing material override only the
/// keys they set.
MaterialTable apply_material_document(const KeyValueDocument& doc, MaterialTable base);

/// Built-in table, overridden by `path` when given, else by $SPIRALQ_MATERIALS.
MaterialTable resolve_material_table(const std::optional<std::string>& path = std::nullopt);

/// Keys accepted in the [spiral] section, in canonical order.
const std::vector<std::string>& spiral_keys();

/// Sets one [spiral] field from its textual value (lengths in um).
void apply_spec_key(SpiralSpec& spec, const std::string& key, const std::string& value,
                    const MaterialTable& materials, std::size_t line = 0, const std::string& source = {});

/// Spec file: [spiral] section (inner_diameter, trace_width, spacing, turns,
/// metal_thickness, airgap_height required; lead_gap, dielectric_mode,
/// conductor_material, oxide_rel_permittivity, xbeam optional) and an
/// optional [xbeam] section (arm_width, layers = "Si3N4:0.1 / SiO2:0.6",
/// anchored). Unknown keys are errors. Throws ValidationError for specs that
/// parse but violate invariants.
SpiralSpec spec_from_document(const KeyValueDocument& doc, const MaterialTable& materials);
SpiralSpec load_spec(const std::string& path, const MaterialTable& materials);

/// Canonical spec file text (lengths in um); spec_from_document inverts it.
std::string spec_to_text(const SpiralSpec& spec);

std::string format_layers(const std::vector<Layer>& layers);
std::vector<Layer> parse_layers(const std::string& text, const MaterialTable& materials, std::size_t line,
                                const std::string& source);

}  // namespace spiralq
