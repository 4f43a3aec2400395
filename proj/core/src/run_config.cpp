#include "spiralq/run_config.hpp"

#include "spiralq/error.hpp"
#include "spiralq/spec_io.hpp"
#include "spiralq/units.hpp"

namespace spiralq {

EvaluationSettings apply_model_section(const KeyValueDocument& doc, EvaluationSettings s) {
    const auto& src = doc.source();
    for (const auto* e : doc.in_section("model")) {
        if (e->key == "freq_min_ghz") s.em.freq_min = units::ghz(parse_double(*e, src));
        else if (e->key == "freq_max_ghz") s.em.freq_max = units::ghz(parse_double(*e, src));
        else if (e->key == "freq_points") s.em.freq_points = parse_int(*e, src);
        else if (e->key == "substrate_resistivity_ohm_cm") s.em.substrate_resistivity = parse_double(*e, src) * 1e-2;
        else if (e->key == "substrate_rel_permittivity") s.em.substrate_rel_permittivity = parse_double(*e, src);
        else if (e->key == "substrate_thickness_um") s.em.substrate_thickness_eff = units::um(parse_double(*e, src));
        else if (e->key == "spot_ghz") s.em.spot_frequency = units::ghz(parse_double(*e, src));
        else if (e->key == "elements_per_segment") s.elements_per_segment = parse_int(*e, src);
        else if (e->key == "deflection_limit_um") s.deflection_limit = units::um(parse_double(*e, src));
        else throw ParseError("unknown [model] key '" + e->key + "'", e->line, src);
    }
    if (!(s.em.substrate_resistivity > 0.0) || !(s.em.substrate_thickness_eff > 0.0) ||
        !(s.em.substrate_rel_permittivity > 0.0))
        throw Error("substrate constants must be > 0");
    if (s.elements_per_segment < 1) throw Error("elements_per_segment must be >= 1");
    if (!(s.deflection_limit > 0.0)) throw Error("deflection_limit must be > 0");
    (void)s.em.frequency_grid();  // validates the grid
    return s;
}

ConstraintSet constraints_from_document(const KeyValueDocument& doc) {
    const auto& src = doc.source();
    ConstraintSet c;
    for (const auto* e : doc.in_section("constraints")) {
        if (e->key == "max_shock_deflection_um") c.max_shock_deflection = units::um(parse_double(*e, src));
        else if (e->key == "min_resonant_frequency_hz") c.min_resonant_frequency = parse_double(*e, src);
        else if (e->key == "min_q") c.min_q = parse_double(*e, src);
        else if (e->key == "min_inductance_nh") c.min_inductance = parse_double(*e, src) * 1e-9;
        else if (e->key == "shock_accel_g") c.shock_accel = parse_double(*e, src) * units::kStandardGravity;
        else throw ParseError("unknown [constraints] key '" + e->key + "'", e->line, src);
    }
    if (auto v = c.violations(); !v.empty()) throw ValidationError(std::move(v));
    return c;
}

std::vector<Objective> objectives_from_document(const KeyValueDocument& doc) {
    const auto* e = doc.find("pareto", "objectives");
    if (e == nullptr) return {Objective::q_max, Objective::f_max_impact};
    std::vector<Objective> out;
    for (const auto& name : split_list(e->value, ',')) {
        try {
            out.push_back(objective_from_string(name));
        } catch (const Error& err) {
            throw ParseError(err.what(), e->line, doc.source());
        }
    }
    return out;
}

SweepGrid grid_from_document(const KeyValueDocument& doc, const MaterialTable& materials) {
    const auto& src = doc.source();
    SweepGrid grid;
    // The base spec takes the first value of every list.
    std::vector<KeyValueEntry> base = doc.entries();
    for (auto& e : base) {
        if (e.section != "spiral") continue;
        auto values = split_list(e.value, ',');
        for (const auto& v : values) {
            if (v.empty()) throw ParseError("empty value in list for '" + e.key + "'", e.line, src);
            SpiralSpec probe = SpiralSpec::reference_device(materials);
            apply_spec_key(probe, e.key, v, materials, e.line, src);
        }
        e.value = values.front();
        if (values.size() > 1) grid.axes.push_back({e.key, std::move(values)});
    }
    grid.base = spec_from_document(KeyValueDocument::from_entries(std::move(base), src), materials);
    return grid;
}

}  // namespace spiralq
