#include "spiralq/spec_io.hpp"

#include <algorithm>
#include <cstdlib>

#include <fmt/format.h>

#include "spiralq/error.hpp"
#include "spiralq/units.hpp"

namespace spiralq {

namespace {

const std::vector<std::string> kRequired{"inner_diameter", "trace_width", "spacing",
                                         "turns", "metal_thickness", "airgap_height"};

std::string num(double v) { return fmt::format("{:.9g}", v); }

}  // namespace

MaterialTable apply_material_document(const KeyValueDocument& doc, MaterialTable base) {
    const auto& src = doc.source();
    for (const auto& name : doc.sections()) {
        if (name.empty()) continue;
        Material m = base.contains(name) ? base.at(name) : Material{name, 0.0, 0.0, 0.3, {}, {}};
        for (const auto* e : doc.in_section(name)) {
            if (e->key == "youngs_modulus_gpa") m.youngs_modulus = parse_double(*e, src) * 1e9;
            else if (e->key == "density_kg_m3") m.density = parse_double(*e, src);
            else if (e->key == "poisson_ratio") m.poisson_ratio = parse_double(*e, src);
            else if (e->key == "resistivity_ohm_m") m.resistivity = parse_double(*e, src);
            else if (e->key == "rel_permittivity") m.rel_permittivity = parse_double(*e, src);
            else throw ParseError("unknown material key '" + e->key + "'", e->line, src);
        }
        if (auto v = m.violations(); !v.empty()) throw ValidationError(std::move(v));
        base.put(std::move(m));
    }
    for (const auto* e : doc.in_section(""))
        throw ParseError("material keys must sit inside a [material] section", e->line, src);
    return base;
}

MaterialTable resolve_material_table(const std::optional<std::string>& path) {
    auto table = MaterialTable::defaults();
    std::optional<std::string> file = path;
    if (!file) {
        if (const char* env = std::getenv(kMaterialsEnvVar); env != nullptr && *env != '\0') file = env;
    }
    if (file) table = apply_material_document(KeyValueDocument::load(*file), std::move(table));
    return table;
}

const std::vector<std::string>& spiral_keys() {
    static const std::vector<std::string> keys{
        "inner_diameter", "trace_width",      "spacing",         "turns",
        "metal_thickness", "airgap_height",   "lead_gap",        "dielectric_mode",
        "conductor_material", "oxide_rel_permittivity", "xbeam"};
    return keys;
}

void apply_spec_key(SpiralSpec& spec, const std::string& key, const std::string& value,
                    const MaterialTable& materials, std::size_t line, const std::string& source) {
    auto length = [&] { return units::um(parse_double_text(value, line, source)); };
    if (key == "inner_diameter") spec.inner_diameter = length();
    else if (key == "trace_width") spec.trace_width = length();
    else if (key == "spacing") spec.spacing = length();
    else if (key == "metal_thickness") spec.metal_thickness = length();
    else if (key == "airgap_height") spec.airgap_height = length();
    else if (key == "lead_gap") spec.lead_gap = length();
    else if (key == "oxide_rel_permittivity") spec.oxide_rel_permittivity = parse_double_text(value, line, source);
    else if (key == "turns") {
        KeyValueEntry e{"", key, value, line};
        spec.turns = parse_int(e, source);
    } else if (key == "dielectric_mode") {
        if (value == "oxide") spec.dielectric_mode = DielectricMode::oxide;
        else if (value == "airgap") spec.dielectric_mode = DielectricMode::airgap;
        else throw ParseError("dielectric_mode must be oxide or airgap, got '" + value + "'", line, source);
    } else if (key == "conductor_material") {
        if (!materials.contains(value)) throw ParseError("unknown material '" + value + "'", line, source);
        spec.conductor_material = materials.at(value);
    } else if (key == "xbeam") {
        KeyValueEntry e{"", key, value, line};
        if (parse_bool(e, source)) {
            if (!spec.xbeam) spec.xbeam = XBeamSpec::laminate_default(materials);
        } else {
            spec.xbeam.reset();
        }
    } else {
        throw ParseError("unknown key '" + key + "'", line, source);
    }
}

std::vector<Layer> parse_layers(const std::string& text, const MaterialTable& materials, std::size_t line,
                                const std::string& source) {
    std::vector<Layer> out;
    for (const auto& item : split_list(text, '/')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos)
            throw ParseError("layer '" + item + "' must be material:thickness_um", line, source);
        const std::string name = trim(std::string_view(item).substr(0, colon));
        if (!materials.contains(name)) throw ParseError("unknown material '" + name + "'", line, source);
        out.push_back({materials.at(name),
                       units::um(parse_double_text(trim(std::string_view(item).substr(colon + 1)), line, source))});
    }
    return out;
}

std::string format_layers(const std::vector<Layer>& layers) {
    std::string out;
    for (const auto& l : layers) {
        if (!out.empty()) out += " / ";
        out += l.material.name + ":" + num(units::to_um(l.thickness));
    }
    return out;
}

SpiralSpec spec_from_document(const KeyValueDocument& doc, const MaterialTable& materials) {
    const auto& src = doc.source();
    if (!doc.has_section("spiral")) throw ParseError("missing [spiral] section", 0, src);
    for (const auto& sec : doc.sections())
        if (sec != "spiral" && sec != "xbeam" && sec != "model" && sec != "constraints" && sec != "pareto")
            throw ParseError("unknown section [" + sec + "]", 0, src);
    for (const auto* e : doc.in_section(""))
        throw ParseError("key '" + e->key + "' outside any section", e->line, src);

    SpiralSpec spec = SpiralSpec::reference_device(materials);
    for (const auto& k : kRequired)
        if (doc.find("spiral", k) == nullptr) throw ParseError("missing required key '" + k + "'", 0, src);

    if (doc.has_section("xbeam")) {
        XBeamSpec x = XBeamSpec::laminate_default(materials);
        for (const auto* e : doc.in_section("xbeam")) {
            if (e->key == "arm_width") x.arm_width = units::um(parse_double(*e, src));
            else if (e->key == "layers") x.layers = parse_layers(e->value, materials, e->line, src);
            else if (e->key == "anchored") x.anchored = parse_bool(*e, src);
            else throw ParseError("unknown [xbeam] key '" + e->key + "'", e->line, src);
        }
        spec.xbeam = x;
    }
    for (const auto* e : doc.in_section("spiral")) apply_spec_key(spec, e->key, e->value, materials, e->line, src);

    if (auto v = validate_spec(spec); !v.empty()) throw ValidationError(std::move(v));
    return spec;
}

SpiralSpec load_spec(const std::string& path, const MaterialTable& materials) {
    return spec_from_document(KeyValueDocument::load(path), materials);
}

std::string spec_to_text(const SpiralSpec& s) {
    std::string out = "[spiral]\n";
    out += "inner_diameter = " + num(units::to_um(s.inner_diameter)) + "\n";
    out += "trace_width = " + num(units::to_um(s.trace_width)) + "\n";
    out += "spacing = " + num(units::to_um(s.spacing)) + "\n";
    out += "turns = " + std::to_string(s.turns) + "\n";
    out += "metal_thickness = " + num(units::to_um(s.metal_thickness)) + "\n";
    out += "airgap_height = " + num(units::to_um(s.airgap_height)) + "\n";
    out += "lead_gap = " + num(units::to_um(s.lead_gap)) + "\n";
    out += "dielectric_mode = " + to_string(s.dielectric_mode) + "\n";
    out += "conductor_material = " + s.conductor_material.name + "\n";
    out += "oxide_rel_permittivity = " + num(s.oxide_rel_permittivity) + "\n";
    if (s.xbeam) {
        out += "\n[xbeam]\n";
        out += "arm_width = " + num(units::to_um(s.xbeam->arm_width)) + "\n";
        out += "layers = " + format_layers(s.xbeam->layers) + "\n";
        out += std::string("anchored = ") + (s.xbeam->anchored ? "true" : "false") + "\n";
    }
    return out;
}

}  // namespace spiralq
