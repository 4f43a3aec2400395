#include "spiralq/report.hpp"

#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "spiralq/error.hpp"
#include "spiralq/spec_io.hpp"
#include "spiralq/units.hpp"

namespace spiralq {

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return fmt::format("{:.8e}", v);
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

}  // namespace

namespace {

void emit(const Json& j, std::string& out, int depth) {
    const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
    const std::string close(static_cast<std::size_t>(2 * depth), ' ');
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) { out += "{}"; return; }
            out += "{\n";
            std::size_t i = 0;
            for (const auto& [key, value] : j.items()) {
                out += pad + Json(key).dump() + ": ";
                emit(value, out, depth + 1);
                out += ++i < j.size() ? ",\n" : "\n";
            }
            out += close + "}";
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) { out += "[]"; return; }
            out += "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                out += pad;
                emit(j[i], out, depth + 1);
                out += i + 1 < j.size() ? ",\n" : "\n";
            }
            out += close + "]";
            return;
        }
        case Json::value_t::number_float: {
            const double v = j.get<double>();
            out += std::isfinite(v) ? format_number(v) : "null";
            return;
        }
        default: out += j.dump(); return;
    }
}

}  // namespace

std::string dump_json(const Json& j) {
    std::string out;
    emit(j, out, 0);
    return out + "\n";
}

Json spec_json(const SpiralSpec& s) {
    Json j = Json::object();
    j["inner_diameter_um"] = units::to_um(s.inner_diameter);
    j["trace_width_um"] = units::to_um(s.trace_width);
    j["spacing_um"] = units::to_um(s.spacing);
    j["turns"] = s.turns;
    j["metal_thickness_um"] = units::to_um(s.metal_thickness);
    j["airgap_height_um"] = units::to_um(s.airgap_height);
    j["lead_gap_um"] = units::to_um(s.lead_gap);
    j["dielectric_mode"] = to_string(s.dielectric_mode);
    j["conductor_material"] = s.conductor_material.name;
    j["oxide_rel_permittivity"] = s.oxide_rel_permittivity;
    if (s.xbeam) {
        Json x = Json::object();
        x["arm_width_um"] = units::to_um(s.xbeam->arm_width);
        x["layers"] = format_layers(s.xbeam->layers);
        x["anchored"] = s.xbeam->anchored;
        j["xbeam"] = std::move(x);
    } else {
        j["xbeam"] = nullptr;
    }
    return j;
}

std::string qcurve_csv(const QCurve& c) {
    std::string out = "freq_hz,re_y11,im_y11,q,l_eff_h\n";
    for (std::size_t i = 0; i < c.frequencies.size(); ++i)
        out += format_number(c.frequencies[i]) + "," + format_number(c.y11[i].real()) + "," +
               format_number(c.y11[i].imag()) + "," + format_number(c.q_values[i]) + "," +
               format_number(c.l_eff[i]) + "\n";
    return out;
}

std::string qcurve_brief_csv(const QCurve& c) {
    std::string out = "freq_hz,q,l_eff_h\n";
    for (std::size_t i = 0; i < c.frequencies.size(); ++i)
        out += format_number(c.frequencies[i]) + "," + format_number(c.q_values[i]) + "," +
               format_number(c.l_eff[i]) + "\n";
    return out;
}

Json qcurve_summary(const QCurve& c, double spot_frequency) {
    const auto [spot, l] = c.l_eff_near(spot_frequency);
    Json j = Json::object();
    j["q_max"] = c.q_max;
    j["f_peak_hz"] = c.f_peak;
    j["spot_hz"] = spot;
    j["l_at_spot_hz"] = l;
    if (!c.skipped.empty()) {
        Json s = Json::array();
        for (double f : c.skipped) s.push_back(f);
        j["skipped_hz"] = std::move(s);
    }
    return j;
}

namespace {

Json strip_json(const StripAnalysis& s) {
    Json j = Json::object();
    j["span_m"] = s.span;
    j["kappa_n_per_m"] = s.kappa;
    j["mass_kg"] = s.mass;
    j["shock_deflection_m"] = s.shock_deflection;
    j["f_resonant_hz"] = s.f_resonant;
    return j;
}

Json impact_json(const std::optional<ImpactResult>& r) {
    if (!r) return nullptr;
    Json j = Json::object();
    j["force_n"] = r->force;
    j["max_unit_deflection_m_per_n"] = r->max_unit_deflection;
    j["critical_node"] = (r->critical_node);
    return j;
}

}  // namespace

Json mech_report_json(const MechReport& r) {
    Json j = Json::object();
    j["kappa_outer"] = r.outer.kappa;
    j["kappa_inner"] = r.inner.kappa;
    Json shock = Json::object();
    shock["outer_m"] = r.outer.shock_deflection;
    shock["inner_m"] = r.inner.shock_deflection;
    j["deflection_at_shock"] = std::move(shock);
    j["f_resonant"] = r.f_resonant();
    j["deflection_limit_m"] = r.deflection_limit;
    Json impact = Json::object();
    impact["pillar"] = impact_json(r.pillar);
    impact["xbeam"] = impact_json(r.xbeam);
    j["f_max_impact"] = std::move(impact);
    const auto ratio = r.enhancement_ratio();
    j["enhancement_ratio"] = ratio ? Json(*ratio) : Json();
    j["outer_strip"] = strip_json(r.outer);
    j["inner_strip"] = strip_json(r.inner);
    return j;
}

std::string displacement_csv(const FrameModel& model, const Displacements& d) {
    std::string out = "node_id,x,y,z,uz\n";
    for (std::size_t i = 0; i < model.nodes.size(); ++i) {
        const auto& p = model.nodes[i].position;
        out += std::to_string(i) + "," + format_number(p.x) + "," + format_number(p.y) + "," +
               format_number(p.z) + "," + format_number(d.uz(i)) + "\n";
    }
    return out;
}

std::string sweep_csv(std::span<const DesignPoint> points) {
    std::string out =
        "index,inner_diameter_um,trace_width_um,spacing_um,turns,metal_thickness_um,airgap_height_um,"
        "lead_gap_um,dielectric_mode,conductor_material,oxide_rel_permittivity,xbeam,"
        "l_total_h,q_max,f_peak_hz,kappa_outer_n_per_m,f_max_impact_n,f_resonant_hz,shock_deflection_m,"
        "feasible,violated,error\n";
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& p = points[i];
        const auto& s = p.spec;
        out += std::to_string(i) + "," + format_number(units::to_um(s.inner_diameter)) + "," +
               format_number(units::to_um(s.trace_width)) + "," + format_number(units::to_um(s.spacing)) + "," +
               std::to_string(s.turns) + "," + format_number(units::to_um(s.metal_thickness)) + "," +
               format_number(units::to_um(s.airgap_height)) + "," + format_number(units::to_um(s.lead_gap)) + "," +
               to_string(s.dielectric_mode) + "," + csv_field(s.conductor_material.name) + "," +
               format_number(s.oxide_rel_permittivity) + "," + (s.xbeam ? "on" : "off") + ",";
        if (p.metrics) {
            const auto& m = *p.metrics;
            out += format_number(m.l_total) + "," + format_number(m.q_max) + "," + format_number(m.f_peak) + "," +
                   format_number(m.kappa_outer) + "," + format_number(m.f_max_impact) + "," +
                   format_number(m.f_resonant) + "," + format_number(m.shock_deflection) + ",";
        } else {
            out += ",,,,,,,";
        }
        std::string violated;
        for (const auto& v : p.violated) violated += (violated.empty() ? "" : ";") + v;
        out += std::string(p.feasible ? "true" : "false") + "," + csv_field(violated) + "," + csv_field(p.error) + "\n";
    }
    return out;
}

namespace {

Json point_json(std::size_t index, const DesignPoint& p) {
    Json j = Json::object();
    j["index"] = index;
    Json gi = Json::array();
    for (auto g : p.grid_index) gi.push_back(g);
    j["grid_index"] = std::move(gi);
    j["spec"] = spec_json(p.spec);
    if (p.metrics) {
        const auto& m = *p.metrics;
        Json mj = Json::object();
        mj["l_total_h"] = m.l_total;
        mj["q_max"] = m.q_max;
        mj["f_peak_hz"] = m.f_peak;
        mj["kappa_outer_n_per_m"] = m.kappa_outer;
        mj["f_max_impact_n"] = m.f_max_impact;
        mj["f_resonant_hz"] = m.f_resonant;
        mj["shock_deflection_m"] = m.shock_deflection;
        j["metrics"] = std::move(mj);
    }
    return j;
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(); }

}  // namespace

Json sweep_json(std::span<const DesignPoint> points, const ParetoResult& front, const ConstraintSet& c,
                std::span<const Objective> objectives) {
    Json j = Json::object();
    Json cj = Json::object();
    cj["max_shock_deflection_m"] = optional_number(c.max_shock_deflection);
    cj["max_shock_deflection_rule"] = c.max_shock_deflection ? "fixed" : "min(spacing, airgap_height)/2";
    cj["min_resonant_frequency_hz"] = c.min_resonant_frequency;
    cj["min_q"] = optional_number(c.min_q);
    cj["min_inductance_h"] = optional_number(c.min_inductance);
    cj["shock_accel_m_s2"] = c.shock_accel;
    j["constraints"] = std::move(cj);
    Json oj = Json::array();
    for (auto o : objectives) oj.push_back(to_string(o));
    j["objectives"] = std::move(oj);
    j["point_count"] = (points.size());
    Json fj = Json::array();
    for (auto i : front.members) fj.push_back(point_json(i, points[i]));
    j["front"] = std::move(fj);
    if (!front.warning.empty()) j["warning"] = front.warning;
    Json failed = Json::array();
    for (std::size_t i = 0; i < points.size(); ++i)
        if (!points[i].metrics) {
            Json f = point_json(i, points[i]);
            f["error"] = points[i].error;
            failed.push_back(std::move(f));
        }
    j["failed"] = std::move(failed);
    return j;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    out << content;
    if (!out) throw Error("write failed for '" + path + "'");
}

}  // namespace spiralq
