#include "spiralq/geometry.hpp"

#include <algorithm>
#include <array>
#include <limits>

#include "spiralq/error.hpp"

namespace spiralq {

namespace {

double point_segment_distance_2d(double px, double py, const Segment& s) {
    const double ax = s.start.x, ay = s.start.y;
    const double dx = s.end.x - ax, dy = s.end.y - ay;
    const double len2 = dx * dx + dy * dy;
    double t = len2 > 0.0 ? ((px - ax) * dx + (py - ay) * dy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const double cx = ax + t * dx - px, cy = ay + t * dy - py;
    return std::sqrt(cx * cx + cy * cy);
}

bool segments_intersect_2d(const Segment& a, const Segment& b) {
    auto orient = [](double ax, double ay, double bx, double by, double cx, double cy) {
        const double v = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
        return (v > 0.0) - (v < 0.0);
    };
    const int o1 = orient(a.start.x, a.start.y, a.end.x, a.end.y, b.start.x, b.start.y);
    const int o2 = orient(a.start.x, a.start.y, a.end.x, a.end.y, b.end.x, b.end.y);
    const int o3 = orient(b.start.x, b.start.y, b.end.x, b.end.y, a.start.x, a.start.y);
    const int o4 = orient(b.start.x, b.start.y, b.end.x, b.end.y, a.end.x, a.end.y);
    return o1 * o2 < 0 && o3 * o4 < 0;
}

}  // namespace

XBeamSpec XBeamSpec::laminate_default(const MaterialTable& materials) {
    XBeamSpec x;
    x.arm_width = 10e-6;
    x.layers = {{materials.at("Si3N4"), 0.1e-6}, {materials.at("SiO2"), 0.6e-6}};
    x.anchored = true;
    return x;
}

double XBeamSpec::total_thickness() const {
    double t = 0.0;
    for (const auto& l : layers) t += l.thickness;
    return t;
}

SpiralSpec SpiralSpec::reference_device(const MaterialTable& materials) {
    SpiralSpec s;
    s.conductor_material = materials.at("Cu");
    return s;
}

std::string to_string(DielectricMode mode) {
    return mode == DielectricMode::oxide ? "oxide" : "airgap";
}

std::string to_string(LayerTag tag) {
    switch (tag) {
        case LayerTag::winding: return "winding";
        case LayerTag::lead: return "lead";
        case LayerTag::xbeam_arm: return "xbeam_arm";
    }
    return "unknown";
}

Vec3 Segment::direction() const {
    const Vec3 d = end - start;
    const double n = d.norm();
    return n > 0.0 ? (1.0 / n) * d : Vec3{};
}

std::vector<std::size_t> SegmentSet::indices_of(LayerTag tag) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < segments.size(); ++i)
        if (segments[i].layer_tag == tag) out.push_back(i);
    return out;
}

std::size_t SegmentSet::count(LayerTag tag) const {
    return static_cast<std::size_t>(std::count_if(
        segments.begin(), segments.end(), [tag](const Segment& s) { return s.layer_tag == tag; }));
}

double SegmentSet::total_length(LayerTag tag) const {
    double sum = 0.0;
    for (const auto& s : segments)
        if (s.layer_tag == tag) sum += s.length();
    return sum;
}

std::vector<std::string> validate_spec(const SpiralSpec& spec) {
    std::vector<std::string> v;
    auto positive = [&v](double value, const char* field) {
        if (!(value > 0.0) || !std::isfinite(value))
            v.push_back(std::string(field) + " must be > 0 (got " + std::to_string(value) + ")");
    };
    positive(spec.inner_diameter, "inner_diameter");
    positive(spec.trace_width, "trace_width");
    positive(spec.spacing, "spacing");
    if (spec.turns < 1) v.push_back("turns must be >= 1 (got " + std::to_string(spec.turns) + ")");
    positive(spec.metal_thickness, "metal_thickness");
    positive(spec.airgap_height, "airgap_height");
    positive(spec.lead_gap, "lead_gap");
    positive(spec.oxide_rel_permittivity, "oxide_rel_permittivity");

    for (const auto& m : spec.conductor_material.violations())
        v.push_back("conductor_material " + m);
    if (!spec.conductor_material.resistivity)
        v.push_back("conductor_material " + spec.conductor_material.name + " has no resistivity");

    if (spec.xbeam) {
        const auto& x = *spec.xbeam;
        positive(x.arm_width, "xbeam.arm_width");
        if (x.layers.empty()) v.push_back("xbeam.layers must contain at least one layer");
        for (const auto& l : x.layers) {
            if (!(l.thickness > 0.0))
                v.push_back("xbeam.layers thickness of " + l.material.name + " must be > 0");
            for (const auto& m : l.material.violations()) v.push_back("xbeam.layers " + m);
        }
    }
    return v;
}

double winding_side_length(const SpiralSpec& spec, std::size_t k) {
    return spec.inner_diameter + static_cast<double>(k / 2) * spec.pitch();
}

SegmentSet generate_layout(const SpiralSpec& spec) {
    if (auto v = validate_spec(spec); !v.empty()) throw ValidationError(std::move(v));

    static constexpr std::array<std::array<double, 2>, 4> kDirs{{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}};
    const double w = spec.trace_width;
    const double t = spec.metal_thickness;
    const double z_winding = spec.airgap_height + 0.5 * t;
    const double z_lead = spec.lead_gap + 0.5 * t;

    SegmentSet out;
    const std::size_t n_winding = 4 * static_cast<std::size_t>(spec.turns);
    out.segments.reserve(n_winding + 3);

    double x = 0.0, y = 0.0;
    double xmin = 0.0, xmax = 0.0, ymin = 0.0, ymax = 0.0;
    for (std::size_t k = 0; k < n_winding; ++k) {
        const double side = winding_side_length(spec, k);
        const auto& d = kDirs[k % 4];
        const double nx = x + d[0] * side, ny = y + d[1] * side;
        out.segments.push_back({{x, y, z_winding}, {nx, ny, z_winding}, w, t, LayerTag::winding});
        x = nx;
        y = ny;
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
    }

    // Underpass from the inner terminal straight out along -y, under every bottom side.
    // Its two ends (via pillar and pad) are the only anchors of the bare spiral.
    const Vec3 lead_in{0.0, 0.0, z_lead};
    const Vec3 lead_out{0.0, ymin - spec.pitch(), z_lead};
    out.segments.push_back({lead_in, lead_out, w, t, LayerTag::lead});

    out.anchors = {lead_in, lead_out};

    if (spec.xbeam) {
        const auto& xb = *spec.xbeam;
        const double z_arm = spec.airgap_height - 0.5 * xb.total_thickness();
        const double h = 0.5 * w;
        const Vec3 c00{xmin - h, ymin - h, z_arm}, c11{xmax + h, ymax + h, z_arm};
        const Vec3 c10{xmax + h, ymin - h, z_arm}, c01{xmin - h, ymax + h, z_arm};
        out.segments.push_back({c00, c11, xb.arm_width, xb.total_thickness(), LayerTag::xbeam_arm});
        out.segments.push_back({c10, c01, xb.arm_width, xb.total_thickness(), LayerTag::xbeam_arm});
        if (xb.anchored) {
            for (const auto& p : {c00, c11, c10, c01}) out.anchors.push_back(p);
        }
    }
    return out;
}

double planar_clearance(const Segment& a, const Segment& b) {
    double centre = 0.0;
    if (!segments_intersect_2d(a, b)) {
        centre = std::min({point_segment_distance_2d(a.start.x, a.start.y, b),
                           point_segment_distance_2d(a.end.x, a.end.y, b),
                           point_segment_distance_2d(b.start.x, b.start.y, a),
                           point_segment_distance_2d(b.end.x, b.end.y, a)});
    }
    return centre - 0.5 * (a.width + b.width);
}

double bar_mass(double length, double width, double thickness, const Material& material) {
    return length * width * thickness * material.density;
}

MassBreakdown conductor_mass(const SegmentSet& segments, const Material& material) {
    MassBreakdown out;
    out.per_segment.reserve(segments.segments.size());
    for (const auto& s : segments.segments) {
        const double m = s.layer_tag == LayerTag::xbeam_arm
                             ? 0.0
                             : bar_mass(s.length(), s.width, s.thickness, material);
        out.per_segment.push_back(m);
        out.total += m;
    }
    return out;
}

}  // namespace spiralq
