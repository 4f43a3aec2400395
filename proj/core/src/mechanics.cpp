#include "spiralq/mechanics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "spiralq/error.hpp"

namespace spiralq {

double cantilever_stiffness(double youngs_modulus, double width, double thickness, double length) {
    if (!(youngs_modulus > 0.0 && width > 0.0 && thickness > 0.0 && length > 0.0))
        throw DomainError("cantilever_stiffness needs positive E, w, t and L");
    return youngs_modulus * width * thickness * thickness * thickness / (4.0 * length * length * length);
}

double shock_deflection(double kappa, double mass, double accel) {
    if (!(kappa > 0.0)) throw DomainError("stiffness must be > 0");
    return mass * accel / kappa;
}

double resonant_frequency(double kappa, double mass) {
    if (!(kappa > 0.0) || !(mass > 0.0)) throw DomainError("stiffness and mass must be > 0");
    return std::sqrt(kappa / mass) / (2.0 * units::kPi);
}

StripAnalysis analyze_strip(double span, double width, double thickness, const Material& material,
                            double accel) {
    StripAnalysis s;
    s.span = span;
    s.kappa = cantilever_stiffness(material.youngs_modulus, width, thickness, span);
    s.mass = bar_mass(span, width, thickness, material);
    s.shock_deflection = shock_deflection(s.kappa, s.mass, accel);
    s.f_resonant = resonant_frequency(s.kappa, s.mass);
    return s;
}

double strip_span(const SpiralSpec& spec, std::size_t side_index) {
    return winding_side_length(spec, side_index) - spec.trace_width;
}

StripAnalysis outer_strip(const SpiralSpec& spec, double accel) {
    const std::size_t last = 4 * static_cast<std::size_t>(spec.turns) - 1;
    return analyze_strip(strip_span(spec, last), spec.trace_width, spec.metal_thickness,
                         spec.conductor_material, accel);
}

StripAnalysis inner_strip(const SpiralSpec& spec, double accel) {
    return analyze_strip(strip_span(spec, 0), spec.trace_width, spec.metal_thickness,
                         spec.conductor_material, accel);
}

// ---------------------------------------------------------------------------

BeamSection BeamSection::rectangular(double width, double thickness) {
    return {width, thickness, {}};
}

BeamSection BeamSection::laminate(double width, std::vector<Layer> layers) {
    BeamSection s;
    s.width = width;
    for (const auto& l : layers) s.thickness += l.thickness;
    s.layers = std::move(layers);
    return s;
}

double BeamSection::torsion_constant() const {
    const double a = std::max(width, thickness);
    const double b = std::min(width, thickness);
    const double r = b / a;
    return a * b * b * b * (1.0 / 3.0 - 0.21 * r * (1.0 - r * r * r * r / 12.0));
}

SectionRigidity BeamSection::rigidity(const Material& material) const {
    SectionRigidity r;
    if (layers.empty()) {
        r.ea = material.youngs_modulus * area();
        r.ei_out = material.youngs_modulus * inertia_out();
        r.ei_in = material.youngs_modulus * inertia_in();
        r.gj = material.shear_modulus() * torsion_constant();
        return r;
    }
    // Layer centroids measured downward from the top face.
    double depth = 0.0, ea_z = 0.0, g_t = 0.0;
    std::vector<double> centroid;
    for (const auto& l : layers) {
        centroid.push_back(depth + 0.5 * l.thickness);
        depth += l.thickness;
        const double ea_i = l.material.youngs_modulus * width * l.thickness;
        r.ea += ea_i;
        ea_z += ea_i * centroid.back();
        r.ei_in += l.material.youngs_modulus * l.thickness * width * width * width / 12.0;
        g_t += l.material.shear_modulus() * l.thickness;
    }
    const double neutral = ea_z / r.ea;
    for (std::size_t i = 0; i < layers.size(); ++i) {
        const double t = layers[i].thickness;
        const double dz = centroid[i] - neutral;
        r.ei_out += layers[i].material.youngs_modulus * (width * t * t * t / 12.0 + width * t * dz * dz);
    }
    r.gj = torsion_constant() * g_t / thickness;
    return r;
}

// ---------------------------------------------------------------------------

std::string to_string(Dof d) {
    static constexpr const char* kNames[] = {"ux", "uy", "uz", "rx", "ry", "rz"};
    return kNames[static_cast<int>(d)];
}

std::size_t FrameModel::add_node(Vec3 position, LayerTag tag) {
    nodes.push_back({position, tag});
    return nodes.size() - 1;
}

std::size_t FrameModel::add_element(std::size_t a, std::size_t b, BeamSection section, Material material) {
    elements.push_back({a, b, std::move(section), std::move(material)});
    return elements.size() - 1;
}

void FrameModel::fix(std::size_t node, Dof dof) {
    fixed_dofs.insert(node * kDofsPerNode + static_cast<std::size_t>(dof));
}

void FrameModel::fix_node(std::size_t node) {
    for (int d = 0; d < kDofsPerNode; ++d) fix(node, static_cast<Dof>(d));
}

void FrameModel::add_load(std::size_t node, Dof dof, double value) {
    loads[node][static_cast<std::size_t>(dof)] += value;
}

bool FrameModel::is_fixed(std::size_t node, Dof dof) const {
    return fixed_dofs.count(node * kDofsPerNode + static_cast<std::size_t>(dof)) != 0;
}

std::vector<std::string> FrameModel::violations() const {
    std::vector<std::string> v;
    for (std::size_t e = 0; e < elements.size(); ++e) {
        const auto& el = elements[e];
        if (el.node_a >= nodes.size() || el.node_b >= nodes.size()) {
            v.push_back(fmt::format("element {} references a missing node", e));
            continue;
        }
        if (!((nodes[el.node_b].position - nodes[el.node_a].position).norm() > 0.0))
            v.push_back(fmt::format("element {} has zero length", e));
    }
    for (const auto& l : links)
        if (l.master >= nodes.size() || l.slave >= nodes.size() || l.master == l.slave)
            v.push_back(fmt::format("rigid link {} -> {} is invalid", l.master, l.slave));
    for (auto dof : fixed_dofs)
        if (dof / kDofsPerNode >= nodes.size())
            v.push_back(fmt::format("constraint on missing node {}", dof / kDofsPerNode));
    for (const auto& [n, f] : loads)
        if (n >= nodes.size()) v.push_back(fmt::format("load on missing node {}", n));
    if (fixed_dofs.empty()) v.emplace_back("no constrained degrees of freedom (rigid-body modes)");
    return v;
}

// ---------------------------------------------------------------------------

namespace {

constexpr double kMergeTol = 1e-12;  // m
constexpr double kParamTol = 1e-12;

struct DisjointSets {
    std::vector<std::size_t> parent;
    explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

// Parameters (s on a, u on b) where the planar projections of two segments meet.
std::optional<std::pair<double, double>> planar_intersection(const Segment& a, const Segment& b) {
    const double rx = a.end.x - a.start.x, ry = a.end.y - a.start.y;
    const double sx = b.end.x - b.start.x, sy = b.end.y - b.start.y;
    const double denom = rx * sy - ry * sx;
    const double scale = std::hypot(rx, ry) * std::hypot(sx, sy);
    if (std::abs(denom) <= 1e-12 * scale) return std::nullopt;
    const double qx = b.start.x - a.start.x, qy = b.start.y - a.start.y;
    const double s = (qx * sy - qy * sx) / denom;
    const double u = (qx * ry - qy * rx) / denom;
    constexpr double eps = 1e-12;
    if (s < -eps || s > 1.0 + eps || u < -eps || u > 1.0 + eps) return std::nullopt;
    return std::pair{std::clamp(s, 0.0, 1.0), std::clamp(u, 0.0, 1.0)};
}

class NodeTable {
public:
    explicit NodeTable(FrameModel& model) : model_(model) {}

    std::size_t intern(Vec3 p, LayerTag tag) {
        if (auto found = lookup(p)) return *found;
        return model_.add_node(p, tag);
    }

    std::optional<std::size_t> lookup(Vec3 p) const {
        for (std::size_t i = 0; i < model_.nodes.size(); ++i)
            if ((model_.nodes[i].position - p).norm() <= kMergeTol) return i;
        return std::nullopt;
    }

private:
    FrameModel& model_;
};

}  // namespace

FrameModel build_frame(const SegmentSet& segments, const SpiralSpec& spec, int elements_per_segment) {
    if (elements_per_segment < 1) throw Error("elements_per_segment must be >= 1");
    if (segments.anchors.empty())
        throw StabilityError("unconstrained model: the layout has no anchor points");

    const auto& segs = segments.segments;
    std::vector<std::vector<double>> params(segs.size());
    for (auto& p : params)
        for (int k = 0; k <= elements_per_segment; ++k)
            p.push_back(static_cast<double>(k) / elements_per_segment);

    struct Crossing {
        std::size_t seg_a;
        double s;
        std::size_t seg_b;
        double u;
    };
    std::vector<Crossing> arm_winding, arm_arm;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        if (segs[i].layer_tag != LayerTag::xbeam_arm) continue;
        for (std::size_t j = 0; j < segs.size(); ++j) {
            if (j == i) continue;
            const auto tag = segs[j].layer_tag;
            if (tag == LayerTag::lead || (tag == LayerTag::xbeam_arm && j < i)) continue;
            if (auto hit = planar_intersection(segs[i], segs[j])) {
                params[i].push_back(hit->first);
                params[j].push_back(hit->second);
                (tag == LayerTag::winding ? arm_winding : arm_arm)
                    .push_back({i, hit->first, j, hit->second});
            }
        }
    }

    FrameModel model;
    NodeTable table(model);
    std::vector<std::vector<std::size_t>> seg_nodes(segs.size());
    for (std::size_t i = 0; i < segs.size(); ++i) {
        auto& p = params[i];
        std::sort(p.begin(), p.end());
        const double len = segs[i].length();
        p.erase(std::unique(p.begin(), p.end(),
                            [len](double a, double b) { return std::abs(a - b) * len <= kParamTol; }),
                p.end());
        const Vec3 d = segs[i].end - segs[i].start;
        for (double t : p) {
            const Vec3 pos = t == 1.0 ? segs[i].end : segs[i].start + t * d;
            seg_nodes[i].push_back(table.intern(pos, segs[i].layer_tag));
        }
    }

    for (std::size_t i = 0; i < segs.size(); ++i) {
        const bool arm = segs[i].layer_tag == LayerTag::xbeam_arm;
        if (arm && !spec.xbeam) throw Error("layout contains X-beam arms but the spec has no X-beam");
        const BeamSection section = arm ? BeamSection::laminate(segs[i].width, spec.xbeam->layers)
                                        : BeamSection::rectangular(segs[i].width, segs[i].thickness);
        const Material& material = arm ? spec.xbeam->layers.front().material : spec.conductor_material;
        const auto& ids = seg_nodes[i];
        for (std::size_t k = 0; k + 1 < ids.size(); ++k)
            if (ids[k] != ids[k + 1]) model.add_element(ids[k], ids[k + 1], section, material);
    }

    for (const auto& a : segments.anchors) {
        const auto node = table.lookup(a);
        if (!node) throw Error("anchor point does not coincide with any frame node");
        model.fix_node(*node);
    }

    // Rigid groups: arm/winding crossings and lead-end vias.
    DisjointSets groups(model.nodes.size());
    auto node_at = [&](std::size_t seg, double t) {
        const auto& p = params[seg];
        const double len = segs[seg].length();
        for (std::size_t k = 0; k < p.size(); ++k)
            if (std::abs(p[k] - t) * len <= kParamTol) return seg_nodes[seg][k];
        throw Error("internal: crossing parameter lost during discretisation");
    };
    for (const auto& c : arm_winding) groups.unite(node_at(c.seg_a, c.s), node_at(c.seg_b, c.u));
    for (std::size_t i = 0; i < segs.size(); ++i) {
        if (segs[i].layer_tag != LayerTag::lead) continue;
        for (std::size_t lead_node : {seg_nodes[i].front(), seg_nodes[i].back()}) {
            const Vec3 p = model.nodes[lead_node].position;
            for (std::size_t n = 0; n < model.nodes.size(); ++n) {
                const auto& q = model.nodes[n];
                if (q.tag == LayerTag::winding && std::hypot(q.position.x - p.x, q.position.y - p.y) <= kMergeTol)
                    groups.unite(lead_node, n);
            }
        }
    }

    std::map<std::size_t, std::vector<std::size_t>> members;
    for (std::size_t n = 0; n < model.nodes.size(); ++n) members[groups.find(n)].push_back(n);
    for (const auto& [root, nodes] : members) {
        if (nodes.size() < 2) continue;
        auto anchored = std::find_if(nodes.begin(), nodes.end(),
                                     [&](std::size_t n) { return model.is_fixed(n, Dof::ux); });
        const std::size_t master = anchored != nodes.end() ? *anchored : nodes.front();
        for (auto n : nodes)
            if (n != master) model.links.push_back({master, n});
    }
    return model;
}

// ---------------------------------------------------------------------------

std::optional<double> MechReport::enhancement_ratio() const {
    if (!pillar || !xbeam) return std::nullopt;
    return xbeam->force / pillar->force;
}

MechReport mechanical_report(const SpiralSpec& spec, const MaterialTable& materials,
                             const MechSettings& settings, bool with_pillar, bool with_xbeam) {
    MechReport r;
    r.outer = outer_strip(spec, settings.shock_accel);
    r.inner = inner_strip(spec, settings.shock_accel);
    r.deflection_limit = settings.deflection_limit;
    auto impact = [&](const SpiralSpec& s) {
        const auto layout = generate_layout(s);
        return max_impact_force(build_frame(layout, s, settings.elements_per_segment),
                                settings.deflection_limit);
    };
    if (with_pillar) {
        SpiralSpec s = spec;
        s.xbeam.reset();
        r.pillar = impact(s);
    }
    if (with_xbeam) {
        SpiralSpec s = spec;
        if (!s.xbeam) s.xbeam = XBeamSpec::laminate_default(materials);
        r.xbeam = impact(s);
    }
    return r;
}

}  // namespace spiralq
