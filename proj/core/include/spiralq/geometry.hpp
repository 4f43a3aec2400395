#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "spiralq/material.hpp"

namespace spiralq {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
    friend bool operator==(const Vec3&, const Vec3&) = default;

    double dot(Vec3 o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(Vec3 o) const { return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x}; }
    double norm() const { return std::sqrt(dot(*this)); }
};

enum class DielectricMode { oxide, airgap };

struct Layer {
    Material material;
    double thickness = 0.0;  // m
};

struct XBeamSpec {
    double arm_width = 10e-6;  // m
    std::vector<Layer> layers; // top to bottom
    bool anchored = true;

    /// Si3N4 0.1 um over SiO2 0.6 um, 10 um arms, anchored at the outer corners.
    static XBeamSpec laminate_default(const MaterialTable& materials);
    double total_thickness() const;
};

/// Full parametric description of one square spiral. All lengths in metres.
struct SpiralSpec {
    double inner_diameter = 100e-6;
    double trace_width = 10e-6;
    double spacing = 2e-6;
    int turns = 10;
    double metal_thickness = 1e-6;
    double airgap_height = 2.5e-6;
    double lead_gap = 1.6e-6;
    DielectricMode dielectric_mode = DielectricMode::airgap;
    Material conductor_material;
    std::optional<XBeamSpec> xbeam;
    double oxide_rel_permittivity = 3.9;

    double pitch() const { return trace_width + spacing; }

    /// The fabricated 10-turn device: 100/10/2 um, 1 um Cu, 2.5 um air gap,
    /// 1.6 um lead gap, no X-beam.
    static SpiralSpec reference_device(const MaterialTable& materials);
};

std::string to_string(DielectricMode mode);

enum class LayerTag { winding, lead, xbeam_arm };

std::string to_string(LayerTag tag);

struct Segment {
    Vec3 start;
    Vec3 end;
    double width = 0.0;      // m
    double thickness = 0.0;  // m
    LayerTag layer_tag = LayerTag::winding;

    double length() const { return (end - start).norm(); }
    Vec3 direction() const;  // unit vector start -> end
};

/// The spiral unrolled into straight conductors. Winding segments come first,
/// in current-flow order, followed by the lead and then any X-beam arms.
struct SegmentSet {
    std::vector<Segment> segments;
    std::vector<Vec3> anchors;  // mechanically fixed points

    std::vector<std::size_t> indices_of(LayerTag tag) const;
    std::size_t count(LayerTag tag) const;
    double total_length(LayerTag tag) const;
};

/// Every violated SpiralSpec invariant, one human-readable entry each. Each
/// entry starts with the offending field name.
std::vector<std::string> validate_spec(const SpiralSpec& spec);

/// Side length of winding segment k (0-based): inner_diameter + floor(k/2)*pitch.
double winding_side_length(const SpiralSpec& spec, std::size_t k);

/// Outward counter-clockwise square spiral starting at the origin along +x.
/// Throws ValidationError when the spec is invalid.
SegmentSet generate_layout(const SpiralSpec& spec);

/// Distance between two axis-aligned segments projected onto the winding plane.
double planar_clearance(const Segment& a, const Segment& b);

struct MassBreakdown {
    std::vector<double> per_segment;  // kg, same order as the SegmentSet
    double total = 0.0;               // kg
};

MassBreakdown conductor_mass(const SegmentSet& segments, const Material& material);

/// Mass of a rectangular bar, kg.
double bar_mass(double length, double width, double thickness, const Material& material);

}  // namespace spiralq
