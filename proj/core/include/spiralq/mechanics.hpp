#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "spiralq/geometry.hpp"
#include "spiralq/units.hpp"

namespace spiralq {

// ---------------------------------------------------------------------------
// Closed-form strip mechanics

/// Tip stiffness of a rectangular cantilever deflected through its thickness:
/// E w t^3 / (4 L^3), identical to 3 E I / L^3 with I = w t^3 / 12.
double cantilever_stiffness(double youngs_modulus, double width, double thickness, double length);

/// Quasi-static deflection b = m a / kappa.
double shock_deflection(double kappa, double mass, double accel);

/// Single-degree-of-freedom resonance (1 / 2pi) sqrt(kappa / m).
double resonant_frequency(double kappa, double mass);

inline constexpr double kDefaultShockAccel = 20.0 * units::kStandardGravity;

struct StripAnalysis {
    double span = 0.0;       // m, free length between the corner junctions
    double kappa = 0.0;      // N/m
    double mass = 0.0;       // kg
    double shock_deflection = 0.0;  // m
    double f_resonant = 0.0;        // Hz
};

StripAnalysis analyze_strip(double span, double width, double thickness, const Material& material,
                            double accel = kDefaultShockAccel);

/// A winding side treated as a cantilever spans its centre-line length minus
/// one trace width (the corner squares it shares with its neighbours).
double strip_span(const SpiralSpec& spec, std::size_t side_index);

/// Outermost (longest) and innermost (shortest) winding strips.
StripAnalysis outer_strip(const SpiralSpec& spec, double accel = kDefaultShockAccel);
StripAnalysis inner_strip(const SpiralSpec& spec, double accel = kDefaultShockAccel);

// ---------------------------------------------------------------------------
// Sections

/// Axial, out-of-plane bending, in-plane bending and torsional rigidities.
struct SectionRigidity {
    double ea = 0.0;      // N
    double ei_out = 0.0;  // N m^2, bending normal to the wafer
    double ei_in = 0.0;   // N m^2, bending in the wafer plane
    double gj = 0.0;      // N m^2
};

/// Rectangular section, optionally a laminate of layers stacked through the
/// thickness (top to bottom). Laminates use the transformed-section method
/// about the modulus-weighted neutral axis.
struct BeamSection {
    double width = 0.0;      // m
    double thickness = 0.0;  // m
    std::vector<Layer> layers;

    static BeamSection rectangular(double width, double thickness);
    static BeamSection laminate(double width, std::vector<Layer> layers);

    double area() const { return width * thickness; }
    double inertia_out() const { return width * thickness * thickness * thickness / 12.0; }
    double inertia_in() const { return thickness * width * width * width / 12.0; }
    /// w t^3 (1/3 - 0.21 (t/w)(1 - t^4/(12 w^4))) with t the smaller side.
    double torsion_constant() const;
    /// Homogeneous sections use `material`; laminates ignore it.
    SectionRigidity rigidity(const Material& material) const;
};

// ---------------------------------------------------------------------------
// Frame model

enum class Dof : int { ux = 0, uy, uz, rx, ry, rz };
inline constexpr int kDofsPerNode = 6;
std::string to_string(Dof d);

struct FrameNode {
    Vec3 position;  // m
    LayerTag tag = LayerTag::winding;
};

struct FrameElement {
    std::size_t node_a = 0;
    std::size_t node_b = 0;
    BeamSection section;
    Material material;
};

/// Rigid connector: the slave node follows the master as a rigid body.
struct RigidLink {
    std::size_t master = 0;
    std::size_t slave = 0;
};

using NodalLoad = std::array<double, kDofsPerNode>;  // Fx Fy Fz Mx My Mz

struct FrameModel {
    std::vector<FrameNode> nodes;
    std::vector<FrameElement> elements;
    std::vector<RigidLink> links;
    std::set<std::size_t> fixed_dofs;        // node * 6 + dof
    std::map<std::size_t, NodalLoad> loads;  // node -> load

    std::size_t add_node(Vec3 position, LayerTag tag = LayerTag::winding);
    std::size_t add_element(std::size_t a, std::size_t b, BeamSection section, Material material);
    void fix(std::size_t node, Dof dof);
    void fix_node(std::size_t node);
    void add_load(std::size_t node, Dof dof, double value);
    bool is_fixed(std::size_t node, Dof dof) const;

    /// Empty when the model is well formed (nodes exist, lengths > 0, some
    /// DOF constrained).
    std::vector<std::string> violations() const;
};

/// Discretises the layout: each segment is cut into `elements_per_segment`
/// equal elements, with extra nodes wherever an X-beam arm crosses a winding
/// or the other arm. Shared points merge within 1e-12 m. Anchors are fully
/// fixed; arm/winding crossings and the lead via become rigid connectors.
/// Throws StabilityError when the layout has no anchors.
FrameModel build_frame(const SegmentSet& segments, const SpiralSpec& spec, int elements_per_segment);

struct Displacements {
    std::vector<NodalLoad> nodal;  // ux uy uz rx ry rz per node
    double residual = 0.0;         // |K u - F| / |F| on the reduced system

    double uz(std::size_t node) const { return nodal[node][static_cast<int>(Dof::uz)]; }
};

/// Assembled and factorised stiffness, reusable for many load cases.
class StaticSolver {
public:
    /// Throws StabilityError naming unconstrained DOFs when K is singular.
    explicit StaticSolver(const FrameModel& model);
    ~StaticSolver();
    StaticSolver(StaticSolver&&) noexcept;
    StaticSolver& operator=(StaticSolver&&) noexcept;

    Displacements solve(const std::map<std::size_t, NodalLoad>& loads) const;

    /// Reduced stiffness (constraints eliminated, rigid links condensed).
    const Eigen::SparseMatrix<double>& stiffness() const;
    std::size_t reduced_dofs() const;

    /// True when the node cannot move at all (anchored, or rigidly tied to an anchor).
    bool immobile(std::size_t node) const;
    /// True when the given DOF of the node maps onto an unknown of the system.
    bool is_free(std::size_t node, Dof dof) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Linear static solution for the loads stored in the model.
Displacements solve_static(const FrameModel& model);

struct ImpactResult {
    double force = 0.0;               // N producing `deflection_limit`
    double max_unit_deflection = 0.0; // m/N, worst case over load positions
    std::size_t critical_node = 0;    // where the worst-case unit load sits
};

/// Unit out-of-plane load at every free winding node; the force that brings
/// the most compliant configuration to `deflection_limit` (out-of-plane
/// translation of any winding node).
ImpactResult max_impact_force(const FrameModel& model, double deflection_limit = 1e-6);

struct MechSettings {
    int elements_per_segment = 4;
    double deflection_limit = 1e-6;  // m
    double shock_accel = kDefaultShockAccel;
};

struct MechReport {
    StripAnalysis outer;
    StripAnalysis inner;
    double deflection_limit = 0.0;
    std::optional<ImpactResult> pillar;  // no X-beam
    std::optional<ImpactResult> xbeam;

    double f_resonant() const { return outer.f_resonant; }
    std::optional<double> enhancement_ratio() const;
};

/// Analytic strips plus the FEM impact force with and/or without X-beams. When
/// the X-beam run is requested but the spec has none, the default laminate is used.
MechReport mechanical_report(const SpiralSpec& spec, const MaterialTable& materials,
                             const MechSettings& settings, bool with_pillar, bool with_xbeam);

}  // namespace spiralq
