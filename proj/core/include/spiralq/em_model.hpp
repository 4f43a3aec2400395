#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spiralq/geometry.hpp"
#include "spiralq/network.hpp"

namespace spiralq {

/// Constants of the lumped electrical model that are not part of the device
/// geometry. Defaults reproduce the measured oxide/air-gap trend.
struct EmSettings {
    double freq_min = 0.1e9;  // Hz
    double freq_max = 10e9;   // Hz
    int freq_points = 200;    // log spaced
    double substrate_resistivity = 20.0;     // ohm*m (2 kohm*cm)
    double substrate_rel_permittivity = 11.9;
    double substrate_thickness_eff = 15e-6;  // m, fitted
    double spot_frequency = 1.7e9;           // Hz, where l_eff is reported

    std::vector<double> frequency_grid() const;
};

/// `count` log-spaced points from f_min to f_max inclusive.
std::vector<double> log_frequency_grid(double f_min, double f_max, int count);

/// Grover's rectangular-bar self inductance
/// 2e-7 l [ln(2l/(w+t)) + 0.50049 + (w+t)/(3l)], SI units.
/// Throws DomainError when w + t >= 2l or l <= 0.
double segment_self_inductance(double length, double width, double thickness);

/// Geometric mean distance of two equal side-by-side rectangular traces
/// of the given width whose centre lines are `distance` apart.
double geometric_mean_distance(double distance, double width);

/// Signed mutual inductance of two straight segments (Greenhouse). Zero for
/// perpendicular pairs; for parallel pairs the exact Neumann integral of two
/// filaments at the geometric mean distance, positive when the declared
/// current directions agree.
double segment_mutual_inductance(const Segment& a, const Segment& b);

/// Sum of winding self inductances and all signed pairwise mutuals.
double total_inductance(const SegmentSet& segments);

/// sqrt(rho / (pi f mu0)); infinite at f = 0.
double skin_depth(double resistivity, double frequency);

/// Conductor (winding + lead) resistance with the skin-effect thickness
/// t_eff = delta (1 - exp(-t/delta)).
double series_resistance(const SegmentSet& segments, const Material& material, double frequency);

struct ShuntBranch {
    double cox = 0.0;   // F, conductor to substrate
    double csub = 0.0;  // F
    double rsub = 0.0;  // ohm
};

struct ShuntParasitics {
    std::array<ShuntBranch, 2> ports;
    double cox_total = 0.0;
    double footprint_area = 0.0;  // m^2
};

/// Oxide (or air) capacitance over the winding footprint, split half per port,
/// in series with a single-layer lossy substrate branch.
ShuntParasitics shunt_parasitics(const SpiralSpec& spec, const EmSettings& settings);

/// Sidewall capacitance between adjacent turns, combined as N-1 gaps in a
/// series chain with a uniform per-turn voltage drop (sum / turns^2).
double interwinding_capacitance(const SpiralSpec& spec);

struct SkinEffect {
    double resistivity = 0.0;  // ohm*m
    double length = 0.0;       // m
    double width = 0.0;        // m
    double thickness = 0.0;    // m
};

struct PiModel {
    double ls = 0.0;     // H
    double rs_dc = 0.0;  // ohm
    std::optional<SkinEffect> skin;
    double cs = 0.0;     // F
    std::array<ShuntBranch, 2> shunt;

    double series_resistance(double frequency) const;
    std::vector<std::string> violations() const;
};

PiModel build_pi_model(const SpiralSpec& spec, const SegmentSet& segments, const EmSettings& settings);

/// Exact Y parameters of the pi circuit at each frequency.
TwoPortNetwork pi_to_network(const PiModel& model, std::span<const double> frequencies);

/// -Im(Y11)/Re(Y11). Throws SingularityError when Re(Y11) == 0.
double q_factor(const TwoPortNetwork& net, std::size_t index);

/// Im(1/Y11) / (2 pi f).
double effective_inductance(const Complex& y11, double frequency);

struct QCurve {
    std::vector<double> frequencies;  // Hz, valid samples only
    std::vector<double> q_values;
    std::vector<double> l_eff;        // H
    std::vector<Complex> y11;
    double q_max = 0.0;
    double f_peak = 0.0;
    std::size_t peak_index = 0;
    std::vector<double> skipped;      // frequencies where Q is undefined

    /// l_eff at the sample nearest to `frequency`; returns {sample_hz, l_eff}.
    std::pair<double, double> l_eff_near(double frequency) const;
};

/// Q and l_eff at every sample; the peak is the grid maximum (first on ties).
/// Needs >= 3 frequencies. Throws Error when every sample is singular.
QCurve q_curve(const TwoPortNetwork& net);

}  // namespace spiralq
