#include "spiralq/em_model.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>
#include <limits>

#include <fmt/format.h>

#include "spiralq/error.hpp"
#include "spiralq/units.hpp"

namespace spiralq {

using units::kEps0;
using units::kMu0;
using units::kPi;

namespace {

constexpr double kMuOver4Pi = 1e-7;  // mu0 / 4pi

// Antiderivative of 1/sqrt(u^2 + d^2) integrated twice in u.
double neumann_primitive(double u, double d) {
    return u * std::asinh(u / d) - std::hypot(u, d);
}

}  // namespace

std::vector<double> log_frequency_grid(double f_min, double f_max, int count) {
    if (!(f_min > 0.0) || !(f_max > f_min) || count < 2)
        throw Error(fmt::format("invalid frequency grid {} .. {} Hz, {} points", f_min, f_max, count));
    std::vector<double> out(static_cast<std::size_t>(count));
    const double a = std::log10(f_min), b = std::log10(f_max);
    for (int i = 0; i < count; ++i)
        out[static_cast<std::size_t>(i)] = std::pow(10.0, a + (b - a) * i / (count - 1));
    out.front() = f_min;
    out.back() = f_max;
    return out;
}

std::vector<double> EmSettings::frequency_grid() const {
    return log_frequency_grid(freq_min, freq_max, freq_points);
}

double segment_self_inductance(double length, double width, double thickness) {
    const double wt = width + thickness;
    if (!(length > 0.0)) throw DomainError("segment length must be > 0");
    if (!(wt < 2.0 * length))
        throw DomainError(fmt::format("self-inductance formula needs w + t < 2l (w + t = {:.3e} m, "
                                      "l = {:.3e} m)",
                                      wt, length));
    return 2e-7 * length * (std::log(2.0 * length / wt) + 0.50049 + wt / (3.0 * length));
}

double geometric_mean_distance(double distance, double width) {
    const double r = distance / width;
    const double r2 = r * r;
    // ln g = ln d - 1/(12 r^2) - 1/(60 r^4) - 1/(168 r^6) - 1/(360 r^8) - 1/(660 r^10)
    double series = 0.0, p = r2;
    for (double c : {12.0, 60.0, 168.0, 360.0, 660.0}) {
        series += 1.0 / (c * p);
        p *= r2;
    }
    return distance * std::exp(-series);
}

namespace {

// Total order on segments, used to evaluate M(a, b) and M(b, a) identically.
bool canonical_before(const Segment& a, const Segment& b) {
    const auto key = [](const Segment& s) {
        return std::tie(s.start.x, s.start.y, s.start.z, s.end.x, s.end.y, s.end.z, s.width, s.thickness);
    };
    return key(a) < key(b);
}

}  // namespace

double segment_mutual_inductance(const Segment& first, const Segment& second) {
    const bool keep = !canonical_before(second, first);
    const Segment& a = keep ? first : second;
    const Segment& b = keep ? second : first;
    const Vec3 da = a.direction();
    const Vec3 db = b.direction();
    const double c = da.dot(db);
    if (std::abs(c) < 1e-12) return 0.0;
    if (std::abs(std::abs(c) - 1.0) > 1e-9)
        throw DomainError("mutual inductance needs parallel or perpendicular segments");

    // Project both onto the axis of `a`; the perpendicular offset is the spacing.
    const double a1 = 0.0, a2 = a.length();
    const Vec3 rel = b.start - a.start;
    double b1 = rel.dot(da);
    double b2 = (b.end - a.start).dot(da);
    if (b1 > b2) std::swap(b1, b2);
    const double distance = (rel - rel.dot(da) * da).norm();
    if (!(distance > 0.0)) throw SingularityError("coincident filaments have no finite mutual inductance");

    const double d = geometric_mean_distance(distance, 0.5 * (a.width + b.width));
    const double m = neumann_primitive(a2 - b1, d) + neumann_primitive(a1 - b2, d) -
                     neumann_primitive(a2 - b2, d) - neumann_primitive(a1 - b1, d);
    return (c > 0.0 ? 1.0 : -1.0) * kMuOver4Pi * m;
}

double total_inductance(const SegmentSet& segments) {
    const auto idx = segments.indices_of(LayerTag::winding);
    if (idx.empty()) throw Error("total_inductance needs at least one winding segment");
    double self = 0.0;
    for (auto i : idx) {
        const auto& s = segments.segments[i];
        self += segment_self_inductance(s.length(), s.width, s.thickness);
    }
    double mutual = 0.0;
    for (std::size_t p = 0; p < idx.size(); ++p)
        for (std::size_t q = p + 1; q < idx.size(); ++q)
            mutual += segment_mutual_inductance(segments.segments[idx[p]], segments.segments[idx[q]]);
    return self + 2.0 * mutual;
}

double skin_depth(double resistivity, double frequency) {
    if (frequency <= 0.0) return std::numeric_limits<double>::infinity();
    return std::sqrt(resistivity / (kPi * frequency * kMu0));
}

namespace {

double effective_thickness(double thickness, double delta) {
    if (!std::isfinite(delta)) return thickness;
    return -delta * std::expm1(-thickness / delta);
}

}  // namespace

double series_resistance(const SegmentSet& segments, const Material& material, double frequency) {
    if (frequency < 0.0) throw DomainError("frequency must be >= 0");
    if (!material.resistivity) throw Error("material " + material.name + " has no resistivity");
    const double rho = *material.resistivity;
    const double delta = skin_depth(rho, frequency);
    double r = 0.0;
    for (const auto& s : segments.segments) {
        if (s.layer_tag == LayerTag::xbeam_arm) continue;
        r += rho * s.length() / (s.width * effective_thickness(s.thickness, delta));
    }
    return r;
}

namespace {

double winding_length(const SpiralSpec& spec) {
    double sum = 0.0;
    for (std::size_t k = 0; k < 4 * static_cast<std::size_t>(spec.turns); ++k)
        sum += winding_side_length(spec, k);
    return sum;
}

double dielectric_constant(const SpiralSpec& spec) {
    return spec.dielectric_mode == DielectricMode::oxide ? spec.oxide_rel_permittivity : 1.0;
}

}  // namespace

ShuntParasitics shunt_parasitics(const SpiralSpec& spec, const EmSettings& settings) {
    ShuntParasitics out;
    out.footprint_area = winding_length(spec) * spec.trace_width;
    out.cox_total = kEps0 * dielectric_constant(spec) * out.footprint_area / spec.airgap_height;
    const double t_sub = settings.substrate_thickness_eff;
    const ShuntBranch branch{
        0.5 * out.cox_total,
        kEps0 * settings.substrate_rel_permittivity * 0.5 * out.footprint_area / t_sub,
        2.0 * settings.substrate_resistivity * t_sub / out.footprint_area,
    };
    out.ports = {branch, branch};
    return out;
}

double interwinding_capacitance(const SpiralSpec& spec) {
    const std::size_t n = 4 * static_cast<std::size_t>(spec.turns);
    double sum = 0.0;
    // Side k faces side k+4 one pitch further out.
    for (std::size_t k = 0; k + 4 < n; ++k)
        sum += kEps0 * dielectric_constant(spec) * spec.metal_thickness * winding_side_length(spec, k) /
               spec.spacing;
    return sum / (static_cast<double>(spec.turns) * spec.turns);
}

double PiModel::series_resistance(double frequency) const {
    if (!skin) return rs_dc;
    const double delta = skin_depth(skin->resistivity, frequency);
    return skin->resistivity * skin->length / (skin->width * effective_thickness(skin->thickness, delta));
}

std::vector<std::string> PiModel::violations() const {
    std::vector<std::string> v;
    if (!(ls > 0.0)) v.emplace_back("Ls must be > 0");
    if (!(rs_dc > 0.0)) v.emplace_back("Rs_dc must be > 0");
    if (!(cs >= 0.0)) v.emplace_back("Cs must be >= 0");
    for (const auto& b : shunt) {
        if (!(b.cox >= 0.0) || !(b.csub >= 0.0)) v.emplace_back("shunt capacitances must be >= 0");
        if (!(b.rsub > 0.0)) v.emplace_back("Rsub must be > 0");
    }
    return v;
}

PiModel build_pi_model(const SpiralSpec& spec, const SegmentSet& segments, const EmSettings& settings) {
    PiModel m;
    m.ls = total_inductance(segments);
    m.rs_dc = series_resistance(segments, spec.conductor_material, 0.0);
    double conductor_length = 0.0;
    for (const auto& s : segments.segments)
        if (s.layer_tag != LayerTag::xbeam_arm) conductor_length += s.length();
    m.skin = SkinEffect{*spec.conductor_material.resistivity, conductor_length, spec.trace_width,
                        spec.metal_thickness};
    m.cs = interwinding_capacitance(spec);
    m.shunt = shunt_parasitics(spec, settings).ports;
    return m;
}

TwoPortNetwork pi_to_network(const PiModel& model, std::span<const double> frequencies) {
    TwoPortNetwork net{NetworkKind::Y, {frequencies.begin(), frequencies.end()}, {}, 50.0};
    if (net.frequencies.empty()) throw Error("empty frequency grid");
    net.matrices.reserve(net.size());
    for (double f : frequencies) {
        const double w = 2.0 * kPi * f;
        const Complex jw{0.0, w};
        const Complex z_series = model.series_resistance(f) + jw * model.ls;
        if (z_series == Complex{}) throw SingularityError("series branch is a short circuit");
        const Complex y_series = 1.0 / z_series + jw * model.cs;

        std::array<Complex, 2> y_shunt{};
        for (std::size_t p = 0; p < 2; ++p) {
            const auto& b = model.shunt[p];
            if (b.cox == 0.0) continue;  // open branch
            const Complex y_sub = 1.0 / b.rsub + jw * b.csub;
            y_shunt[p] = 1.0 / (1.0 / (jw * b.cox) + 1.0 / y_sub);
        }
        Matrix2c y;
        y << y_shunt[0] + y_series, -y_series, -y_series, y_shunt[1] + y_series;
        net.matrices.push_back(y);
    }
    net.check();
    return net;
}

double q_factor(const TwoPortNetwork& net, std::size_t index) {
    if (net.kind != NetworkKind::Y) throw Error("q_factor needs a Y network");
    if (index >= net.size()) throw Error("frequency index out of range");
    const Complex y11 = net.matrices[index](0, 0);
    if (y11.real() == 0.0)
        throw SingularityError(
            fmt::format("Re(Y11) = 0 at {:.9e} Hz, Q is undefined", net.frequencies[index]));
    return -y11.imag() / y11.real();
}

double effective_inductance(const Complex& y11, double frequency) {
    return (1.0 / y11).imag() / (2.0 * kPi * frequency);
}

std::pair<double, double> QCurve::l_eff_near(double frequency) const {
    if (frequencies.empty()) throw Error("empty Q curve");
    std::size_t best = 0;
    for (std::size_t i = 1; i < frequencies.size(); ++i)
        if (std::abs(frequencies[i] - frequency) < std::abs(frequencies[best] - frequency)) best = i;
    return {frequencies[best], l_eff[best]};
}

QCurve q_curve(const TwoPortNetwork& net) {
    if (net.kind != NetworkKind::Y) throw Error("q_curve needs a Y network");
    net.check();
    if (net.size() < 3) throw Error("q_curve needs at least 3 frequency points");
    QCurve c;
    for (std::size_t i = 0; i < net.size(); ++i) {
        const double f = net.frequencies[i];
        const Complex y11 = net.matrices[i](0, 0);
        if (y11.real() == 0.0 || !(f > 0.0)) {
            c.skipped.push_back(f);
            continue;
        }
        c.frequencies.push_back(f);
        c.q_values.push_back(-y11.imag() / y11.real());
        c.l_eff.push_back(effective_inductance(y11, f));
        c.y11.push_back(y11);
    }
    if (c.frequencies.empty()) throw Error("Q is undefined at every frequency (Re(Y11) = 0 throughout)");
    const auto it = std::max_element(c.q_values.begin(), c.q_values.end());
    c.peak_index = static_cast<std::size_t>(it - c.q_values.begin());
    c.q_max = *it;
    c.f_peak = c.frequencies[c.peak_index];
    return c;
}

}  // namespace spiralq
