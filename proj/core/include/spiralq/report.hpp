#pragma once

#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "spiralq/design_explorer.hpp"
#include "spiralq/em_model.hpp"
#include "spiralq/mechanics.hpp"

namespace spiralq {

/// Locale-independent scientific notation with 9 significant digits (CSV cells).
std::string format_number(double v);

/// Report documents keep keys in insertion order.
using Json = nlohmann::ordered_json;

/// Two-space indented text with a trailing newline; floating-point values go
/// through format_number, non-finite ones become null.
std::string dump_json(const Json& j);

Json spec_json(const SpiralSpec& spec);

/// freq_hz, re_y11, im_y11, q, l_eff_h
std::string qcurve_csv(const QCurve& curve);
/// freq_hz, q, l_eff_h
std::string qcurve_brief_csv(const QCurve& curve);
/// {q_max, f_peak_hz, spot_hz, l_at_spot_hz}; l_at_spot_hz is l_eff (H) at
/// the sample nearest spot_hz.
Json qcurve_summary(const QCurve& curve, double spot_frequency);

Json mech_report_json(const MechReport& report);
/// node_id, x, y, z, uz (metres)
std::string displacement_csv(const FrameModel& model, const Displacements& d);

std::string sweep_csv(std::span<const DesignPoint> points);
Json sweep_json(std::span<const DesignPoint> points, const ParetoResult& front, const ConstraintSet& constraints,
                std::span<const Objective> objectives);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace spiralq
