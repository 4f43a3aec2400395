#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spiralq/em_model.hpp"
#include "spiralq/geometry.hpp"
#include "spiralq/mechanics.hpp"

namespace spiralq {

struct ConstraintSet {
    /// Defaults to min(spacing, airgap_height) / 2 of the evaluated spec.
    std::optional<double> max_shock_deflection;  // m
    double min_resonant_frequency = 1e3;          // Hz
    std::optional<double> min_q;
    std::optional<double> min_inductance;         // H
    double shock_accel = kDefaultShockAccel;      // m/s^2

    double shock_budget(const SpiralSpec& spec) const;
    std::vector<std::string> violations() const;
};

struct EvaluationSettings {
    EmSettings em;
    int elements_per_segment = 4;
    double deflection_limit = 1e-6;  // m
};

struct DesignMetrics {
    double l_total = 0.0;          // H
    double q_max = 0.0;
    double f_peak = 0.0;           // Hz
    double kappa_outer = 0.0;      // N/m
    double f_max_impact = 0.0;     // N
    double f_resonant = 0.0;       // Hz
    double shock_deflection = 0.0; // m
};

struct DesignPoint {
    SpiralSpec spec;
    std::vector<std::size_t> grid_index;
    std::optional<DesignMetrics> metrics;  // empty iff evaluation failed
    std::string error;                     // cause when evaluation failed
    bool feasible = false;
    std::vector<std::string> violated;     // names of violated constraints
};

/// Runs the electrical and mechanical pipelines on one spec. Never throws for
/// model errors: a failed point carries the causal message instead.
DesignPoint evaluate(const SpiralSpec& spec, const ConstraintSet& constraints,
                     const EvaluationSettings& settings = {});

struct GridAxis {
    std::string key;                  // a [spiral] key
    std::vector<std::string> values;  // textual, as in a spec file
};

struct SweepGrid {
    SpiralSpec base;
    std::vector<GridAxis> axes;  // first axis varies slowest

    std::size_t size() const;
    /// Spec for the given per-axis indices.
    SpiralSpec point(std::span<const std::size_t> index, const MaterialTable& materials) const;
};

/// Cartesian product of the grid, evaluated on `jobs` threads (0 = hardware
/// concurrency). Output order is lexicographic in grid indices regardless of
/// scheduling, and every value is independent of `jobs`.
std::vector<DesignPoint> sweep(const SweepGrid& grid, const ConstraintSet& constraints,
                               const EvaluationSettings& settings, const MaterialTable& materials,
                               unsigned jobs = 0);

enum class Objective { q_max, f_max_impact, f_peak, l_total };

std::string to_string(Objective o);
Objective objective_from_string(const std::string& name);
double objective_value(const DesignMetrics& m, Objective o);

/// Indices of rows not dominated by any other row (all objectives maximised).
/// p dominates q iff p >= q everywhere and p > q somewhere; equal rows are
/// all kept. Result is ordered by the first objective descending, stable.
std::vector<std::size_t> non_dominated(const std::vector<std::vector<double>>& rows);

struct ParetoResult {
    std::vector<std::size_t> members;  // indices into the input points
    std::string warning;               // set when there were no feasible points
};

/// Non-dominated subset of the feasible, successfully evaluated points.
ParetoResult pareto_front(std::span<const DesignPoint> points,
                          std::span<const Objective> objectives = {});

}  // namespace spiralq
