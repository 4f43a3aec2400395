#include "spiralq/design_explorer.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <thread>

#include <fmt/format.h>

#include "spiralq/error.hpp"
#include "spiralq/spec_io.hpp"

namespace spiralq {

double ConstraintSet::shock_budget(const SpiralSpec& spec) const {
    if (max_shock_deflection) return *max_shock_deflection;
    return 0.5 * std::min(spec.spacing, spec.airgap_height);
}

std::vector<std::string> ConstraintSet::violations() const {
    std::vector<std::string> v;
    if (max_shock_deflection && !(*max_shock_deflection > 0.0)) v.emplace_back("max_shock_deflection must be > 0");
    if (!(min_resonant_frequency > 0.0)) v.emplace_back("min_resonant_frequency must be > 0");
    if (min_q && !(*min_q > 0.0)) v.emplace_back("min_q must be > 0");
    if (min_inductance && !(*min_inductance > 0.0)) v.emplace_back("min_inductance must be > 0");
    if (!(shock_accel > 0.0)) v.emplace_back("shock_accel must be > 0");
    return v;
}

DesignPoint evaluate(const SpiralSpec& spec, const ConstraintSet& constraints,
                     const EvaluationSettings& settings) {
    DesignPoint p;
    p.spec = spec;
    try {
        if (auto v = constraints.violations(); !v.empty()) throw ValidationError(std::move(v));
        const SegmentSet layout = generate_layout(spec);

        DesignMetrics m;
        const PiModel pi = build_pi_model(spec, layout, settings.em);
        m.l_total = pi.ls;
        const QCurve curve = q_curve(pi_to_network(pi, settings.em.frequency_grid()));
        m.q_max = curve.q_max;
        m.f_peak = curve.f_peak;

        const StripAnalysis outer = outer_strip(spec, constraints.shock_accel);
        m.kappa_outer = outer.kappa;
        m.f_resonant = outer.f_resonant;
        m.shock_deflection = outer.shock_deflection;
        m.f_max_impact =
            max_impact_force(build_frame(layout, spec, settings.elements_per_segment), settings.deflection_limit)
                .force;
        p.metrics = m;

        if (m.shock_deflection > constraints.shock_budget(spec)) p.violated.emplace_back("max_shock_deflection");
        if (m.f_resonant < constraints.min_resonant_frequency) p.violated.emplace_back("min_resonant_frequency");
        if (constraints.min_q && m.q_max < *constraints.min_q) p.violated.emplace_back("min_q");
        if (constraints.min_inductance && m.l_total < *constraints.min_inductance)
            p.violated.emplace_back("min_inductance");
        p.feasible = p.violated.empty();
    } catch (const std::exception& e) {
        p.metrics.reset();
        p.error = e.what();
        p.feasible = false;
        p.violated.clear();
    }
    return p;
}

std::size_t SweepGrid::size() const {
    std::size_t n = 1;
    for (const auto& a : axes) n *= a.values.size();
    return n;
}

SpiralSpec SweepGrid::point(std::span<const std::size_t> index, const MaterialTable& materials) const {
    if (index.size() != axes.size()) throw Error("grid index has the wrong rank");
    SpiralSpec s = base;
    for (std::size_t a = 0; a < axes.size(); ++a)
        apply_spec_key(s, axes[a].key, axes[a].values.at(index[a]), materials);
    return s;
}

std::vector<DesignPoint> sweep(const SweepGrid& grid, const ConstraintSet& constraints,
                               const EvaluationSettings& settings, const MaterialTable& materials,
                               unsigned jobs) {
    for (const auto& a : grid.axes)
        if (a.values.empty()) throw Error("grid axis '" + a.key + "' has no values");
    const std::size_t total = grid.size();

    std::vector<std::vector<std::size_t>> indices(total, std::vector<std::size_t>(grid.axes.size()));
    for (std::size_t flat = 0; flat < total; ++flat) {
        std::size_t rem = flat;
        for (std::size_t a = grid.axes.size(); a-- > 0;) {
            indices[flat][a] = rem % grid.axes[a].values.size();
            rem /= grid.axes[a].values.size();
        }
    }

    std::vector<DesignPoint> out(total);
    auto run_one = [&](std::size_t i) {
        try {
            out[i] = evaluate(grid.point(indices[i], materials), constraints, settings);
        } catch (const std::exception& e) {
            out[i] = DesignPoint{};
            out[i].spec = grid.base;
            out[i].error = e.what();
        }
        out[i].grid_index = indices[i];
    };

    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, total));
    if (jobs <= 1) {
        for (std::size_t i = 0; i < total; ++i) run_one(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(jobs);
    for (unsigned t = 0; t < jobs; ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < total; i = next++) run_one(i);
        });
    pool.clear();
    return out;
}

std::string to_string(Objective o) {
    switch (o) {
        case Objective::q_max: return "q_max";
        case Objective::f_max_impact: return "f_max_impact";
        case Objective::f_peak: return "f_peak";
        case Objective::l_total: return "l_total";
    }
    return "q_max";
}

Objective objective_from_string(const std::string& name) {
    for (auto o : {Objective::q_max, Objective::f_max_impact, Objective::f_peak, Objective::l_total})
        if (to_string(o) == name) return o;
    throw Error("unknown objective '" + name + "'");
}

double objective_value(const DesignMetrics& m, Objective o) {
    switch (o) {
        case Objective::q_max: return m.q_max;
        case Objective::f_max_impact: return m.f_max_impact;
        case Objective::f_peak: return m.f_peak;
        case Objective::l_total: return m.l_total;
    }
    return 0.0;
}

std::vector<std::size_t> non_dominated(const std::vector<std::vector<double>>& rows) {
    std::vector<std::size_t> order(rows.size());
    std::iota(order.begin(), order.end(), 0);
    // Lexicographically descending: any dominator precedes what it dominates.
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rows[a] > rows[b]; });

    auto dominates = [&](std::size_t p, std::size_t q) {
        bool strictly = false;
        for (std::size_t k = 0; k < rows[p].size(); ++k) {
            if (rows[p][k] < rows[q][k]) return false;
            strictly = strictly || rows[p][k] > rows[q][k];
        }
        return strictly;
    };
    std::vector<std::size_t> front;
    for (auto i : order)
        if (std::none_of(front.begin(), front.end(), [&](std::size_t f) { return dominates(f, i); }))
            front.push_back(i);

    std::stable_sort(front.begin(), front.end(), [&](std::size_t a, std::size_t b) {
        if (rows[a].empty()) return false;
        return rows[a][0] > rows[b][0] || (rows[a][0] == rows[b][0] && a < b);
    });
    return front;
}

ParetoResult pareto_front(std::span<const DesignPoint> points, std::span<const Objective> objectives) {
    static constexpr Objective kDefault[] = {Objective::q_max, Objective::f_max_impact};
    if (objectives.empty()) objectives = kDefault;

    std::vector<std::size_t> feasible;
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!points[i].feasible || !points[i].metrics) continue;
        feasible.push_back(i);
        auto& row = rows.emplace_back();
        for (auto o : objectives) row.push_back(objective_value(*points[i].metrics, o));
    }
    ParetoResult r;
    if (feasible.empty()) {
        r.warning = "no feasible design points; the Pareto front is empty";
        return r;
    }
    for (auto k : non_dominated(rows)) r.members.push_back(feasible[k]);
    return r;
}

}  // namespace spiralq
