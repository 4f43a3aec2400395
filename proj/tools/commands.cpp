#include "commands.hpp"

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "spiralq/design_explorer.hpp"
#include "spiralq/error.hpp"
#include "spiralq/keyvalue.hpp"
#include "spiralq/mechanics.hpp"
#include "spiralq/report.hpp"
#include "spiralq/run_config.hpp"
#include "spiralq/spec_io.hpp"
#include "spiralq/touchstone.hpp"
#include "spiralq/units.hpp"

namespace spiralq::cli {

namespace fs = std::filesystem;

namespace {

enum class Command { none, analyze, mech, sweep, deembed, compare };

struct RunConfig {
    Command command = Command::none;
    std::vector<std::string> inputs;
    std::string out_dir = ".";
    std::optional<std::string> materials;

    std::optional<double> freq_min_ghz;
    std::optional<double> freq_max_ghz;
    std::optional<int> freq_points;
    std::optional<double> spot_ghz;
    std::optional<std::string> mode;
    std::string xbeam = "both";
    std::optional<double> limit_um;
    std::optional<int> elements;
    bool dump_displacement = false;
    unsigned jobs = 0;

    std::vector<std::string> violations() const {
        std::vector<std::string> v;
        for (const auto& p : inputs)
            if (!p.empty() && !fs::is_regular_file(p)) v.push_back(fmt::format("input file not found: {}", p));
        return v;
    }
};

class Outputs {
public:
    explicit Outputs(const std::string& dir) : dir_(dir) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec || !fs::is_directory(dir_)) throw Error(fmt::format("cannot create output directory '{}'", dir));
    }

    void write(const std::string& name, const std::string& content) {
        const std::string path = (dir_ / name).string();
        write_text_file(path, content);
        written_.push_back(path);
    }

    const std::vector<std::string>& written() const { return written_; }

private:
    fs::path dir_;
    std::vector<std::string> written_;
};

struct Loaded {
    MaterialTable materials;
    SpiralSpec spec;
    EvaluationSettings settings;
};

void apply_em_overrides(const RunConfig& rc, EmSettings& em) {
    if (rc.freq_min_ghz) em.freq_min = units::ghz(*rc.freq_min_ghz);
    if (rc.freq_max_ghz) em.freq_max = units::ghz(*rc.freq_max_ghz);
    if (rc.freq_points) em.freq_points = *rc.freq_points;
    if (rc.spot_ghz) em.spot_frequency = units::ghz(*rc.spot_ghz);
}

Loaded load_inputs(const RunConfig& rc) {
    Loaded l{resolve_material_table(rc.materials), {}, {}};
    const auto doc = KeyValueDocument::load(rc.inputs.at(0));
    l.spec = spec_from_document(doc, l.materials);
    l.settings = apply_model_section(doc);
    apply_em_overrides(rc, l.settings.em);
    if (rc.mode) apply_spec_key(l.spec, "dielectric_mode", *rc.mode, l.materials, 0, "--mode");
    if (rc.elements) l.settings.elements_per_segment = *rc.elements;
    if (rc.limit_um) l.settings.deflection_limit = units::um(*rc.limit_um);
    return l;
}

Json pi_json(const PiModel& pi) {
    auto branch = [](const ShuntBranch& b) {
        Json j = Json::object();
        j["cox_f"] = b.cox;
        j["csub_f"] = b.csub;
        j["rsub_ohm"] = b.rsub;
        return j;
    };
    Json j = Json::object();
    j["ls_h"] = pi.ls;
    j["rs_dc_ohm"] = pi.rs_dc;
    j["cs_f"] = pi.cs;
    j["port1"] = branch(pi.shunt[0]);
    j["port2"] = branch(pi.shunt[1]);
    return j;
}

QCurve analyze_curve(const SpiralSpec& spec, const EmSettings& em, PiModel* pi_out = nullptr) {
    const PiModel pi = build_pi_model(spec, generate_layout(spec), em);
    if (pi_out) *pi_out = pi;
    return q_curve(pi_to_network(pi, em.frequency_grid()));
}

int cmd_analyze(const RunConfig& rc, Outputs& o, std::ostream& out) {
    const Loaded l = load_inputs(rc);
    PiModel pi;
    const QCurve curve = analyze_curve(l.spec, l.settings.em, &pi);
    Json summary = qcurve_summary(curve, l.settings.em.spot_frequency);
    summary["l_total_h"] = pi.ls;
    summary["dielectric_mode"] = to_string(l.spec.dielectric_mode);
    summary["pi_model"] = pi_json(pi);
    summary["spec"] = spec_json(l.spec);
    o.write("analyze_q.csv", qcurve_csv(curve));
    o.write("analyze_summary.json", dump_json(summary));
    out << fmt::format("{}: Q_max {:.3f} at {:.4g} GHz, L {:.4g} nH\n", to_string(l.spec.dielectric_mode),
                       curve.q_max, curve.f_peak / 1e9, pi.ls * 1e9);
    return 0;
}

SpiralSpec variant(const SpiralSpec& spec, const MaterialTable& materials, bool with_xbeam) {
    SpiralSpec s = spec;
    if (!with_xbeam) s.xbeam.reset();
    else if (!s.xbeam) s.xbeam = XBeamSpec::laminate_default(materials);
    return s;
}

std::string dump_displacement(const SpiralSpec& spec, int elements, const ImpactResult& impact) {
    const FrameModel model = build_frame(generate_layout(spec), spec, elements);
    NodalLoad load{};
    load[static_cast<int>(Dof::uz)] = -impact.force;
    const Displacements d = StaticSolver(model).solve({{impact.critical_node, load}});
    return displacement_csv(model, d);
}

int cmd_mech(const RunConfig& rc, Outputs& o, std::ostream& out) {
    const Loaded l = load_inputs(rc);
    const bool with_pillar = rc.xbeam != "on";
    const bool with_xbeam = rc.xbeam != "off";
    const MechSettings ms{l.settings.elements_per_segment, l.settings.deflection_limit, kDefaultShockAccel};
    const MechReport report = mechanical_report(l.spec, l.materials, ms, with_pillar, with_xbeam);

    Json j = mech_report_json(report);
    j["elements_per_segment"] = ms.elements_per_segment;
    j["spec"] = spec_json(l.spec);
    o.write("mech_report.json", dump_json(j));
    if (rc.dump_displacement) {
        if (report.pillar)
            o.write("mech_displacement_pillar.csv",
                    dump_displacement(variant(l.spec, l.materials, false), ms.elements_per_segment, *report.pillar));
        if (report.xbeam)
            o.write("mech_displacement_xbeam.csv",
                    dump_displacement(variant(l.spec, l.materials, true), ms.elements_per_segment, *report.xbeam));
    }

    out << fmt::format("kappa outer {:.4g} N/m, inner {:.4g} N/m, f_R {:.4g} Hz\n", report.outer.kappa,
                       report.inner.kappa, report.f_resonant());
    if (report.pillar) out << fmt::format("F_max pillar-only {:.4g} N\n", report.pillar->force);
    if (report.xbeam) out << fmt::format("F_max X-beam      {:.4g} N\n", report.xbeam->force);
    if (auto r = report.enhancement_ratio()) out << fmt::format("enhancement ratio {:.4g}\n", *r);
    return 0;
}

int cmd_sweep(const RunConfig& rc, Outputs& o, std::ostream& out, std::ostream& err) {
    const MaterialTable materials = resolve_material_table(rc.materials);
    const auto grid_doc = KeyValueDocument::load(rc.inputs.at(0));
    const SweepGrid grid = grid_from_document(grid_doc, materials);
    EvaluationSettings settings = apply_model_section(grid_doc);
    apply_em_overrides(rc, settings.em);
    if (rc.elements) settings.elements_per_segment = *rc.elements;
    if (rc.limit_um) settings.deflection_limit = units::um(*rc.limit_um);

    const auto constraint_doc =
        rc.inputs.size() > 1 && !rc.inputs[1].empty() ? KeyValueDocument::load(rc.inputs[1]) : grid_doc;
    const ConstraintSet constraints = constraints_from_document(constraint_doc);
    const std::vector<Objective> objectives = objectives_from_document(constraint_doc);

    const auto points = sweep(grid, constraints, settings, materials, rc.jobs);
    const ParetoResult front = pareto_front(points, objectives);
    o.write("sweep.csv", sweep_csv(points));
    o.write("sweep_pareto.json", dump_json(sweep_json(points, front, constraints, objectives)));

    const auto feasible = std::count_if(points.begin(), points.end(), [](const auto& p) { return p.feasible; });
    const auto failed = std::count_if(points.begin(), points.end(), [](const auto& p) { return !p.metrics; });
    out << fmt::format("{} points, {} feasible, {} failed, {} on the front\n", points.size(), feasible, failed,
                       front.members.size());
    if (!front.warning.empty()) err << "warning: " << front.warning << "\n";
    return 0;
}

int cmd_deembed(const RunConfig& rc, Outputs& o, std::ostream& out, std::ostream& err) {
    const auto complete = load_touchstone(rc.inputs.at(0));
    const auto open = load_touchstone(rc.inputs.at(1));
    const TwoPortNetwork y = open_deembed(s_to_y(complete.network), s_to_y(open.network));

    double peak = 0.0;
    for (const auto& m : y.matrices) peak = std::max(peak, m.cwiseAbs().maxCoeff());
    if (peak == 0.0) {
        err << "warning: de-embedded Y is zero at every frequency (complete and open data are identical)\n";
        return 1;
    }

    EmSettings em;
    apply_em_overrides(rc, em);
    const QCurve curve = q_curve(y);
    Json summary = qcurve_summary(curve, em.spot_frequency);
    summary["complete"] = rc.inputs[0];
    summary["open"] = rc.inputs[1];
    o.write("deembed_q.csv", qcurve_brief_csv(curve));
    o.write("deembed_summary.json", dump_json(summary));
    out << fmt::format("de-embedded Q_max {:.3f} at {:.4g} GHz\n", curve.q_max, curve.f_peak / 1e9);
    return 0;
}

int cmd_compare(const RunConfig& rc, Outputs& o, std::ostream& out) {
    Loaded l = load_inputs(rc);
    SpiralSpec oxide = l.spec, airgap = l.spec;
    oxide.dielectric_mode = DielectricMode::oxide;
    airgap.dielectric_mode = DielectricMode::airgap;

    const auto& em = l.settings.em;
    const QCurve q_ox = analyze_curve(oxide, em);
    const QCurve q_air = analyze_curve(airgap, em);
    const double cox_ox = shunt_parasitics(oxide, em).cox_total;
    const double cox_air = shunt_parasitics(airgap, em).cox_total;

    auto column = [&](const QCurve& c, double cox) {
        Json j = qcurve_summary(c, em.spot_frequency);
        j["cox_total_f"] = cox;
        return j;
    };
    Json ratios = Json::object();
    ratios["q_max"] = q_air.q_max / q_ox.q_max;
    ratios["f_peak"] = q_air.f_peak / q_ox.f_peak;
    ratios["cox"] = cox_air / cox_ox;
    Json report = Json::object();
    report["oxide"] = column(q_ox, cox_ox);
    report["airgap"] = column(q_air, cox_air);
    report["airgap_over_oxide"] = std::move(ratios);
    report["spec_oxide"] = spec_json(oxide);
    report["spec_airgap"] = spec_json(airgap);

    std::string csv = "freq_hz,q_oxide,q_airgap\n";
    for (std::size_t i = 0; i < q_ox.frequencies.size(); ++i)
        csv += format_number(q_ox.frequencies[i]) + "," + format_number(q_ox.q_values[i]) + "," +
               format_number(q_air.q_values[i]) + "\n";
    o.write("compare.json", dump_json(report));
    o.write("compare_q.csv", csv);

    out << fmt::format("oxide  Q_max {:.3f} at {:.4g} GHz\n", q_ox.q_max, q_ox.f_peak / 1e9);
    out << fmt::format("airgap Q_max {:.3f} at {:.4g} GHz\n", q_air.q_max, q_air.f_peak / 1e9);
    out << fmt::format("improvement: Q {:+.1f}%, f_peak {:+.1f}%, Cox {:+.1f}%\n", 100 * (q_air.q_max / q_ox.q_max - 1),
                       100 * (q_air.f_peak / q_ox.f_peak - 1), 100 * (cox_air / cox_ox - 1));
    return 0;
}

void add_common(CLI::App* cmd, RunConfig& rc) {
    cmd->add_option("-o,--out", rc.out_dir, "Output directory")->capture_default_str();
    cmd->add_option("--materials", rc.materials, fmt::format("Material table file (else ${})", kMaterialsEnvVar));
}

void add_grid_overrides(CLI::App* cmd, RunConfig& rc) {
    cmd->add_option("--freq-min-ghz", rc.freq_min_ghz)->check(CLI::PositiveNumber);
    cmd->add_option("--freq-max-ghz", rc.freq_max_ghz)->check(CLI::PositiveNumber);
    cmd->add_option("--freq-points", rc.freq_points)->check(CLI::Range(3, 100000));
    cmd->add_option("--spot-ghz", rc.spot_ghz, "Frequency where l_eff is reported")->check(CLI::PositiveNumber);
}

int dispatch(const RunConfig& rc, std::ostream& out, std::ostream& err) {
    Outputs o(rc.out_dir);
    int status = 0;
    switch (rc.command) {
        case Command::analyze: status = cmd_analyze(rc, o, out); break;
        case Command::mech: status = cmd_mech(rc, o, out); break;
        case Command::sweep: status = cmd_sweep(rc, o, out, err); break;
        case Command::deembed: status = cmd_deembed(rc, o, out, err); break;
        case Command::compare: status = cmd_compare(rc, o, out); break;
        case Command::none: return 2;
    }
    for (const auto& path : o.written()) out << "wrote " << path << "\n";
    return status;
}

}  // namespace

TwoPortNetwork pad_network(std::span<const double> frequencies) {
    constexpr double c_pad = 80e-15, r_pad = 10.0, c_couple = 5e-15;
    TwoPortNetwork y{NetworkKind::Y, {frequencies.begin(), frequencies.end()}, {}, 50.0};
    for (double f : frequencies) {
        const Complex jw{0.0, 2.0 * units::kPi * f};
        const Complex shunt = 1.0 / (r_pad + 1.0 / (jw * c_pad));
        const Complex couple = jw * c_couple;
        Matrix2c m;
        m << shunt + couple, -couple, -couple, shunt + couple;
        y.matrices.push_back(m);
    }
    if (y.frequencies.empty()) throw Error("pad model needs at least one frequency");
    y.check();
    return y;
}

FixtureSet make_fixtures(const EmSettings& settings) {
    const auto materials = MaterialTable::defaults();
    const SpiralSpec spec = SpiralSpec::reference_device(materials);
    const auto freqs = settings.frequency_grid();
    const TwoPortNetwork y_dut = pi_to_network(build_pi_model(spec, generate_layout(spec), settings), freqs);
    const TwoPortNetwork y_pad = pad_network(freqs);
    TwoPortNetwork y_complete = y_dut;
    for (std::size_t i = 0; i < freqs.size(); ++i) y_complete.matrices[i] += y_pad.matrices[i];
    return {y_to_s(y_dut), y_to_s(y_pad), y_to_s(y_complete)};
}

void write_fixtures(const std::string& dir, const EmSettings& settings) {
    fs::create_directories(dir);
    const FixtureSet f = make_fixtures(settings);
    auto save = [&](const char* name, const TwoPortNetwork& net, const char* what) {
        TouchstoneWriteOptions opt;
        opt.comments = {std::string("synthetic ") + what + ", generated by spiralq --seed-fixtures"};
        save_touchstone((fs::path(dir) / name).string(), net, opt);
    };
    save("dut.s2p", f.dut, "device: reference spiral, air gap, pi model");
    save("open.s2p", f.open, "open dummy: GSG pads only");
    save("complete.s2p", f.complete, "complete: pads + device");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"spiralq: suspended spiral inductor analysis", "spiralq"};
    app.require_subcommand(0, 1);
    RunConfig rc;
    std::string seed_dir;
    app.add_option("--seed-fixtures", seed_dir, "Regenerate the synthetic .s2p fixtures")->group("");

    auto* analyze = app.add_subcommand("analyze", "Q(f), l_eff(f) and summary for one spec");
    analyze->add_option("spec", rc.inputs, "Spec file")->required()->expected(1);
    analyze->add_option("--mode", rc.mode, "Override dielectric_mode")
        ->check(CLI::IsMember({"oxide", "airgap"}));
    add_grid_overrides(analyze, rc);
    add_common(analyze, rc);

    auto* mech = app.add_subcommand("mech", "Strip stiffness, shock response and maximum impact force");
    mech->add_option("spec", rc.inputs, "Spec file")->required()->expected(1);
    mech->add_option("--xbeam", rc.xbeam, "on, off or both")
        ->check(CLI::IsMember({"on", "off", "both"}))
        ->capture_default_str();
    mech->add_option("--limit", rc.limit_um, "Deflection limit in um (default 1)")->check(CLI::PositiveNumber);
    mech->add_option("--elements", rc.elements, "Elements per segment")->check(CLI::Range(1, 1000));
    mech->add_flag("--dump-displacement", rc.dump_displacement, "Write node displacement CSVs at F_max");
    add_common(mech, rc);

    auto* sweep_cmd = app.add_subcommand("sweep", "Grid sweep with constraints and Pareto front");
    sweep_cmd->add_option("grid", rc.inputs, "Grid file, then optional constraints file")
        ->required()
        ->expected(1, 2);
    sweep_cmd->add_option("-j,--jobs", rc.jobs, "Worker threads (0 = all cores)")->capture_default_str();
    sweep_cmd->add_option("--limit", rc.limit_um, "Deflection limit in um")->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--elements", rc.elements, "Elements per segment")->check(CLI::Range(1, 1000));
    add_grid_overrides(sweep_cmd, rc);
    add_common(sweep_cmd, rc);

    auto* deembed = app.add_subcommand("deembed", "Open de-embedding of a measured .s2p pair");
    deembed->add_option("files", rc.inputs, "complete.s2p open.s2p")->required()->expected(2);
    deembed->add_option("--spot-ghz", rc.spot_ghz, "Frequency where l_eff is reported")
        ->check(CLI::PositiveNumber);
    add_common(deembed, rc);

    auto* compare = app.add_subcommand("compare", "Oxide vs air-gap side-by-side report");
    compare->add_option("spec", rc.inputs, "Spec file")->required()->expected(1);
    add_grid_overrides(compare, rc);
    add_common(compare, rc);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    if (!seed_dir.empty()) {
        try {
            write_fixtures(seed_dir);
            out << "wrote fixtures to " << seed_dir << "\n";
            return 0;
        } catch (const std::exception& e) {
            err << "error: " << e.what() << "\n";
            return 1;
        }
    }

    if (*analyze) rc.command = Command::analyze;
    else if (*mech) rc.command = Command::mech;
    else if (*sweep_cmd) rc.command = Command::sweep;
    else if (*deembed) rc.command = Command::deembed;
    else if (*compare) rc.command = Command::compare;
    else {
        err << app.help();
        return 2;
    }

    if (auto v = rc.violations(); !v.empty()) {
        for (const auto& m : v) err << "error: " << m << "\n";
        return 1;
    }
    try {
        return dispatch(rc, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

int run_cli(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace spiralq::cli
