#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include <Eigen/Dense>

#include "spiralq/em_model.hpp"
#include "spiralq/error.hpp"
#include "spiralq/units.hpp"
#include "test_support.hpp"

using namespace spiralq;
using spiralq::test::reference;
using spiralq::test::rel_diff;

namespace {

Segment seg(Vec3 a, Vec3 b, double w = 10e-6, double t = 1e-6) { return {a, b, w, t, LayerTag::winding}; }

// Grover's mutual inductance of two equal, aligned parallel filaments.
double grover_equal_filaments(double l, double d) {
    return 2e-7 * l * (std::log(l / d + std::sqrt(1 + l * l / (d * d))) - std::sqrt(1 + d * d / (l * l)) + d / l);
}

PiModel toy_model() {
    PiModel m;
    m.ls = 5e-9;
    m.rs_dc = 3.0;
    m.cs = 20e-15;
    m.shunt[0] = {100e-15, 150e-15, 900.0};
    m.shunt[1] = {80e-15, 120e-15, 1200.0};
    return m;
}

// Full nodal matrix over (p1, p2, a, b), ports kept and the two substrate
// nodes eliminated by Schur complement.
Matrix2c nodal_oracle(const PiModel& m, double f) {
    const Complex jw{0, 2 * units::kPi * f};
    const Complex ys = 1.0 / (m.series_resistance(f) + jw * m.ls) + jw * m.cs;
    Eigen::Matrix4cd Y = Eigen::Matrix4cd::Zero();
    auto stamp = [&](int i, int j, Complex y) {
        Y(i, i) += y;
        if (j >= 0) {
            Y(j, j) += y;
            Y(i, j) -= y;
            Y(j, i) -= y;
        }
    };
    stamp(0, 1, ys);
    stamp(0, 2, jw * m.shunt[0].cox);
    stamp(1, 3, jw * m.shunt[1].cox);
    stamp(2, -1, 1.0 / m.shunt[0].rsub + jw * m.shunt[0].csub);
    stamp(3, -1, 1.0 / m.shunt[1].rsub + jw * m.shunt[1].csub);
    const Matrix2c ypp = Y.topLeftCorner<2, 2>();
    const Matrix2c ypi = Y.topRightCorner<2, 2>();
    const Matrix2c yip = Y.bottomLeftCorner<2, 2>();
    const Matrix2c yii = Y.bottomRightCorner<2, 2>();
    return ypp - ypi * yii.inverse() * yip;
}

TwoPortNetwork y_net(std::vector<double> f, std::vector<Complex> y11) {
    TwoPortNetwork n{NetworkKind::Y, std::move(f), {}, 50.0};
    for (auto y : y11) {
        Matrix2c m;
        m << y, -y, -y, y;
        n.matrices.push_back(m);
    }
    return n;
}

}  // namespace

TEST(SelfInductance, Golden) {
    EXPECT_LT(rel_diff(segment_self_inductance(1e-3, 10e-6, 1e-6), 1.1414327706820758e-09), 1e-12);
}

TEST(SelfInductance, Superlinear) {
    const double l1 = segment_self_inductance(100e-6, 10e-6, 1e-6);
    EXPECT_GT(segment_self_inductance(1000e-6, 10e-6, 1e-6), 10 * l1);
}

TEST(SelfInductance, DomainBoundary) {
    EXPECT_THROW(segment_self_inductance(5.5e-6, 10e-6, 1e-6), DomainError);
    EXPECT_THROW(segment_self_inductance(0.0, 10e-6, 1e-6), DomainError);
    EXPECT_NO_THROW(segment_self_inductance(5.6e-6, 10e-6, 1e-6));
}

TEST(MutualInductance, PerpendicularIsZero) {
    EXPECT_EQ(segment_mutual_inductance(seg({0, 0, 0}, {1e-4, 0, 0}), seg({0, 5e-5, 0}, {0, 2e-4, 0})), 0.0);
}

TEST(MutualInductance, GroverFilamentOracle) {
    const double w = 1e-10;  // thin enough that the mean distance equals the spacing
    const auto a = seg({0, 0, 0}, {500e-6, 0, 0}, w, w);
    const auto b = seg({0, 12e-6, 0}, {500e-6, 12e-6, 0}, w, w);
    EXPECT_LT(rel_diff(segment_mutual_inductance(a, b), grover_equal_filaments(500e-6, 12e-6)), 1e-9);
    EXPECT_LT(rel_diff(grover_equal_filaments(500e-6, 12e-6), 3.4467046395601464e-10), 1e-12);
}

TEST(MutualInductance, WideTraceUsesMeanDistance) {
    EXPECT_LT(rel_diff(geometric_mean_distance(12e-6, 10e-6), 1.1202248979450586e-05), 1e-12);
    const auto a = seg({0, 0, 0}, {500e-6, 0, 0});
    const auto b = seg({0, 12e-6, 0}, {500e-6, 12e-6, 0});
    EXPECT_LT(rel_diff(segment_mutual_inductance(a, b), 3.5139197345517033e-10), 1e-12);
}

TEST(MutualInductance, DecreasesWithDistanceAndFlipsSign) {
    double last = 1.0;
    for (double d = 5e-6; d < 500e-6; d *= 1.5) {
        const auto a = seg({0, 0, 0}, {300e-6, 0, 0});
        const auto b = seg({0, d, 0}, {300e-6, d, 0});
        const double m = segment_mutual_inductance(a, b);
        EXPECT_GT(m, 0.0);
        EXPECT_LT(m, last);
        last = m;
        const auto rev = seg({300e-6, d, 0}, {0, d, 0});
        EXPECT_EQ(segment_mutual_inductance(a, rev), -m);
    }
}

TEST(MutualInductance, SymmetricExactly) {
    const auto l = generate_layout(reference());
    for (std::size_t i = 0; i < 40; ++i)
        for (std::size_t j = 0; j < 40; ++j)
            if (i != j) {
                EXPECT_EQ(segment_mutual_inductance(l.segments[i], l.segments[j]),
                          segment_mutual_inductance(l.segments[j], l.segments[i]));
            }
}

TEST(MutualInductance, OffsetSegmentsMatchLengthDecomposition) {
    // a = [0, l], b = [l + s, l + s + m] on a parallel line: (M(l+m+s) + M(s) - M(l+s) - M(m+s)) / 2 with
    // M(x) the equal-filament mutual.
    const double w = 1e-10, d = 20e-6, l = 200e-6, m = 120e-6, s = 30e-6;
    const auto a = seg({0, 0, 0}, {l, 0, 0}, w, w);
    const auto b = seg({l + s, d, 0}, {l + s + m, d, 0}, w, w);
    auto M = [&](double x) { return grover_equal_filaments(x, d); };
    const double expected = 0.5 * (M(l + m + s) + M(s) - M(l + s) - M(m + s));
    EXPECT_LT(rel_diff(segment_mutual_inductance(a, b), expected), 1e-8);
}

TEST(MutualInductance, Errors) {
    EXPECT_THROW(segment_mutual_inductance(seg({0, 0, 0}, {1e-4, 0, 0}), seg({0, 0, 0}, {1e-4, 0, 0})),
                 SingularityError);
    EXPECT_THROW(segment_mutual_inductance(seg({0, 0, 0}, {1e-4, 0, 0}), seg({0, 0, 0}, {1e-4, 1e-4, 0})),
                 DomainError);
}

TEST(TotalInductance, SingleSegmentIsSelf) {
    SegmentSet s;
    s.segments.push_back(seg({0, 0, 0}, {400e-6, 0, 0}));
    EXPECT_EQ(total_inductance(s), segment_self_inductance(400e-6, 10e-6, 1e-6));
}

TEST(TotalInductance, ReferenceDevice) {
    const double l = total_inductance(generate_layout(reference()));
    EXPECT_LT(rel_diff(l, 24.686130199121685e-9), 1e-9);
    EXPECT_NEAR(l, 23.3e-9, 0.3 * 23.3e-9);
}

TEST(TotalInductance, InvariantUnderReversalAndRotation) {
    const auto base = generate_layout(reference());
    const double l0 = total_inductance(base);

    SegmentSet reversed;
    for (auto it = base.segments.rbegin(); it != base.segments.rend(); ++it) {
        Segment s = *it;
        std::swap(s.start, s.end);
        reversed.segments.push_back(s);
    }
    EXPECT_LT(rel_diff(total_inductance(reversed), l0), 1e-12);

    SegmentSet rotated = base;
    std::rotate(rotated.segments.begin(), rotated.segments.begin() + 13, rotated.segments.end());
    EXPECT_LT(rel_diff(total_inductance(rotated), l0), 1e-12);
}

TEST(TotalInductance, GrowsWithTurns) {
    auto s = reference();
    double last = 0;
    for (int n = 1; n <= 10; ++n) {
        s.turns = n;
        const double l = total_inductance(generate_layout(s));
        EXPECT_GT(l, last);
        last = l;
    }
}

TEST(SeriesResistance, DcAndSkinGolden) {
    const auto l = generate_layout(reference());
    const auto& cu = spiralq::test::materials().at("Cu");
    EXPECT_LT(rel_diff(series_resistance(l, cu, 0.0), 14.7764), 1e-12);
    EXPECT_LT(rel_diff(series_resistance(l, cu, 2e9), 20.37904298410554), 1e-12);
    EXPECT_LT(rel_diff(skin_depth(1.7e-8, 2e9), 1.4673360734336485e-06), 1e-12);
    EXPECT_TRUE(std::isinf(skin_depth(1.7e-8, 0.0)));
}

TEST(SeriesResistance, NondecreasingInFrequency) {
    const auto l = generate_layout(reference());
    const auto& cu = spiralq::test::materials().at("Cu");
    double last = 0;
    for (double f : log_frequency_grid(1e6, 100e9, 300)) {
        const double r = series_resistance(l, cu, f);
        EXPECT_GE(r, last);
        last = r;
    }
}

TEST(ShuntParasitics, AirOverOxideRatio) {
    EmSettings em;
    auto s = reference();
    s.dielectric_mode = DielectricMode::oxide;
    const double ox = shunt_parasitics(s, em).cox_total;
    s.dielectric_mode = DielectricMode::airgap;
    const double air = shunt_parasitics(s, em).cox_total;
    EXPECT_LT(rel_diff(air / ox, 1 / 3.9), 1e-12);
    EXPECT_LT(rel_diff(air, 3.0316739071027207e-13), 1e-12);
}

TEST(ShuntParasitics, SplitsHalfPerPortAndScales) {
    EmSettings em;
    auto s = reference();
    const auto p = shunt_parasitics(s, em);
    EXPECT_DOUBLE_EQ(p.ports[0].cox + p.ports[1].cox, p.cox_total);
    EXPECT_EQ(p.ports[0].cox, p.ports[1].cox);
    EXPECT_GT(p.ports[0].rsub, 0.0);

    s.turns = 5;
    const auto q = shunt_parasitics(s, em);
    EXPECT_LT(rel_diff(p.cox_total / p.footprint_area, q.cox_total / q.footprint_area), 1e-12);

    s = reference();
    s.airgap_height = 1.0;
    EXPECT_LT(shunt_parasitics(s, em).cox_total, 1e-18);
}

TEST(PiNetwork, ResistorOnly) {
    PiModel m;
    m.rs_dc = 7.0;
    const std::vector<double> f{1e8, 1e9};
    const auto n = pi_to_network(m, f);
    for (const auto& y : n.matrices) {
        EXPECT_NEAR(y(0, 0).real(), 1 / 7.0, 1e-15);
        EXPECT_NEAR(y(0, 1).real(), -1 / 7.0, 1e-15);
        EXPECT_EQ(y(0, 0).imag(), 0.0);
    }
}

TEST(PiNetwork, PureInductor) {
    PiModel m;
    m.ls = 2e-9;
    const std::vector<double> f{1e9};
    const auto n = pi_to_network(m, f);
    const Complex expected = 1.0 / Complex(0, 2 * units::kPi * 1e9 * 2e-9);
    EXPECT_LT(std::abs(n.matrices[0](0, 0) - expected), 1e-15 * std::abs(expected));
}

TEST(PiNetwork, MatchesNodalOracle) {
    const auto m = toy_model();
    const std::vector<double> f{3.3e8, 1.7e9, 6.1e9};
    const auto n = pi_to_network(m, f);
    for (std::size_t i = 0; i < f.size(); ++i) {
        const Matrix2c expect = nodal_oracle(m, f[i]);
        EXPECT_LT((n.matrices[i] - expect).norm(), 1e-12 * expect.norm());
    }
    auto ref_model = build_pi_model(reference(), generate_layout(reference()), EmSettings{});
    const auto pn = pi_to_network(ref_model, std::vector<double>{2.1e9});
    const Matrix2c expect = nodal_oracle(ref_model, 2.1e9);
    EXPECT_LT((pn.matrices[0] - expect).norm(), 1e-12 * expect.norm());
}

TEST(PiNetwork, Reciprocal) {
    const auto n = pi_to_network(toy_model(), EmSettings{}.frequency_grid());
    for (const auto& y : n.matrices) EXPECT_LE(std::abs(y(0, 1) - y(1, 0)), 1e-12 * std::abs(y(0, 1)));
}

TEST(PiModel, ReferenceDeviceInvariants) {
    const auto m = build_pi_model(reference(), generate_layout(reference()), EmSettings{});
    EXPECT_TRUE(m.violations().empty());
    EXPECT_GT(m.cs, 0.0);
    PiModel bad = m;
    bad.ls = 0;
    bad.shunt[0].rsub = 0;
    EXPECT_EQ(bad.violations().size(), 2u);
}

TEST(QFactor, Arithmetic) {
    const auto n = y_net({1e9}, {Complex(0.01, -0.05)});
    EXPECT_NEAR(q_factor(n, 0), 5.0, 1e-14);
    EXPECT_THROW(q_factor(y_net({1e9}, {Complex(0, -0.05)}), 0), SingularityError);
    EXPECT_THROW(q_factor(n, 1), Error);
    TwoPortNetwork s = n;
    s.kind = NetworkKind::S;
    EXPECT_THROW(q_factor(s, 0), Error);
}

TEST(QFactor, EqualsImpedanceRatio) {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const Complex y(std::abs(u(rng)) + 1e-3, u(rng));
        const Complex z = 1.0 / y;
        EXPECT_NEAR(q_factor(y_net({1e9}, {y}), 0), z.imag() / z.real(), 1e-10 * (1 + std::abs(z.imag() / z.real())));
    }
}

TEST(QCurve, RlcPeakClosedForm) {
    // Y11 = 1/(R + jwL) + jwC has Q(w) = (wL - wC(R^2 + w^2 L^2)) / R, peaking at
    // w^2 = (L - C R^2) / (3 L^2 C).
    const double R = 4.0, L = 10e-9, C = 300e-15;
    const double f_exact = std::sqrt((L - C * R * R) / (3 * L * L * C)) / (2 * units::kPi);
    const auto grid = log_frequency_grid(1e8, 1e10, 400);
    std::vector<Complex> y;
    for (double f : grid) {
        const double w = 2 * units::kPi * f;
        y.push_back(1.0 / Complex(R, w * L) + Complex(0, w * C));
    }
    const auto c = q_curve(y_net(grid, y));
    const auto it = std::lower_bound(grid.begin(), grid.end(), f_exact);
    const double step = *it - *(it - 1);
    EXPECT_LE(std::abs(c.f_peak - f_exact), step);
    EXPECT_EQ(c.frequencies[c.peak_index], c.f_peak);
}

TEST(QCurve, MonotonePeaksAtLastSample) {
    const auto c = q_curve(y_net({1e9, 2e9, 3e9}, {Complex(1, -1), Complex(1, -2), Complex(1, -3)}));
    EXPECT_EQ(c.f_peak, 3e9);
    EXPECT_EQ(c.q_max, 3.0);
}

TEST(QCurve, SkipsSingularSamplesAndRejectsDegenerate) {
    const auto c = q_curve(y_net({1e9, 2e9, 3e9}, {Complex(1, -1), Complex(0, -2), Complex(1, -0.5)}));
    ASSERT_EQ(c.skipped.size(), 1u);
    EXPECT_EQ(c.skipped[0], 2e9);
    EXPECT_EQ(c.frequencies.size(), 2u);
    EXPECT_THROW(q_curve(y_net({1e9, 2e9, 3e9}, {Complex(0, -1), Complex(0, -2), Complex(0, -3)})), Error);
    EXPECT_THROW(q_curve(y_net({1e9, 2e9}, {Complex(1, -1), Complex(1, -2)})), Error);
}

TEST(QCurve, EffectiveInductanceAtLowFrequencyApproachesLs) {
    const auto model = build_pi_model(reference(), generate_layout(reference()), EmSettings{});
    const auto c = q_curve(pi_to_network(model, log_frequency_grid(1e6, 1e7, 5)));
    // With R >> wL, 1/Y11 ~ Z(1 - jwCZ) pulls l_eff below Ls by C R^2.
    const double r = model.series_resistance(1e6);
    const double expected = model.ls - (model.cs + model.shunt[0].cox) * r * r;
    EXPECT_LT(rel_diff(c.l_eff.front(), expected), 1e-4);
    EXPECT_LT(c.l_eff.front(), model.ls);
}

TEST(AirGap, MonotonicOnReferenceAndRandomSpecs) {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> width(5e-6, 15e-6), gap(1e-6, 4e-6), inner(60e-6, 150e-6);
    std::uniform_int_distribution<int> turns(3, 10);
    // Wide enough that small random spirals peak inside the grid.
    EmSettings em;
    em.freq_max = 100e9;
    em.freq_points = 400;
    for (int trial = 0; trial <= 10; ++trial) {
        auto s = reference();
        if (trial > 0) {
            s.trace_width = width(rng);
            s.spacing = gap(rng);
            s.inner_diameter = inner(rng);
            s.turns = turns(rng);
        }
        auto run = [&](DielectricMode mode) {
            s.dielectric_mode = mode;
            return std::pair{q_curve(pi_to_network(build_pi_model(s, generate_layout(s), em), em.frequency_grid())),
                             shunt_parasitics(s, em).cox_total};
        };
        const auto [ox, cox_ox] = run(DielectricMode::oxide);
        const auto [air, cox_air] = run(DielectricMode::airgap);
        EXPECT_LT(cox_air, cox_ox) << "trial " << trial;
        ASSERT_LT(air.peak_index + 1, air.frequencies.size()) << "trial " << trial;
        EXPECT_GT(air.f_peak, ox.f_peak) << "trial " << trial;
        EXPECT_GE(air.q_max, ox.q_max) << "trial " << trial;
    }
}

TEST(FrequencyGrid, LogSpacedInclusive) {
    const auto g = EmSettings{}.frequency_grid();
    ASSERT_EQ(g.size(), 200u);
    EXPECT_DOUBLE_EQ(g.front(), 0.1e9);
    EXPECT_DOUBLE_EQ(g.back(), 10e9);
    EXPECT_NEAR(g[1] / g[0], g[100] / g[99], 1e-12);
    EXPECT_THROW(log_frequency_grid(1e9, 1e8, 10), Error);
    EXPECT_THROW(log_frequency_grid(1e8, 1e9, 1), Error);
}
