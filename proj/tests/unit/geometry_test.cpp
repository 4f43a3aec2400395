#include <gtest/gtest.h>

#include "spiralq/error.hpp"
#include "spiralq/geometry.hpp"
#include "test_support.hpp"

using namespace spiralq;
using spiralq::test::reference;

namespace {

bool mentions(const std::vector<std::string>& v, const std::string& field) {
    for (const auto& s : v)
        if (s.rfind(field, 0) == 0) return true;
    return false;
}

}  // namespace

TEST(Validate, ReferenceDeviceIsValid) { EXPECT_TRUE(validate_spec(reference()).empty()); }

TEST(Validate, ZeroSpacingNamesSpacing) {
    auto s = reference();
    s.spacing = 0;
    const auto v = validate_spec(s);
    ASSERT_EQ(v.size(), 1u);
    EXPECT_TRUE(mentions(v, "spacing"));
}

TEST(Validate, ZeroTurnsNamesTurns) {
    auto s = reference();
    s.turns = 0;
    const auto v = validate_spec(s);
    ASSERT_EQ(v.size(), 1u);
    EXPECT_TRUE(mentions(v, "turns"));
}

TEST(Validate, CollectsEveryViolation) {
    auto s = reference();
    s.trace_width = -1e-6;
    s.metal_thickness = 0;
    s.lead_gap = 0;
    const auto v = validate_spec(s);
    EXPECT_TRUE(mentions(v, "trace_width"));
    EXPECT_TRUE(mentions(v, "metal_thickness"));
    EXPECT_TRUE(mentions(v, "lead_gap"));
}

TEST(Validate, XBeamNeedsLayers) {
    auto s = spiralq::test::reference_with_xbeam();
    s.xbeam->layers.clear();
    EXPECT_FALSE(validate_spec(s).empty());
    s = spiralq::test::reference_with_xbeam();
    s.xbeam->layers[0].thickness = 0;
    EXPECT_FALSE(validate_spec(s).empty());
}

TEST(Layout, InvalidSpecThrowsValidationError) {
    auto s = reference();
    s.turns = 0;
    try {
        generate_layout(s);
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_TRUE(mentions(e.violations(), "turns"));
    }
}

TEST(Layout, SingleTurn) {
    auto s = reference();
    s.turns = 1;
    const auto l = generate_layout(s);
    ASSERT_EQ(l.count(LayerTag::winding), 4u);
    // sides d, d, d + p, d + p
    EXPECT_NEAR(l.total_length(LayerTag::winding), 4 * 100e-6 + 2 * 12e-6, 1e-15);
}

TEST(Layout, ReferenceDeviceGolden) {
    const auto l = generate_layout(reference());
    const auto w = l.indices_of(LayerTag::winding);
    ASSERT_EQ(w.size(), 40u);
    EXPECT_NEAR(l.segments[w.back()].length(), 328e-6, 1e-15);
    EXPECT_NEAR(l.total_length(LayerTag::winding), 8560e-6, 1e-12);
    EXPECT_EQ(l.count(LayerTag::lead), 1u);
    EXPECT_EQ(l.count(LayerTag::xbeam_arm), 0u);
    EXPECT_EQ(l.anchors.size(), 2u);
}

TEST(Layout, SideLengthRecurrence) {
    const auto s = reference();
    for (std::size_t k = 0; k + 2 < 40; k += 2) {
        EXPECT_DOUBLE_EQ(winding_side_length(s, k), winding_side_length(s, k + 1));
        EXPECT_NEAR(winding_side_length(s, k + 2) - winding_side_length(s, k), s.pitch(), 1e-18);
    }
}

TEST(Layout, WindingIsConnectedAndAxisAligned) {
    const auto l = generate_layout(reference());
    const auto w = l.indices_of(LayerTag::winding);
    for (std::size_t i = 0; i < w.size(); ++i) {
        const auto& seg = l.segments[w[i]];
        const Vec3 d = seg.direction();
        EXPECT_NEAR(std::abs(d.x) + std::abs(d.y), 1.0, 1e-15);
        EXPECT_EQ(d.z, 0.0);
        if (i + 1 < w.size()) {
            EXPECT_EQ(seg.end, l.segments[w[i + 1]].start);
        }
    }
}

TEST(Layout, Deterministic) {
    const auto a = generate_layout(spiralq::test::reference_with_xbeam());
    const auto b = generate_layout(spiralq::test::reference_with_xbeam());
    ASSERT_EQ(a.segments.size(), b.segments.size());
    for (std::size_t i = 0; i < a.segments.size(); ++i) {
        EXPECT_EQ(a.segments[i].start, b.segments[i].start);
        EXPECT_EQ(a.segments[i].end, b.segments[i].end);
    }
}

TEST(Layout, WindingCountForTurnsOneToTwenty) {
    auto s = reference();
    double previous = 0.0;
    for (int n = 1; n <= 20; ++n) {
        s.turns = n;
        const auto l = generate_layout(s);
        EXPECT_EQ(l.count(LayerTag::winding), static_cast<std::size_t>(4 * n));
        const double len = l.total_length(LayerTag::winding);
        EXPECT_GT(len, previous);
        previous = len;
    }
}

TEST(Layout, NonAdjacentWindingsClearBySpacing) {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> width(2e-6, 20e-6), gap(0.5e-6, 10e-6), inner(30e-6, 200e-6);
    for (int trial = 0; trial < 20; ++trial) {
        auto s = reference();
        s.trace_width = width(rng);
        s.spacing = gap(rng);
        s.inner_diameter = inner(rng);
        s.turns = 1 + trial % 8;
        const auto l = generate_layout(s);
        const auto w = l.indices_of(LayerTag::winding);
        for (std::size_t i = 0; i < w.size(); ++i)
            for (std::size_t j = i + 2; j < w.size(); ++j)
                EXPECT_GE(planar_clearance(l.segments[w[i]], l.segments[w[j]]), s.spacing * (1 - 1e-9))
                    << "segments " << i << "," << j;
    }
}

TEST(Layout, LeadPassesUnderWindingsAtLeadGap) {
    const auto s = reference();
    const auto l = generate_layout(s);
    const auto& lead = l.segments[l.indices_of(LayerTag::lead).at(0)];
    EXPECT_NEAR(lead.start.z - 0.5 * lead.thickness, s.lead_gap, 1e-18);
    const auto& w0 = l.segments[0];
    EXPECT_NEAR(w0.start.z - 0.5 * w0.thickness, s.airgap_height, 1e-18);
    EXPECT_EQ(lead.start.x, 0.0);
    EXPECT_EQ(lead.start.y, 0.0);
}

TEST(Layout, XBeamAddsTwoAnchoredDiagonalArms) {
    auto s = spiralq::test::reference_with_xbeam();
    auto l = generate_layout(s);
    const auto arms = l.indices_of(LayerTag::xbeam_arm);
    ASSERT_EQ(arms.size(), 2u);
    EXPECT_EQ(l.anchors.size(), 6u);
    for (auto i : arms) {
        const Vec3 d = l.segments[i].direction();
        EXPECT_NEAR(std::abs(d.x), std::sqrt(0.5), 1e-12);
        EXPECT_NEAR(std::abs(d.y), std::sqrt(0.5), 1e-12);
        EXPECT_LT(l.segments[i].start.z, l.segments[0].start.z);
    }
    s.xbeam->anchored = false;
    l = generate_layout(s);
    EXPECT_EQ(l.anchors.size(), 2u);
}

TEST(Mass, BarGolden) {
    const auto& cu = spiralq::test::materials().at("Cu");
    EXPECT_NEAR(bar_mass(340e-6, 10e-6, 1e-6, cu), 3.0464e-11, 1e-20);
    EXPECT_DOUBLE_EQ(bar_mass(340e-6, 10e-6, 2e-6, cu), 2 * bar_mass(340e-6, 10e-6, 1e-6, cu));
}

TEST(Mass, PerSegmentSumsToTotalAndSkipsArms) {
    const auto l = generate_layout(spiralq::test::reference_with_xbeam());
    const auto m = conductor_mass(l, spiralq::test::materials().at("Cu"));
    ASSERT_EQ(m.per_segment.size(), l.segments.size());
    double sum = 0;
    for (double v : m.per_segment) sum += v;
    EXPECT_NEAR(sum, m.total, 1e-24);
    for (auto i : l.indices_of(LayerTag::xbeam_arm)) EXPECT_EQ(m.per_segment[i], 0.0);
}

TEST(Materials, DefaultsAndLookup) {
    const auto& t = spiralq::test::materials();
    EXPECT_EQ(t.at("Cu").youngs_modulus, 130e9);
    EXPECT_EQ(t.at("Al").youngs_modulus, 74.14e9);
    EXPECT_EQ(t.at("SiO2").rel_permittivity.value(), 3.9);
    EXPECT_EQ(t.at("Si3N4").youngs_modulus, 250e9);
    EXPECT_THROW(t.at("Unobtainium"), Error);
    Material bad;
    bad.name = "bad";
    bad.youngs_modulus = -1;
    EXPECT_EQ(bad.violations().size(), 2u);
}
