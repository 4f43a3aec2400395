#include <gtest/gtest.h>

#include <fstream>
#include <random>

#include "spiralq/error.hpp"
#include "spiralq/touchstone.hpp"
#include "test_support.hpp"

using namespace spiralq;

namespace {

std::size_t parse_error_line(const std::string& text) {
    try {
        parse_touchstone(text, "t.s2p");
    } catch (const ParseError& e) {
        return e.line();
    }
    return 0;
}

TwoPortNetwork random_s(std::size_t n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-0.7, 0.7);
    TwoPortNetwork s{NetworkKind::S, {}, {}, 50.0};
    double f = 1.234567e8;
    for (std::size_t i = 0; i < n; ++i) {
        Matrix2c m;
        for (int k = 0; k < 4; ++k) m(k / 2, k % 2) = Complex(u(rng), u(rng));
        s.frequencies.push_back(f);
        s.matrices.push_back(m);
        f *= 1.0731;
    }
    return s;
}

}  // namespace

TEST(Touchstone, ParsesRiWithColumnOrder) {
    const auto r = parse_touchstone("! header\n# MHz S RI R 75\n100 0.1 0.2 0.3 0.4 0.5 0.6 0.7 0.8\n");
    EXPECT_EQ(r.unit, FrequencyUnit::MHz);
    EXPECT_EQ(r.format, DataFormat::RI);
    EXPECT_EQ(r.network.z_ref, 75.0);
    EXPECT_EQ(r.network.frequencies[0], 100e6);
    const auto& m = r.network.matrices[0];
    EXPECT_EQ(m(0, 0), Complex(0.1, 0.2));
    EXPECT_EQ(m(1, 0), Complex(0.3, 0.4));  // S21 precedes S12
    EXPECT_EQ(m(0, 1), Complex(0.5, 0.6));
    EXPECT_EQ(m(1, 1), Complex(0.7, 0.8));
    ASSERT_EQ(r.comments.size(), 1u);
    EXPECT_EQ(r.comments[0], "header");
}

TEST(Touchstone, DefaultsAndFormats) {
    const auto ma = parse_touchstone("1 1 90 0.5 0 0.5 180 1 -90\n");
    EXPECT_EQ(ma.unit, FrequencyUnit::GHz);
    EXPECT_EQ(ma.format, DataFormat::MA);
    EXPECT_EQ(ma.network.z_ref, 50.0);
    EXPECT_NEAR(std::abs(ma.network.matrices[0](0, 0) - Complex(0, 1)), 0, 1e-15);
    EXPECT_NEAR(std::abs(ma.network.matrices[0](0, 1) - Complex(-0.5, 0)), 0, 1e-15);

    const auto db = parse_touchstone("# ghz db s r 50\n2 -20 0 -6.0205999132796239 0 0 0 -40 180\n");
    EXPECT_NEAR(std::abs(db.network.matrices[0](0, 0) - Complex(0.1, 0)), 0, 1e-15);
    EXPECT_NEAR(std::abs(db.network.matrices[0](1, 0)), 0.5, 1e-12);
    EXPECT_NEAR(std::abs(db.network.matrices[0](1, 1) - Complex(-0.01, 0)), 0, 1e-15);
    EXPECT_EQ(db.network.frequencies[0], 2e9);
}

TEST(Touchstone, InlineCommentsAndBlankLines) {
    const auto r = parse_touchstone("# Hz S RI\n\n1 0 0 0 0 0 0 0 0 ! first\n   \n2 0 0 0 0 0 0 0 0\n");
    EXPECT_EQ(r.network.size(), 2u);
    EXPECT_TRUE(r.comments.empty());
}

TEST(Touchstone, ErrorsCarryLineNumbers) {
    EXPECT_EQ(parse_error_line("# GHz S RI\n1 0 0 0 0 0 0 0\n"), 2u);
    EXPECT_EQ(parse_error_line("# GHz S RI\n1 0 0 0 0 0 0 0 0\n1 0 0 0 0 0 0 0 0\n"), 3u);
    EXPECT_EQ(parse_error_line("# GHz Y RI\n"), 1u);
    EXPECT_EQ(parse_error_line("# GHz Z RI\n"), 1u);
    EXPECT_EQ(parse_error_line("# GHz S XX\n"), 1u);
    EXPECT_EQ(parse_error_line("# GHz S RI R\n"), 1u);
    EXPECT_EQ(parse_error_line("# GHz S RI R -5\n"), 1u);
    EXPECT_EQ(parse_error_line("# GHz S RI\n# GHz S RI\n"), 2u);
    EXPECT_EQ(parse_error_line("1 0 0 0 0 0 0 0 0\n# GHz S RI\n"), 2u);
    EXPECT_EQ(parse_error_line("[Version] 2.0\n"), 1u);
    EXPECT_EQ(parse_error_line("# GHz S RI\n1 0 0 0 abc 0 0 0 0\n"), 2u);
    EXPECT_THROW(parse_touchstone("! only comments\n"), ParseError);
    EXPECT_THROW(parse_touchstone(""), ParseError);
    EXPECT_THROW(load_touchstone("/nonexistent/file.s2p"), Error);
}

TEST(Touchstone, SerializeParseFixedPoint) {
    TouchstoneRecord rec;
    rec.network = random_s(50, 5);
    rec.unit = FrequencyUnit::Hz;
    rec.format = DataFormat::RI;
    rec.comments = {"generated"};
    const std::string text = serialize_touchstone(rec);
    const auto back = parse_touchstone(text);
    EXPECT_EQ(back, rec);
    EXPECT_EQ(serialize_touchstone(back), text);
}

TEST(Touchstone, OtherUnitsAndFormatsStabilise) {
    for (auto unit : {FrequencyUnit::kHz, FrequencyUnit::MHz, FrequencyUnit::GHz})
        for (auto format : {DataFormat::RI, DataFormat::MA, DataFormat::DB}) {
            TouchstoneRecord rec;
            rec.network = random_s(20, 9);
            rec.unit = unit;
            rec.format = format;
            const auto once = parse_touchstone(serialize_touchstone(rec));
            for (std::size_t i = 0; i < 20; ++i) {
                EXPECT_LT((once.network.matrices[i] - rec.network.matrices[i]).norm(), 1e-13);
                EXPECT_LT(spiralq::test::rel_diff(once.network.frequencies[i], rec.network.frequencies[i]), 1e-15);
            }
            // Polar formats pass through a complex conversion, so a second
            // pass agrees to rounding rather than bit for bit.
            const auto twice = parse_touchstone(serialize_touchstone(once));
            EXPECT_EQ(twice.network.frequencies, once.network.frequencies);
            for (std::size_t i = 0; i < 20; ++i)
                EXPECT_LT((twice.network.matrices[i] - once.network.matrices[i]).norm(), 1e-15)
                    << to_string(unit) << " " << to_string(format);
            if (format == DataFormat::RI) {
                const std::string text = serialize_touchstone(once);
                EXPECT_EQ(serialize_touchstone(parse_touchstone(text)), text) << to_string(unit);
            }
        }
}

TEST(Touchstone, SaveAndLoad) {
    const auto dir = spiralq::test::scratch_dir("touchstone");
    const auto path = (dir / "x.s2p").string();
    const auto s = random_s(7, 1);
    save_touchstone(path, s);
    const auto r = load_touchstone(path);
    EXPECT_EQ(r.network.frequencies, s.frequencies);
    for (std::size_t i = 0; i < 7; ++i) EXPECT_EQ(r.network.matrices[i], s.matrices[i]);
    TwoPortNetwork y = s;
    y.kind = NetworkKind::Y;
    EXPECT_THROW(serialize_touchstone(y), Error);
}

TEST(Touchstone, RepoFixturesParse) {
    for (const char* name : {"complete.s2p", "open.s2p", "dut.s2p"}) {
        const auto r = load_touchstone(spiralq::test::data_path(std::string("fixtures/") + name));
        EXPECT_EQ(r.network.size(), 200u) << name;
        EXPECT_EQ(r.format, DataFormat::RI);
    }
}
