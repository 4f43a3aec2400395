#include "spiralq/touchstone.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "spiralq/error.hpp"
#include "spiralq/keyvalue.hpp"
#include "spiralq/units.hpp"

namespace spiralq {

namespace {

std::string upper(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
    return s;
}

std::vector<std::string> tokens(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> out;
    for (std::string t; in >> t;) out.push_back(t);
    return out;
}

Complex to_complex(double a, double b, DataFormat format) {
    constexpr double kDeg = units::kPi / 180.0;
    switch (format) {
        case DataFormat::RI: return {a, b};
        case DataFormat::MA: return std::polar(a, b * kDeg);
        case DataFormat::DB: return std::polar(std::pow(10.0, a / 20.0), b * kDeg);
    }
    return {};
}

std::string shortest(double v) {
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

struct OptionLine {
    FrequencyUnit unit = FrequencyUnit::GHz;
    DataFormat format = DataFormat::MA;
    double z_ref = 50.0;
};

OptionLine parse_option_line(const std::string& line, std::size_t line_no, const std::string& source) {
    OptionLine opt;
    const auto tok = tokens(line.substr(1));
    for (std::size_t i = 0; i < tok.size(); ++i) {
        const std::string t = upper(tok[i]);
        if (t == "HZ") opt.unit = FrequencyUnit::Hz;
        else if (t == "KHZ") opt.unit = FrequencyUnit::kHz;
        else if (t == "MHZ") opt.unit = FrequencyUnit::MHz;
        else if (t == "GHZ") opt.unit = FrequencyUnit::GHz;
        else if (t == "S") continue;
        else if (t == "Y" || t == "Z" || t == "H" || t == "G")
            throw ParseError("parameter type " + t + " not supported, only S", line_no, source);
        else if (t == "RI") opt.format = DataFormat::RI;
        else if (t == "MA") opt.format = DataFormat::MA;
        else if (t == "DB") opt.format = DataFormat::DB;
        else if (t == "R") {
            if (i + 1 >= tok.size()) throw ParseError("option line: R without impedance", line_no, source);
            opt.z_ref = parse_double_text(tok[++i], line_no, source);
            if (!(opt.z_ref > 0.0)) throw ParseError("option line: reference impedance must be > 0", line_no, source);
        } else {
            throw ParseError("malformed option line, unexpected token '" + tok[i] + "'", line_no, source);
        }
    }
    return opt;
}

}  // namespace

double unit_scale(FrequencyUnit unit) {
    switch (unit) {
        case FrequencyUnit::Hz: return 1.0;
        case FrequencyUnit::kHz: return 1e3;
        case FrequencyUnit::MHz: return 1e6;
        case FrequencyUnit::GHz: return 1e9;
    }
    return 1.0;
}

std::string to_string(FrequencyUnit unit) {
    switch (unit) {
        case FrequencyUnit::Hz: return "Hz";
        case FrequencyUnit::kHz: return "kHz";
        case FrequencyUnit::MHz: return "MHz";
        case FrequencyUnit::GHz: return "GHz";
    }
    return "Hz";
}

std::string to_string(DataFormat format) {
    switch (format) {
        case DataFormat::RI: return "RI";
        case DataFormat::MA: return "MA";
        case DataFormat::DB: return "DB";
    }
    return "RI";
}

TouchstoneRecord parse_touchstone(const std::string& text, const std::string& source) {
    TouchstoneRecord rec;
    rec.network.kind = NetworkKind::S;
    OptionLine opt;
    bool have_option = false;

    std::istringstream in(text);
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto bang = raw.find('!');
        if (bang != std::string::npos && trim(std::string_view(raw).substr(0, bang)).empty()) {
            rec.comments.push_back(trim(std::string_view(raw).substr(bang + 1)));
            continue;
        }
        const std::string line = trim(std::string_view(raw).substr(0, bang));
        if (line.empty()) continue;
        if (line.front() == '[')
            throw ParseError("Touchstone v2 keyword " + line + " is not supported (v1 only)", line_no, source);
        if (line.front() == '#') {
            if (have_option) throw ParseError("duplicate option line", line_no, source);
            if (!rec.network.frequencies.empty())
                throw ParseError("option line must precede the data", line_no, source);
            opt = parse_option_line(line, line_no, source);
            have_option = true;
            continue;
        }
        const auto tok = tokens(line);
        if (tok.size() != 9)
            throw ParseError("expected 9 columns for a two-port row, got " + std::to_string(tok.size()),
                             line_no, source);
        std::array<double, 9> v{};
        for (std::size_t i = 0; i < 9; ++i) v[i] = parse_double_text(tok[i], line_no, source);
        const double f = v[0] * unit_scale(opt.unit);
        if (!rec.network.frequencies.empty() && !(f > rec.network.frequencies.back()))
            throw ParseError("frequencies must be strictly increasing", line_no, source);
        if (f < 0.0) throw ParseError("negative frequency", line_no, source);
        Matrix2c s;
        s(0, 0) = to_complex(v[1], v[2], opt.format);
        s(1, 0) = to_complex(v[3], v[4], opt.format);
        s(0, 1) = to_complex(v[5], v[6], opt.format);
        s(1, 1) = to_complex(v[7], v[8], opt.format);
        rec.network.frequencies.push_back(f);
        rec.network.matrices.push_back(s);
    }
    if (rec.network.frequencies.empty()) throw ParseError("no data rows", line_no, source);
    rec.unit = opt.unit;
    rec.format = opt.format;
    rec.network.z_ref = opt.z_ref;
    return rec;
}

TouchstoneRecord load_touchstone(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_touchstone(ss.str(), path);
}

std::string serialize_touchstone(const TwoPortNetwork& s, const TouchstoneWriteOptions& options) {
    if (s.kind != NetworkKind::S) throw Error("Touchstone output needs an S network");
    s.check();
    std::string out;
    for (const auto& c : options.comments) out += "! " + c + "\n";
    out += "# " + to_string(options.unit) + " S " + to_string(options.format) + " R " + shortest(s.z_ref) + "\n";

    const double scale = unit_scale(options.unit);
    auto pair = [&](const Complex& z) {
        switch (options.format) {
            case DataFormat::RI: return shortest(z.real()) + " " + shortest(z.imag());
            case DataFormat::MA:
                return shortest(std::abs(z)) + " " + shortest(std::arg(z) * 180.0 / units::kPi);
            case DataFormat::DB:
                return shortest(20.0 * std::log10(std::abs(z))) + " " +
                       shortest(std::arg(z) * 180.0 / units::kPi);
        }
        return std::string{};
    };
    for (std::size_t i = 0; i < s.size(); ++i) {
        const auto& m = s.matrices[i];
        out += shortest(s.frequencies[i] / scale) + " " + pair(m(0, 0)) + " " + pair(m(1, 0)) + " " +
               pair(m(0, 1)) + " " + pair(m(1, 1)) + "\n";
    }
    return out;
}

std::string serialize_touchstone(const TouchstoneRecord& record) {
    return serialize_touchstone(record.network, {record.unit, record.format, record.comments});
}

void save_touchstone(const std::string& path, const TwoPortNetwork& s_network,
                     const TouchstoneWriteOptions& options) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    out << serialize_touchstone(s_network, options);
    if (!out) throw Error("write failed for '" + path + "'");
}

}  // namespace spiralq
