#include "spiralq/network.hpp"

#include <cmath>
#include <string>

#include <Eigen/LU>
#include <fmt/format.h>

#include "spiralq/error.hpp"

namespace spiralq {

namespace {

// I + S (or I + zY) is treated as singular below this determinant magnitude,
// scaled by the size of the matrix entries.
constexpr double kSingularDet = 1e-13;

Matrix2c checked_inverse(const Matrix2c& m, double freq, const char* what) {
    const Complex det = m.determinant();
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if (!(std::abs(det) > kSingularDet * scale * scale))
        throw SingularityError(fmt::format("{} is singular at {:.9e} Hz", what, freq));
    return m.inverse();
}

}  // namespace

void TwoPortNetwork::check() const {
    if (frequencies.empty()) throw Error("network has no frequency points");
    if (matrices.size() != frequencies.size())
        throw Error(fmt::format("network has {} frequencies but {} matrices", frequencies.size(),
                                matrices.size()));
    for (std::size_t i = 1; i < frequencies.size(); ++i)
        if (!(frequencies[i] > frequencies[i - 1]))
            throw Error(fmt::format("frequencies not strictly increasing at index {}", i));
    if (!(z_ref > 0.0)) throw Error("reference impedance must be > 0");
}

TwoPortNetwork s_to_y(const TwoPortNetwork& s) {
    if (s.kind != NetworkKind::S) throw Error("s_to_y expects an S network");
    s.check();
    TwoPortNetwork y{NetworkKind::Y, s.frequencies, {}, s.z_ref};
    y.matrices.reserve(s.size());
    const Matrix2c id = Matrix2c::Identity();
    for (std::size_t i = 0; i < s.size(); ++i) {
        const Matrix2c& m = s.matrices[i];
        y.matrices.push_back((id - m) * checked_inverse(id + m, s.frequencies[i], "I + S") / s.z_ref);
    }
    return y;
}

TwoPortNetwork y_to_s(const TwoPortNetwork& y, double z_ref) {
    if (y.kind != NetworkKind::Y) throw Error("y_to_s expects a Y network");
    if (!(z_ref > 0.0)) throw Error("reference impedance must be > 0");
    TwoPortNetwork s{NetworkKind::S, y.frequencies, {}, z_ref};
    y.check();
    s.matrices.reserve(y.size());
    const Matrix2c id = Matrix2c::Identity();
    for (std::size_t i = 0; i < y.size(); ++i) {
        const Matrix2c zy = z_ref * y.matrices[i];
        s.matrices.push_back((id - zy) * checked_inverse(id + zy, y.frequencies[i], "I + zY"));
    }
    return s;
}

TwoPortNetwork open_deembed(const TwoPortNetwork& complete, const TwoPortNetwork& open_dummy) {
    if (complete.kind != NetworkKind::Y || open_dummy.kind != NetworkKind::Y)
        throw Error("open de-embedding operates on Y networks");
    complete.check();
    open_dummy.check();
    if (complete.frequencies != open_dummy.frequencies) {
        std::string detail;
        if (complete.size() != open_dummy.size()) {
            detail = fmt::format("{} vs {} points", complete.size(), open_dummy.size());
        } else {
            for (std::size_t i = 0; i < complete.size(); ++i)
                if (complete.frequencies[i] != open_dummy.frequencies[i]) {
                    detail = fmt::format("first mismatch at index {} ({:.9e} Hz vs {:.9e} Hz)", i,
                                         complete.frequencies[i], open_dummy.frequencies[i]);
                    break;
                }
        }
        throw AlignmentError("frequency grids of complete and open measurements differ: " + detail);
    }
    TwoPortNetwork out{NetworkKind::Y, complete.frequencies, {}, complete.z_ref};
    out.matrices.reserve(complete.size());
    for (std::size_t i = 0; i < complete.size(); ++i)
        out.matrices.push_back(complete.matrices[i] - open_dummy.matrices[i]);
    return out;
}

double reciprocity_error(const TwoPortNetwork& net) {
    double worst = 0.0;
    for (const auto& m : net.matrices) {
        const double diff = std::abs(m(0, 1) - m(1, 0));
        const double ref = std::abs(m(0, 1));
        worst = std::max(worst, ref > 0.0 ? diff / ref : diff);
    }
    return worst;
}

}  // namespace spiralq
