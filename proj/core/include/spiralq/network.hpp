#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Core>

namespace spiralq {

using Complex = std::complex<double>;
using Matrix2c = Eigen::Matrix2cd;

enum class NetworkKind { S, Y };

/// Frequency-sampled 2x2 network data. S networks carry a real reference
/// impedance shared by both ports.
struct TwoPortNetwork {
    NetworkKind kind = NetworkKind::S;
    std::vector<double> frequencies;  // Hz, strictly increasing
    std::vector<Matrix2c> matrices;
    double z_ref = 50.0;  // ohm

    std::size_t size() const { return frequencies.size(); }

    /// Throws Error when the invariants do not hold.
    void check() const;

    /// Exact, element-wise comparison.
    friend bool operator==(const TwoPortNetwork& a, const TwoPortNetwork& b) {
        if (a.kind != b.kind || a.z_ref != b.z_ref || a.frequencies != b.frequencies ||
            a.matrices.size() != b.matrices.size())
            return false;
        for (std::size_t i = 0; i < a.matrices.size(); ++i)
            if (a.matrices[i] != b.matrices[i]) return false;
        return true;
    }
};

/// Y = (1/z_ref) (I - S)(I + S)^-1. Throws SingularityError naming the first
/// frequency where I + S cannot be inverted.
TwoPortNetwork s_to_y(const TwoPortNetwork& s);

/// S = (I - z_ref Y)(I + z_ref Y)^-1, the inverse of s_to_y.
TwoPortNetwork y_to_s(const TwoPortNetwork& y, double z_ref = 50.0);

/// Open de-embedding: Y_complete - Y_open per frequency. The grids must be
/// identical; nothing is interpolated (AlignmentError otherwise).
TwoPortNetwork open_deembed(const TwoPortNetwork& complete, const TwoPortNetwork& open_dummy);

/// max |Y12 - Y21| / |Y12| over the sweep; 0 for a perfectly reciprocal network.
double reciprocity_error(const TwoPortNetwork& net);

}  // namespace spiralq
