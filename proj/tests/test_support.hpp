#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "spiralq/geometry.hpp"
#include "spiralq/material.hpp"

namespace spiralq::test {

inline const MaterialTable& materials() {
    static const MaterialTable table = MaterialTable::defaults();
    return table;
}

inline SpiralSpec reference() { return SpiralSpec::reference_device(materials()); }

inline SpiralSpec reference_with_xbeam() {
    SpiralSpec s = reference();
    s.xbeam = XBeamSpec::laminate_default(materials());
    return s;
}

inline std::string data_path(const std::string& rel) { return std::string(SPIRALQ_DATA_DIR) + "/" + rel; }

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("spiralq_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

}  // namespace spiralq::test
