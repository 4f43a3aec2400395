#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace spiralq {

struct Material {
    std::string name;
    double youngs_modulus = 0.0;  // Pa
    double density = 0.0;         // kg/m^3
    double poisson_ratio = 0.3;
    std::optional<double> resistivity;       // ohm*m, conductors
    std::optional<double> rel_permittivity;  // dielectrics

    double shear_modulus() const { return youngs_modulus / (2.0 * (1.0 + poisson_ratio)); }

    /// Empty when the material is physically usable.
    std::vector<std::string> violations() const;
};

/// Name-indexed material library. Lookup is exact and case-sensitive.
class MaterialTable {
public:
    /// Cu, Al, SiO2 and Si3N4 with handbook values (Cu/Al moduli 130 / 74.14 GPa).
    static MaterialTable defaults();

    void put(Material m);
    const Material& at(const std::string& name) const;
    bool contains(const std::string& name) const { return table_.count(name) != 0; }
    std::vector<std::string> names() const;

private:
    std::map<std::string, Material> table_;
};

}  // namespace spiralq
