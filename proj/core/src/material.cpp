#include "spiralq/material.hpp"

#include "spiralq/error.hpp"

namespace spiralq {

std::vector<std::string> Material::violations() const {
    std::vector<std::string> out;
    if (!(youngs_modulus > 0.0)) out.push_back(name + ": youngs_modulus must be > 0");
    if (!(density > 0.0)) out.push_back(name + ": density must be > 0");
    if (!(poisson_ratio > -1.0 && poisson_ratio < 0.5))
        out.push_back(name + ": poisson_ratio must lie in (-1, 0.5)");
    if (resistivity && !(*resistivity > 0.0)) out.push_back(name + ": resistivity must be > 0");
    if (rel_permittivity && !(*rel_permittivity > 0.0))
        out.push_back(name + ": rel_permittivity must be > 0");
    return out;
}

MaterialTable MaterialTable::defaults() {
    MaterialTable t;
    t.put({"Cu", 130e9, 8960.0, 0.34, 1.7e-8, std::nullopt});
    t.put({"Al", 74.14e9, 2700.0, 0.33, 2.65e-8, std::nullopt});
    t.put({"SiO2", 70e9, 2200.0, 0.17, std::nullopt, 3.9});
    t.put({"Si3N4", 250e9, 3100.0, 0.23, std::nullopt, 7.5});
    return t;
}

void MaterialTable::put(Material m) {
    auto name = m.name;
    table_.insert_or_assign(std::move(name), std::move(m));
}

const Material& MaterialTable::at(const std::string& name) const {
    auto it = table_.find(name);
    if (it == table_.end()) throw Error("unknown material '" + name + "'");
    return it->second;
}

std::vector<std::string> MaterialTable::names() const {
    std::vector<std::string> out;
    out.reserve(table_.size());
    for (const auto& [k, v] : table_) out.push_back(k);
    return out;
}

}  // namespace spiralq
