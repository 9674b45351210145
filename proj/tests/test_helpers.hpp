#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "saptvqe/basis.hpp"
#include "saptvqe/molecule.hpp"

namespace testhelpers {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string data_path(const std::string& rel) {
    return std::string(SAPTVQE_DATA_DIR) + "/" + rel;
}

inline saptvqe::DimerSystem water_dimer() {
    return saptvqe::parse_dimer_xyz(read_file(data_path("geometries/water_dimer_r0.2397.xyz")));
}

inline saptvqe::GaussianBasis load_basis(const std::string& name, const saptvqe::Molecule& mol) {
    return saptvqe::parse_basis(read_file(data_path("basis/" + name)), mol);
}

} // namespace testhelpers
