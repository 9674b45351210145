#pragma once

#include <array>
#include <string>
#include <vector>

#include "saptvqe/molecule.hpp"

namespace saptvqe {

struct Primitive {
    double exponent = 0.0;
    double coefficient = 0.0; // includes the primitive normalization
};

// One contracted Cartesian shell. Components are enumerated in
// alphabetical order, e.g. l=2 -> xx, xy, xz, yy, yz, zz.
struct Shell {
    int center = 0; // atom index within the owning molecule
    int l = 0;
    std::array<double, 3> origin{}; // Bohr
    std::vector<Primitive> primitives;

    int n_components() const { return (l + 1) * (l + 2) / 2; }
};

struct GaussianBasis {
    std::vector<Shell> shells;

    int n_functions() const;
    // First AO index of each shell, plus the total count as a sentinel.
    std::vector<int> shell_offsets() const;
};

// Cartesian powers of component m of an l-shell, alphabetical order.
std::array<int, 3> cartesian_component(int l, int m);

// Ratio of the (i,j,k) component normalization to the (l,0,0) one,
// sqrt((2l-1)!! / ((2i-1)!!(2j-1)!!(2k-1)!!)); the integral engine scales
// shell blocks by this per component.
double component_normalization(int i, int j, int k);

// Parses a Gaussian94-style basis set text ("****"-delimited element
// blocks, shell headers `TYPE NPRIM SCALE`, one exponent/coefficient
// row per primitive; SP shells carry s and p columns) and instantiates
// shells on every atom of `molecule`. Contracted functions come out
// normalized to unit self-overlap.
GaussianBasis parse_basis(const std::string& text, const Molecule& molecule);

// Concatenates two bases (A's shells first); used for dimer-level builds.
GaussianBasis merge_bases(const GaussianBasis& a, const GaussianBasis& b);

} // namespace saptvqe
