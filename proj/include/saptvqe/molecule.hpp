#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace saptvqe {

struct Atom {
    std::string symbol;
    int charge = 0;                   // nuclear charge Z
    std::array<double, 3> position{}; // Bohr
};

struct Molecule {
    std::vector<Atom> atoms;
    int net_charge = 0;

    int nuclear_charge() const;
    // Electron count; throws if negative.
    int n_electrons() const;
    // Internuclear repulsion energy in Hartree.
    double nuclear_repulsion() const;
};

struct DimerSystem {
    Molecule monomer_a;
    Molecule monomer_b;

    // Repulsion between the nuclei of A and the nuclei of B.
    double cross_nuclear_repulsion() const;
};

class ParseError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Maps an element symbol (case-insensitive) to its nuclear charge.
int element_number(const std::string& symbol);

// Parses two XYZ-style blocks (element x y z per line, coordinates in
// Angstrom) separated by a line containing only `--`. No count/comment
// headers. Returns the two monomers with positions in Bohr.
DimerSystem parse_dimer_xyz(const std::string& text);

// Single block, same line grammar.
Molecule parse_xyz_block(const std::string& text);

} // namespace saptvqe
