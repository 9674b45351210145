#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "saptvqe/integrals.hpp"

namespace saptvqe {

struct MOSpace {
    Matrix coefficients;        // AO x MO, columns orthonormal under S
    Vector orbital_energies;    // ascending
    int n_occupied = 0;         // doubly occupied count

    int n_orbitals() const { return static_cast<int>(coefficients.cols()); }
};

struct RhfOptions {
    int max_iterations = 128;
    double convergence = 1e-8; // max |FDS - SDF|
    int diis_depth = 8;
    std::optional<std::string> trace_csv_path; // per-iteration log
};

struct RhfResult {
    MOSpace mos;
    double energy = 0.0;
    int iterations = 0;
    double overlap_condition = 0.0;
    std::vector<double> energy_trace;
    std::vector<double> gradient_trace;
};

class ScfError : public std::runtime_error {
  public:
    ScfError(const std::string& msg, double last_energy, double gradient)
        : std::runtime_error(msg), last_energy(last_energy), gradient(gradient) {}
    double last_energy = 0.0;
    double gradient = 0.0;
};

// Spin-summed closed-shell Fock builds: F = h + J[D] - K[D]/2.
struct JKPair {
    Matrix j, k;
};
JKPair build_jk(const ERITensor& eri, const Matrix& density);

// Restricted Hartree-Fock with DIIS and a core-Hamiltonian guess.
// Precomputed-integral variant; h must contain kinetic + nuclear
// attraction for the nuclei whose repulsion is v_nn.
RhfResult rhf(const Matrix& s, const Matrix& h, const ERITensor& eri, int n_electrons,
              double v_nn, const RhfOptions& opts = {});

RhfResult rhf(const Molecule& molecule, const GaussianBasis& basis, const RhfOptions& opts = {});

// E_int = E_AB - E_A - E_B with the dimer solved in the union basis and
// each monomer in its own basis (no counterpoise). Diagnostic only.
double supermolecular_interaction(const DimerSystem& dimer, const GaussianBasis& basis_a,
                                  const GaussianBasis& basis_b, const RhfOptions& opts = {});

} // namespace saptvqe
