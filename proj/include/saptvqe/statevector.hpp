#pragma once

#include <cstdint>
#include <vector>

#include "saptvqe/casci.hpp"

namespace saptvqe {

// Real statevector over 2*n_orbitals qubits in the interleaved layout:
// qubit 2p is the alpha spin-orbital of spatial orbital p, qubit 2p+1 the
// beta one. Every gate used here is real orthogonal, so amplitudes stay
// real. Jordan-Wigner strings follow the qubit order.
class Statevector {
  public:
    Statevector() = default;
    explicit Statevector(int n_orbitals);

    int n_orbitals() const { return n_orb_; }
    int n_qubits() const { return 2 * n_orb_; }
    std::size_t size() const { return amps_.size(); }
    double& operator[](std::size_t i) { return amps_[i]; }
    double operator[](std::size_t i) const { return amps_[i]; }
    const std::vector<double>& amplitudes() const { return amps_; }
    std::vector<double>& amplitudes() { return amps_; }

    double norm() const;
    double expectation_z(int qubit) const;      // <Z_q>
    double expectation_number(int qubit) const; // <n_q>
    double alpha_count() const;                 // <N_alpha>
    double beta_count() const;

  private:
    int n_orb_ = 0;
    std::vector<double> amps_;
};

// Closed-shell reference determinant: orbitals 0..n_el/2-1 doubly occupied.
Statevector reference_statevector(int n_orbitals, int n_electrons);

// Fermionic Givens rotation exp(theta (a^dag_j2 a_j1 - a^dag_j1 a_j2))
// between spin-orbitals of the SAME spin on adjacent spatial orbitals
// (p, p+1); Jordan-Wigner parity of the one in-between qubit is included.
void apply_spin_givens(Statevector& state, int orbital_p, bool beta, double theta);

// Spin-restricted rotation: the alpha and beta pairs share one angle.
void apply_givens(Statevector& state, int orbital_p, double theta);

// Four-qubit pair-exchange gate on the alpha/beta qubits of orbitals
// (p, p+1): identity except on span{|0011>, |1100>} (orbital p doubly
// occupied vs orbital p+1 doubly occupied) where it acts as
// [[c, -s], [s, c]] with c = cos(theta), s = sin(theta).
void apply_pair_exchange(Statevector& state, int orbital_p, double theta);

// Jordan-Wigner ladder operators; y += op x semantics.
void accumulate_annihilation(const Statevector& x, int qubit, Statevector& y, double scale);
void accumulate_creation(const Statevector& x, int qubit, Statevector& y, double scale);

// Spin-summed substitution E_pq = a^dag_{p,a} a_{q,a} + a^dag_{p,b} a_{q,b}.
Statevector apply_substitution(const Statevector& x, int p, int q);
// Same-spin substitution e^sigma_pq.
Statevector apply_spin_substitution(const Statevector& x, int p, int q, bool beta);

// Conversion between CI vectors (alpha-then-beta operator ordering) and the
// interleaved-qubit statevector, including the reordering parity.
Statevector statevector_from_ci(const CIVector& ci);
CIVector ci_from_statevector(const Statevector& state, int n_alpha, int n_beta);

SpinSummedRDMs rdms_from_statevector(const Statevector& state);

// <psi| H |psi> with the active-space Hamiltonian, by projecting onto the
// conserved particle-number sector and applying the string-CI sigma. Equals
// the RDM contraction; kept separate because it is much faster inside the
// optimizer loop.
double energy_expectation_fast(const Statevector& state, const EffectiveHamiltonian& heff);

// The contract-from-RDMs route: sum h*gamma + 1/2 v*Gamma + e_frozen.
double energy_expectation(const Statevector& state, const EffectiveHamiltonian& heff);

double s_squared(const Statevector& state);

} // namespace saptvqe
