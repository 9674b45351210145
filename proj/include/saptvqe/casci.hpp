#pragma once

#include <memory>

#include "saptvqe/active_space.hpp"
#include "saptvqe/determinants.hpp"

namespace saptvqe {

// CI vector over (alpha string, beta string) determinant pairs in the
// M_s = 0 sector; amplitude index = ia * n_beta_strings + ib.
struct CIVector {
    std::shared_ptr<const StringSpace> alpha;
    std::shared_ptr<const StringSpace> beta;
    Vector amplitudes;

    int n_alpha() const { return alpha->size(); }
    int n_beta() const { return beta->size(); }
};

// Spin-summed reduced density matrices of the active space, stored in
// chemists' index order: two_particle(p,q,r,s) contracts with (pq|rs).
struct SpinSummedRDMs {
    Matrix one_particle; // gamma(p,q) = <E_pq>
    ActiveERI two_particle;

    int n() const { return static_cast<int>(one_particle.rows()); }
};

struct CasciOptions {
    // Dense diagonalization below this dimension, Davidson above.
    int dense_threshold = 10000;
    int davidson_max_subspace = 20;
    double davidson_tolerance = 1e-10;
    int davidson_max_iterations = 200;
};

struct CasciResult {
    double energy = 0.0; // eigenvalue + frozen-core energy
    CIVector ground_state;
    double s_squared = 0.0;
};

// Sigma vector: y = H x with H the active-space Hamiltonian (one-electron
// matrix h, chemist ERIs v), excluding the scalar e_frozen.
Vector apply_hamiltonian(const CIVector& basis_shape, const Vector& x, const Matrix& h,
                         const ActiveERI& v);

CasciResult casci_ground_state(const EffectiveHamiltonian& heff, const CasciOptions& opts = {});

SpinSummedRDMs rdms_from_ci(const CIVector& ci);

// <S^2> via |S+ psi|^2 (valid in the M_s = 0 sector).
double s_squared(const CIVector& ci);

// Energy reconstructed from RDMs: sum h*gamma + 1/2 sum v*Gamma + e_frozen.
double energy_from_rdms(const EffectiveHamiltonian& heff, const SpinSummedRDMs& rdms);

// The closed-shell reference determinant (lowest n/2 orbitals) as a CI vector.
CIVector reference_determinant(int n_orbitals, int n_electrons);

} // namespace saptvqe
