#pragma once

#include <vector>

#include "saptvqe/statevector.hpp"

namespace saptvqe {

// Orbital-rotation fabric: a fixed sequence of adjacent-pair Givens
// rotations, n(n-1)/2 of them, ordered so that Givens QR can realize any
// SO(n) matrix exactly. Entry k holds the lower orbital index of pair k.
std::vector<int> fabric_pair_order(int n_orbitals);

// Diagonal pair-double placements of one entangler layer: lower orbital
// index of each pair-exchange gate, enumerated column by column with
// alternating parity; n(n-1)/2 placements.
std::vector<int> pair_exchange_order(int n_orbitals);

// Angles (fabric order) whose gate product implements the one-particle
// rotation U exactly; U must be special orthogonal.
std::vector<double> fabric_angles_from_rotation(const Matrix& u);

// exp(kappa) for a real antisymmetric matrix.
Matrix orbital_rotation_from_generator(const Matrix& kappa);

// Applies the Givens fabric. Gates run in fabric order with the convention
// that the induced one-particle map is U = G_last ... G_first where
// G_k = [[c, -s], [s, c]] on rows/cols (p_k, p_k+1). `inverse` runs the
// adjoint (reversed order, negated angles).
void apply_fabric(Statevector& state, const std::vector<double>& angles, bool inverse = false);

// One entangler layer per the cluster-Jastrow form
// exp(-K) exp(T) exp(+K): forward fabric, pair-exchange column sweep,
// inverse fabric.
struct AnsatzLayer {
    std::vector<double> rotation_angles; // fabric order, n(n-1)/2
    std::vector<double> pair_angles;     // pair-exchange order, n(n-1)/2
};

struct AnsatzParameters {
    int n_orbitals = 0;
    std::vector<AnsatzLayer> layers;

    int n_parameters() const;
    Vector flatten() const;
    static AnsatzParameters unflatten(const Vector& x, int n_orbitals, int n_layers);
    static AnsatzParameters zeros(int n_orbitals, int n_layers);
};

// One gate instance inside the circuit, addressed for parameter-shift
// differentiation; `delta` is added to that instance's local angle.
struct AnsatzGateShift {
    enum class Kind {
        RotationForwardAlpha,
        RotationForwardBeta,
        RotationInverseAlpha,
        RotationInverseBeta,
        PairExchange,
    };
    int layer = 0;
    Kind kind = Kind::PairExchange;
    int index = 0; // position within the fabric / pair-exchange order
    double delta = 0.0;
};

// |state> = prod_k exp(-K_k) exp(T_k) exp(+K_k) |reference>.
Statevector apply_ansatz(const AnsatzParameters& params, const Statevector& reference,
                         const AnsatzGateShift* shift = nullptr);

} // namespace saptvqe
