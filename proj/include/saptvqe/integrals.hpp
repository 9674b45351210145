#pragma once

#include <Eigen/Dense>
#include <vector>

#include "saptvqe/basis.hpp"
#include "saptvqe/molecule.hpp"

namespace saptvqe {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Two-electron integrals (ij|kl) in chemists' notation. Within-pair
// permutation symmetry is always exploited; bra/ket exchange symmetry is
// exploited when both pairs live in the same basis (8-fold storage).
class ERITensor {
  public:
    ERITensor() = default;
    ERITensor(int n_bra, int n_ket, bool same_basis);

    double operator()(int i, int j, int k, int l) const {
        if (same_) {
            const std::size_t ij = pair_index(i, j), kl = pair_index(k, l);
            return data_[ij >= kl ? ij * (ij + 1) / 2 + kl : kl * (kl + 1) / 2 + ij];
        }
        return data_[pair_index(i, j) * npair_ket_ + pair_index(k, l)];
    }
    double& at(int i, int j, int k, int l) {
        if (same_) {
            const std::size_t ij = pair_index(i, j), kl = pair_index(k, l);
            return data_[ij >= kl ? ij * (ij + 1) / 2 + kl : kl * (kl + 1) / 2 + ij];
        }
        return data_[pair_index(i, j) * npair_ket_ + pair_index(k, l)];
    }

    int n_bra() const { return n_bra_; }
    int n_ket() const { return n_ket_; }
    bool same_basis() const { return same_; }

    // Coulomb and exchange contractions over plain ERIs. The density may
    // be non-symmetric; J[D]_xy = (xy|nn') D_nn', K[D]_xy = (xn'|ny) D_nn'.
    Matrix coulomb(const Matrix& density) const;
    Matrix exchange(const Matrix& density) const;

  private:
    static std::size_t pair_index(int i, int j) {
        return i >= j ? std::size_t(i) * (i + 1) / 2 + j : std::size_t(j) * (j + 1) / 2 + i;
    }
    int n_bra_ = 0, n_ket_ = 0;
    std::size_t npair_ket_ = 0;
    bool same_ = true;
    std::vector<double> data_;
};

// One-electron builds; X and Y may be different bases sharing a frame.
Matrix overlap_matrix(const GaussianBasis& bx, const GaussianBasis& by);
Matrix kinetic_matrix(const GaussianBasis& bx, const GaussianBasis& by);
// Sum over the supplied nuclei of -Z <x| 1/|r-R| |y>.
Matrix nuclear_attraction_matrix(const GaussianBasis& bx, const GaussianBasis& by,
                                 const std::vector<Atom>& nuclei);

// (xx'|yy') with the bra pair on X and the ket pair on Y.
ERITensor two_electron_integrals(const GaussianBasis& bx, const GaussianBasis& by);

// Per-monomer and cross blocks used throughout.
struct IntegralSet {
    Matrix s_a, s_b;       // intra-monomer overlaps
    Matrix s_cross;        // <A|B>, M_A x M_B
    Matrix h_a, h_b;       // kinetic + own-monomer attraction
    ERITensor eri_a, eri_b;
    ERITensor eri_cross;   // (aa'|bb')
    Matrix v_a_on_b;       // attraction to A's nuclei in B's basis
    Matrix v_b_on_a;       // attraction to B's nuclei in A's basis
    double v_ab = 0.0;     // A-B internuclear repulsion
};

IntegralSet build_integral_set(const DimerSystem& dimer, const GaussianBasis& basis_a,
                               const GaussianBasis& basis_b);

// Generalized two-electron integral over monomer MO/AO indices: the plain
// (pp'|qq') plus electron-nucleus and nucleus-nucleus terms weighted by
// 1/N_A, 1/N_B. p,p' index A's basis, q,q' index B's.
double generalized_eri(const DimerSystem& dimer, const IntegralSet& ints, int p, int pp, int q,
                       int qq);

// Dimer-level (union basis) matrices and ERIs for the exchange machinery.
struct DimerWorkspace {
    GaussianBasis basis;  // A's shells then B's
    int n_a = 0, n_b = 0; // AO counts per monomer
    int nel_a = 0, nel_b = 0;
    Matrix s;      // union overlap
    Matrix v_nuc_a; // attraction to A's nuclei over the union basis
    Matrix v_nuc_b;
    ERITensor eri; // union-basis ERIs
    double v_ab = 0.0;

    // Generalized Coulomb/exchange builds over union-basis densities.
    // "output_first" selects which electron of the interaction operator
    // the output pair stands for (the other is contracted with density).
    Matrix gen_coulomb(const Matrix& density, bool output_first) const;
    Matrix gen_exchange(const Matrix& density) const;
};

DimerWorkspace build_dimer_workspace(const DimerSystem& dimer, const GaussianBasis& basis_a,
                                     const GaussianBasis& basis_b);

} // namespace saptvqe
