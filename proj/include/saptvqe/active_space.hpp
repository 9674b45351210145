#pragma once

#include <string>
#include <vector>

#include "saptvqe/integrals.hpp"
#include "saptvqe/scf.hpp"

namespace saptvqe {

struct ActivePartition {
    std::vector<int> core;
    std::vector<int> active;
    std::vector<int> virtuals;
    int n_active_electrons = 0;

    int n_core() const { return static_cast<int>(core.size()); }
    int n_active() const { return static_cast<int>(active.size()); }
};

// Active window {HOMO-n_below ... LUMO+n_above} over canonical orbitals.
ActivePartition select_window(const MOSpace& mos, int n_below, int n_above);

// Dense 4-index active-space ERIs in chemists' notation.
class ActiveERI {
  public:
    ActiveERI() = default;
    explicit ActiveERI(int n) : n_(n), data_(std::size_t(n) * n * n * n, 0.0) {}
    double& at(int p, int q, int r, int s) {
        return data_[((std::size_t(p) * n_ + q) * n_ + r) * n_ + s];
    }
    double operator()(int p, int q, int r, int s) const {
        return data_[((std::size_t(p) * n_ + q) * n_ + r) * n_ + s];
    }
    int n() const { return n_; }

  private:
    int n_ = 0;
    std::vector<double> data_;
};

struct EffectiveHamiltonian {
    Matrix h;        // core-dressed one-electron integrals, active block
    ActiveERI eri;   // (tt'|uu') over active orbitals
    double e_frozen = 0.0; // core energy + nuclear repulsion
    int n_active_electrons = 0;
};

EffectiveHamiltonian build_effective_hamiltonian(const MOSpace& mos,
                                                 const ActivePartition& partition,
                                                 const Matrix& h_ao, const ERITensor& eri_ao,
                                                 double v_nn);

// FCIDUMP-style text export for cross-validation against external codes.
std::string fcidump_text(const EffectiveHamiltonian& heff);

// Spin-summed AO density of the core orbitals (trace against S = 2 N_c).
Matrix core_density_ao(const MOSpace& mos, const ActivePartition& partition);

// Spin-summed AO density of an active-space 1-RDM block.
Matrix active_density_ao(const MOSpace& mos, const ActivePartition& partition,
                         const Matrix& gamma_active);

} // namespace saptvqe
