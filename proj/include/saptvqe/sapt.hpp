#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "saptvqe/casci.hpp"
#include "saptvqe/vqe.hpp"

namespace saptvqe {

// One monomer prepared for SAPT: orbitals, core/active partition, and the
// active-space spin-summed RDMs. A mean-field monomer carries an empty
// active set; the same evaluation path then reduces to SAPT(RHF).
struct MonomerState {
    MOSpace mos;
    ActivePartition partition;
    SpinSummedRDMs rdms; // active block; size n_active (may be 0)
    std::string source;  // "RHF", "CASCI", "VQE(k=N)"

    Matrix total_density_ao() const;  // core + active, monomer AO basis
    Matrix core_density() const { return core_density_ao(mos, partition); }
    Matrix active_density() const;
};

MonomerState monomer_state_from_rhf(const RhfResult& rhf);
MonomerState monomer_state_from_rdms(const MOSpace& mos, const ActivePartition& partition,
                                     const SpinSummedRDMs& rdms, std::string source);

// Throws if the state's density does not carry the molecule's electrons.
void validate_monomer_state(const MonomerState& state, const Matrix& s_monomer,
                            int n_electrons);

struct ExchangeBreakdown {
    double t1 = 0, t2 = 0, t3 = 0, t4 = 0, t5 = 0;
    double total() const { return t1 + t2 + t3 + t4 + t5; }
};

// First-order electrostatic energy (all four interaction-operator pieces).
double e_pol1(const MonomerState& a, const MonomerState& b, const DimerWorkspace& w);

// First-order exchange energy in the S^2 approximation, with the
// core/active factorized evaluation.
std::pair<double, ExchangeBreakdown> e_exch1(const MonomerState& a, const MonomerState& b,
                                             const DimerWorkspace& w);

// Literal full-space contraction of the exchange expression over the
// combined monomer MO sets; test oracle for the factorized path. The mask
// selects which density-matrix blocks enter (bit 0: mean-field of the total
// density, bit 1: subtract mean-field of the active block, bit 2: add the
// correlated active tensor); pass 7 for the physical result.
std::pair<double, ExchangeBreakdown> naive_exch1_oracle(const MonomerState& a,
                                                        const MonomerState& b,
                                                        const DimerWorkspace& w,
                                                        int block_mask_a = 7,
                                                        int block_mask_b = 7);

double naive_pol1_oracle(const MonomerState& a, const MonomerState& b, const DimerWorkspace& w);

// Full measurement-plan pipeline for monomer A's active statevector: the
// partner potential image, its eigenbasis circuit, and the classical
// offsets; returns the plan and the assembled electrostatic energy.
std::pair<ElstMeasurementPlan, double> electrostatic_plan_energy(const Statevector& state_a,
                                                                 const MonomerState& a,
                                                                 const MonomerState& b,
                                                                 const DimerWorkspace& w);

// ---- batch driver ----------------------------------------------------

struct MethodSpec {
    enum class Kind { Rhf, Casci, Vqe } kind = Kind::Rhf;
    int n_below = 2, n_above = 2;
    int layers = 1;
    double gradient_tolerance = 1e-6;
    int max_iterations = 1000;
    VqeInit init = VqeInit::Reference;
    std::uint64_t seed = 0;
};

struct SaptJob {
    DimerSystem dimer;
    GaussianBasis basis_a, basis_b;
    std::string basis_name;
    MethodSpec method_a, method_b;
    bool run_supermolecular = false;
    bool run_naive_oracle = false;
    bool run_measurement_plan = false;
};

struct SAPTReport {
    double e_pol1 = 0.0;
    double e_exch1 = 0.0;
    ExchangeBreakdown terms;
    std::string source_a, source_b;
    std::string basis_name;
    std::uint64_t geometry_hash = 0;
    double monomer_energy_a = 0.0, monomer_energy_b = 0.0; // RHF or correlated totals
    double scf_energy_a = 0.0, scf_energy_b = 0.0;
    int vqe_iterations_a = 0, vqe_iterations_b = 0;
    double vqe_gradient_a = 0.0, vqe_gradient_b = 0.0;
    std::optional<double> supermolecular_interaction;
    std::optional<double> naive_exchange;
    std::optional<double> measurement_plan_energy;
    double seconds_total = 0.0;
    double seconds_integrals = 0.0;
    double seconds_monomers = 0.0;
};

std::uint64_t geometry_hash(const DimerSystem& dimer);

SAPTReport run_sapt(const SaptJob& job);

} // namespace saptvqe
