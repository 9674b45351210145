#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "saptvqe/ansatz.hpp"
#include "saptvqe/lbfgs.hpp"

namespace saptvqe {

enum class GradientMode { CentralDifference, ParameterShift };
enum class VqeInit { Reference, Random };

struct VqeOptions {
    int layers = 1;
    double gradient_tolerance = 1e-6;
    int max_iterations = 1000;
    GradientMode gradient = GradientMode::CentralDifference;
    double fd_step = 1e-5;
    VqeInit init = VqeInit::Reference;
    std::uint64_t seed = 0;
    std::optional<Vector> initial_parameters; // overrides init when present
    std::optional<std::string> trace_csv_path;
    std::optional<std::string> checkpoint_path;
};

struct VqeResult {
    AnsatzParameters parameters;
    Statevector state;
    double energy = 0.0;
    bool converged = false;
    int iterations = 0;
    int n_evaluations = 0;
    std::vector<LbfgsTracePoint> trace;
};

double ansatz_energy(const EffectiveHamiltonian& heff, const AnsatzParameters& params);

Vector vqe_gradient_central(const EffectiveHamiltonian& heff, const AnsatzParameters& params,
                            double step = 1e-5);
// Exact gradient from the four-point shift rule applied per gate instance.
Vector vqe_gradient_parameter_shift(const EffectiveHamiltonian& heff,
                                    const AnsatzParameters& params);

VqeResult optimize_vqe(const EffectiveHamiltonian& heff, const VqeOptions& opts);

// Appendix-style electrostatic measurement plan: the partner potential W is
// diagonalized in the active MO basis and the active contribution read off
// one group of Z-basis expectations after an orbital-rotation circuit.
struct ElstMeasurementPlan {
    Matrix w_ao;
    Matrix w_active;
    Matrix eigenvectors; // columns U_s, det +1
    Vector eigenvalues;
    double core_offset = 0.0;    // tr(gamma_core W_ao)
    double nuclear_offset = 0.0; // supplied by the caller
};

std::pair<ElstMeasurementPlan, double> elst_measurement_plan(const Statevector& state,
                                                             const Matrix& w_ao,
                                                             const MOSpace& mos,
                                                             const ActivePartition& partition,
                                                             double nuclear_offset = 0.0);

} // namespace saptvqe
