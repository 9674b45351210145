#include "saptvqe/vqe.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

namespace saptvqe {

namespace {

Statevector reference_for(const EffectiveHamiltonian& heff) {
    return reference_statevector(static_cast<int>(heff.h.rows()), heff.n_active_electrons);
}

double shifted_energy(const EffectiveHamiltonian& heff, const AnsatzParameters& params,
                      const Statevector& ref, const AnsatzGateShift& shift) {
    const Statevector state = apply_ansatz(params, ref, &shift);
    return energy_expectation_fast(state, heff);
}

// d/d(angle) of one gate instance via the exact four-point rule for
// rotation generators with eigenvalues {0, +-i}.
double instance_gradient(const EffectiveHamiltonian& heff, const AnsatzParameters& params,
                         const Statevector& ref, AnsatzGateShift shift) {
    const double quarter = std::numbers::pi / 4.0;
    const double half = std::numbers::pi / 2.0;
    shift.delta = quarter;
    const double ep4 = shifted_energy(heff, params, ref, shift);
    shift.delta = -quarter;
    const double em4 = shifted_energy(heff, params, ref, shift);
    shift.delta = half;
    const double ep2 = shifted_energy(heff, params, ref, shift);
    shift.delta = -half;
    const double em2 = shifted_energy(heff, params, ref, shift);
    return (ep4 - em4) + 0.5 * (1.0 - std::numbers::sqrt2) * (ep2 - em2);
}

} // namespace

double ansatz_energy(const EffectiveHamiltonian& heff, const AnsatzParameters& params) {
    const Statevector state = apply_ansatz(params, reference_for(heff));
    return energy_expectation_fast(state, heff);
}

Vector vqe_gradient_central(const EffectiveHamiltonian& heff, const AnsatzParameters& params,
                            double step) {
    const Vector x = params.flatten();
    const int n_layers = static_cast<int>(params.layers.size());
    Vector g(x.size());
    for (int i = 0; i < x.size(); ++i) {
        Vector xp = x, xm = x;
        xp[i] += step;
        xm[i] -= step;
        const double ep =
            ansatz_energy(heff, AnsatzParameters::unflatten(xp, params.n_orbitals, n_layers));
        const double em =
            ansatz_energy(heff, AnsatzParameters::unflatten(xm, params.n_orbitals, n_layers));
        g[i] = (ep - em) / (2.0 * step);
    }
    return g;
}

Vector vqe_gradient_parameter_shift(const EffectiveHamiltonian& heff,
                                    const AnsatzParameters& params) {
    using Kind = AnsatzGateShift::Kind;
    const Statevector ref = reference_for(heff);
    const int per = params.n_orbitals * (params.n_orbitals - 1) / 2;
    Vector g = Vector::Zero(params.n_parameters());
    int base = 0;
    for (std::size_t l = 0; l < params.layers.size(); ++l) {
        const int layer = static_cast<int>(l);
        for (int k = 0; k < per; ++k) {
            double acc = 0.0;
            // the shared angle enters the forward fabric in both spins (+)
            // and the inverse fabric negated (-)
            acc += instance_gradient(heff, params, ref,
                                     {layer, Kind::RotationForwardAlpha, k, 0.0});
            acc += instance_gradient(heff, params, ref,
                                     {layer, Kind::RotationForwardBeta, k, 0.0});
            acc -= instance_gradient(heff, params, ref,
                                     {layer, Kind::RotationInverseAlpha, k, 0.0});
            acc -= instance_gradient(heff, params, ref,
                                     {layer, Kind::RotationInverseBeta, k, 0.0});
            g[base + k] = acc;
        }
        for (int k = 0; k < per; ++k)
            g[base + per + k] =
                instance_gradient(heff, params, ref, {layer, Kind::PairExchange, k, 0.0});
        base += 2 * per;
    }
    return g;
}

VqeResult optimize_vqe(const EffectiveHamiltonian& heff, const VqeOptions& opts) {
    const int n_orb = static_cast<int>(heff.h.rows());
    if (opts.layers < 1) throw std::invalid_argument("at least one ansatz layer is required");
    const int per = n_orb * (n_orb - 1) / 2;
    const int n_params = 2 * per * opts.layers;

    Vector x0;
    if (opts.initial_parameters) {
        x0 = *opts.initial_parameters;
        if (x0.size() != n_params)
            throw std::invalid_argument("initial parameter vector has the wrong length");
    } else if (opts.init == VqeInit::Random) {
        std::mt19937_64 rng(opts.seed);
        std::uniform_real_distribution<double> dist(-0.1, 0.1);
        x0 = Vector::Zero(n_params);
        for (int i = 0; i < n_params; ++i) x0[i] = dist(rng);
    } else {
        x0 = Vector::Zero(n_params);
    }

    const Statevector ref = reference_for(heff);
    int eval_count = 0;
    auto objective = [&](const Vector& x, Vector& grad) {
        const AnsatzParameters p = AnsatzParameters::unflatten(x, n_orb, opts.layers);
        ++eval_count;
        if (opts.gradient == GradientMode::ParameterShift) {
            grad = vqe_gradient_parameter_shift(heff, p);
        } else {
            grad = vqe_gradient_central(heff, p, opts.fd_step);
        }
        return energy_expectation_fast(apply_ansatz(p, ref), heff);
    };

    LbfgsOptions lopts;
    lopts.max_iterations = opts.max_iterations;
    lopts.gradient_tolerance = opts.gradient_tolerance;
    const LbfgsResult lres = lbfgs_minimize(objective, x0, lopts);

    VqeResult result;
    result.parameters = AnsatzParameters::unflatten(lres.x, n_orb, opts.layers);
    result.state = apply_ansatz(result.parameters, ref);
    result.energy = lres.value;
    result.converged = lres.converged;
    result.iterations = lres.iterations;
    result.n_evaluations = eval_count;
    result.trace = lres.trace;

    if (opts.trace_csv_path) {
        std::ofstream out(*opts.trace_csv_path);
        out << "iteration,energy,gradient_norm\n";
        out.precision(15);
        for (const auto& pt : result.trace)
            out << pt.iteration << "," << pt.value << "," << pt.gradient_norm << "\n";
    }
    if (opts.checkpoint_path) {
        std::ofstream out(*opts.checkpoint_path);
        out.precision(17);
        out << "# layer gate_id angle\n";
        for (std::size_t l = 0; l < result.parameters.layers.size(); ++l) {
            const auto& layer = result.parameters.layers[l];
            for (std::size_t k = 0; k < layer.rotation_angles.size(); ++k)
                out << l << " rot" << k << " " << layer.rotation_angles[k] << "\n";
            for (std::size_t k = 0; k < layer.pair_angles.size(); ++k)
                out << l << " pair" << k << " " << layer.pair_angles[k] << "\n";
        }
    }
    return result;
}

std::pair<ElstMeasurementPlan, double> elst_measurement_plan(const Statevector& state,
                                                             const Matrix& w_ao,
                                                             const MOSpace& mos,
                                                             const ActivePartition& partition,
                                                             double nuclear_offset) {
    ElstMeasurementPlan plan;
    plan.w_ao = w_ao;
    plan.nuclear_offset = nuclear_offset;
    plan.core_offset = core_density_ao(mos, partition).cwiseProduct(w_ao).sum();

    const int na = partition.n_active();
    Matrix c_act(mos.coefficients.rows(), na);
    for (int t = 0; t < na; ++t) c_act.col(t) = mos.coefficients.col(partition.active[t]);
    plan.w_active = c_act.transpose() * w_ao * c_act;

    Matrix offdiag = plan.w_active;
    offdiag.diagonal().setZero();
    if (offdiag.cwiseAbs().maxCoeff() < 1e-14) {
        plan.eigenvectors = Matrix::Identity(na, na);
        plan.eigenvalues = plan.w_active.diagonal();
    } else {
        Eigen::SelfAdjointEigenSolver<Matrix> es(plan.w_active);
        plan.eigenvectors = es.eigenvectors();
        plan.eigenvalues = es.eigenvalues();
        if (plan.eigenvectors.determinant() < 0.0) plan.eigenvectors.col(0) *= -1.0;
    }

    // rotate so qubit s measures the occupation of potential eigenvector s:
    // the circuit must implement the single-particle map U^T
    Statevector rotated = state;
    const std::vector<double> angles =
        fabric_angles_from_rotation(plan.eigenvectors.transpose());
    apply_fabric(rotated, angles);
    double quantum = 0.0;
    for (int s = 0; s < na; ++s) {
        const double zsum = rotated.expectation_z(2 * s) + rotated.expectation_z(2 * s + 1);
        quantum += plan.eigenvalues[s] * (1.0 - 0.5 * zsum);
    }
    return {plan, quantum};
}

} // namespace saptvqe
