#include "saptvqe/ansatz.hpp"

#include <cmath>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

namespace saptvqe {

std::vector<int> fabric_pair_order(int n) {
    // Givens-QR elimination order: column by column, bottom row upward.
    std::vector<int> pairs;
    for (int j = 0; j < n - 1; ++j)
        for (int i = n - 1; i > j; --i) pairs.push_back(i - 1);
    return pairs;
}

std::vector<int> pair_exchange_order(int n) {
    std::vector<int> placements;
    for (int col = 0; col < n; ++col)
        for (int p = col % 2; p + 1 < n; p += 2) placements.push_back(p);
    return placements;
}

Matrix orbital_rotation_from_generator(const Matrix& kappa) {
    if ((kappa + kappa.transpose()).cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("rotation generator must be antisymmetric");
    return kappa.exp();
}

std::vector<double> fabric_angles_from_rotation(const Matrix& u) {
    const int n = static_cast<int>(u.rows());
    if ((u * u.transpose() - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-10 ||
        u.determinant() < 0.0)
        throw std::invalid_argument("fabric decomposition requires a special orthogonal matrix");
    Matrix a = u;
    std::vector<double> angles;
    angles.reserve(std::size_t(n) * (n - 1) / 2);
    for (int j = 0; j < n - 1; ++j) {
        for (int i = n - 1; i > j; --i) {
            const double cv = a(i - 1, j), sv = a(i, j);
            const double r = std::hypot(cv, sv);
            double theta = 0.0;
            if (r > 1e-300) {
                theta = std::atan2(sv, cv);
                const double c = cv / r, s = sv / r;
                for (int col = 0; col < n; ++col) {
                    const double t1 = a(i - 1, col), t2 = a(i, col);
                    a(i - 1, col) = c * t1 + s * t2;
                    a(i, col) = -s * t1 + c * t2;
                }
            }
            angles.push_back(theta);
        }
    }
    return angles;
}

void apply_fabric(Statevector& state, const std::vector<double>& angles, bool inverse) {
    const int n = state.n_orbitals();
    const std::vector<int> pairs = fabric_pair_order(n);
    if (angles.size() != pairs.size())
        throw std::invalid_argument("fabric angle count does not match the layout");
    if (!inverse) {
        // product U = G_1 ... G_m: rightmost factor acts first
        for (std::size_t k = pairs.size(); k-- > 0;)
            if (angles[k] != 0.0) apply_givens(state, pairs[k], angles[k]);
    } else {
        for (std::size_t k = 0; k < pairs.size(); ++k)
            if (angles[k] != 0.0) apply_givens(state, pairs[k], -angles[k]);
    }
}

int AnsatzParameters::n_parameters() const {
    int total = 0;
    for (const auto& layer : layers)
        total += static_cast<int>(layer.rotation_angles.size() + layer.pair_angles.size());
    return total;
}

Vector AnsatzParameters::flatten() const {
    Vector x(n_parameters());
    int k = 0;
    for (const auto& layer : layers) {
        for (double v : layer.rotation_angles) x[k++] = v;
        for (double v : layer.pair_angles) x[k++] = v;
    }
    return x;
}

AnsatzParameters AnsatzParameters::unflatten(const Vector& x, int n_orbitals, int n_layers) {
    const int per = n_orbitals * (n_orbitals - 1) / 2;
    if (x.size() != std::size_t(2) * per * n_layers)
        throw std::invalid_argument("parameter vector has the wrong length");
    AnsatzParameters p;
    p.n_orbitals = n_orbitals;
    p.layers.resize(n_layers);
    int k = 0;
    for (auto& layer : p.layers) {
        layer.rotation_angles.resize(per);
        layer.pair_angles.resize(per);
        for (double& v : layer.rotation_angles) v = x[k++];
        for (double& v : layer.pair_angles) v = x[k++];
    }
    return p;
}

AnsatzParameters AnsatzParameters::zeros(int n_orbitals, int n_layers) {
    const int per = n_orbitals * (n_orbitals - 1) / 2;
    AnsatzParameters p;
    p.n_orbitals = n_orbitals;
    p.layers.resize(n_layers);
    for (auto& layer : p.layers) {
        layer.rotation_angles.assign(per, 0.0);
        layer.pair_angles.assign(per, 0.0);
    }
    return p;
}

namespace {

// Fabric application with an optional local-angle shift on one gate
// instance (one spin of one Givens position).
void apply_fabric_shifted(Statevector& state, const std::vector<double>& angles, bool inverse,
                          int shift_index, int shift_spin, double delta) {
    const int n = state.n_orbitals();
    const std::vector<int> pairs = fabric_pair_order(n);
    auto gate = [&](std::size_t k) {
        const double base = inverse ? -angles[k] : angles[k];
        const double da = (static_cast<int>(k) == shift_index && shift_spin == 0) ? delta : 0.0;
        const double db = (static_cast<int>(k) == shift_index && shift_spin == 1) ? delta : 0.0;
        if (base + da != 0.0) apply_spin_givens(state, pairs[k], false, base + da);
        if (base + db != 0.0) apply_spin_givens(state, pairs[k], true, base + db);
    };
    if (!inverse) {
        for (std::size_t k = pairs.size(); k-- > 0;) gate(k);
    } else {
        for (std::size_t k = 0; k < pairs.size(); ++k) gate(k);
    }
}

} // namespace

Statevector apply_ansatz(const AnsatzParameters& params, const Statevector& reference,
                         const AnsatzGateShift* shift) {
    using Kind = AnsatzGateShift::Kind;
    Statevector state = reference;
    const std::vector<int> placements = pair_exchange_order(params.n_orbitals);
    for (std::size_t l = 0; l < params.layers.size(); ++l) {
        const auto& layer = params.layers[l];
        if (layer.pair_angles.size() != placements.size())
            throw std::invalid_argument("pair-exchange angle count does not match the layout");
        const bool here = shift && shift->layer == static_cast<int>(l);
        auto fabric = [&](bool inverse, Kind alpha_kind, Kind beta_kind) {
            int idx = -1, spin = -1;
            if (here && shift->kind == alpha_kind) {
                idx = shift->index;
                spin = 0;
            } else if (here && shift->kind == beta_kind) {
                idx = shift->index;
                spin = 1;
            }
            apply_fabric_shifted(state, layer.rotation_angles, inverse, idx, spin,
                                 shift ? shift->delta : 0.0);
        };
        fabric(false, Kind::RotationForwardAlpha, Kind::RotationForwardBeta); // exp(+K)
        for (std::size_t k = 0; k < placements.size(); ++k) {
            double angle = layer.pair_angles[k];
            if (here && shift->kind == Kind::PairExchange && shift->index == static_cast<int>(k))
                angle += shift->delta;
            if (angle != 0.0) apply_pair_exchange(state, placements[k], angle);
        }
        fabric(true, Kind::RotationInverseAlpha, Kind::RotationInverseBeta); // exp(-K)
    }
    return state;
}

} // namespace saptvqe
