#include "saptvqe/casci.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace saptvqe {

namespace {

// Apply the one-spin substitution e_pq to x for the given spin channel.
// Alpha moves act on row blocks, beta moves on column strides.
void accumulate_spin_move(const CIVector& shape, const Vector& x, Vector& y, int p, int q,
                          double scale, bool alpha) {
    const int nb = shape.n_beta();
    if (alpha) {
        for (const auto& mv : shape.alpha->moves(p, q))
            y.segment(std::size_t(mv.to) * nb, nb) +=
                scale * mv.sign * x.segment(std::size_t(mv.from) * nb, nb);
    } else {
        const int na = shape.n_alpha();
        for (const auto& mv : shape.beta->moves(p, q))
            for (int ia = 0; ia < na; ++ia)
                y[std::size_t(ia) * nb + mv.to] += scale * mv.sign * x[std::size_t(ia) * nb + mv.from];
    }
}

Vector apply_epq(const CIVector& shape, const Vector& x, int p, int q) {
    Vector y = Vector::Zero(x.size());
    accumulate_spin_move(shape, x, y, p, q, 1.0, true);
    accumulate_spin_move(shape, x, y, p, q, 1.0, false);
    return y;
}

double diagonal_element(std::uint32_t a, std::uint32_t b, const Matrix& h, const ActiveERI& v) {
    double e = 0.0;
    const int n = static_cast<int>(h.rows());
    for (int p = 0; p < n; ++p) {
        const bool pa = a >> p & 1, pb = b >> p & 1;
        if (pa) e += h(p, p);
        if (pb) e += h(p, p);
        for (int q = 0; q < n; ++q) {
            const bool qa = a >> q & 1, qb = b >> q & 1;
            if (pa && qa) e += 0.5 * (v(p, p, q, q) - v(p, q, q, p));
            if (pb && qb) e += 0.5 * (v(p, p, q, q) - v(p, q, q, p));
            if (pa && qb) e += v(p, p, q, q);
        }
    }
    return e;
}

} // namespace

Vector apply_hamiltonian(const CIVector& shape, const Vector& x, const Matrix& h,
                         const ActiveERI& v) {
    const int n = static_cast<int>(h.rows());
    // effective one-electron part k_pq = h_pq - 1/2 sum_r (pr|rq)
    Matrix k = h;
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
            double corr = 0.0;
            for (int r = 0; r < n; ++r) corr += v(p, r, r, q);
            k(p, q) -= 0.5 * corr;
        }
    Vector y = Vector::Zero(x.size());
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
            if (k(p, q) != 0.0) {
                accumulate_spin_move(shape, x, y, p, q, k(p, q), true);
                accumulate_spin_move(shape, x, y, p, q, k(p, q), false);
            }
        }
    // two-electron part: 1/2 sum (pq|rs) E_pq E_rs
    for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
            const Vector t = apply_epq(shape, x, r, s);
            Vector g = Vector::Zero(x.size());
            bool any = false;
            for (int p = 0; p < n; ++p)
                for (int q = 0; q < n; ++q) {
                    const double c = v(p, q, r, s);
                    if (c == 0.0) continue;
                    accumulate_spin_move(shape, t, g, p, q, 0.5 * c, true);
                    accumulate_spin_move(shape, t, g, p, q, 0.5 * c, false);
                    any = true;
                }
            if (any) y += g;
        }
    return y;
}

CIVector reference_determinant(int n_orbitals, int n_electrons) {
    if (n_electrons % 2 != 0)
        throw std::invalid_argument("reference determinant requires an even electron count");
    CIVector ci;
    ci.alpha = std::make_shared<StringSpace>(n_orbitals, n_electrons / 2);
    ci.beta = ci.alpha;
    ci.amplitudes = Vector::Zero(std::size_t(ci.alpha->size()) * ci.beta->size());
    const std::uint32_t occ = (std::uint32_t(1) << (n_electrons / 2)) - 1;
    const int i0 = ci.alpha->index_of(occ);
    ci.amplitudes[std::size_t(i0) * ci.beta->size() + i0] = 1.0;
    return ci;
}

CasciResult casci_ground_state(const EffectiveHamiltonian& heff, const CasciOptions& opts) {
    const int n = static_cast<int>(heff.h.rows());
    const int nel = heff.n_active_electrons;
    if (nel % 2 != 0) throw std::invalid_argument("only singlet (M_s = 0) sectors are supported");

    CIVector ci = reference_determinant(n, nel);
    const std::size_t dim = ci.amplitudes.size();
    if (dim > std::size_t(1e7))
        throw std::runtime_error("CI dimension " + std::to_string(dim) + " exceeds the 1e7 cap");

    CasciResult result;
    if (dim <= std::size_t(opts.dense_threshold)) {
        Matrix hmat(dim, dim);
        Vector unit = Vector::Zero(dim);
        for (std::size_t j = 0; j < dim; ++j) {
            unit[j] = 1.0;
            hmat.col(j) = apply_hamiltonian(ci, unit, heff.h, heff.eri);
            unit[j] = 0.0;
        }
        Eigen::SelfAdjointEigenSolver<Matrix> es(hmat);
        result.energy = es.eigenvalues()(0) + heff.e_frozen;
        ci.amplitudes = es.eigenvectors().col(0);
    } else {
        // Davidson with a unit seed on the reference determinant
        Vector diag(dim);
        {
            const int nb = ci.n_beta();
            for (int ia = 0; ia < ci.n_alpha(); ++ia)
                for (int ib = 0; ib < nb; ++ib)
                    diag[std::size_t(ia) * nb + ib] =
                        diagonal_element(ci.alpha->string(ia), ci.beta->string(ib), heff.h,
                                         heff.eri);
        }
        std::vector<Vector> basis, sigma;
        Vector b0 = ci.amplitudes;
        double theta = 0.0;
        Vector ritz = b0;
        bool converged = false;
        for (int iter = 0; iter < opts.davidson_max_iterations && !converged; ++iter) {
            // orthonormalize b0 against the subspace
            for (const auto& b : basis) b0 -= b.dot(b0) * b;
            const double norm = b0.norm();
            if (norm < 1e-12) break;
            b0 /= norm;
            basis.push_back(b0);
            sigma.push_back(apply_hamiltonian(ci, b0, heff.h, heff.eri));
            const int k = static_cast<int>(basis.size());
            Matrix hk(k, k);
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j) hk(i, j) = basis[i].dot(sigma[j]);
            Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (hk + hk.transpose()));
            theta = es.eigenvalues()(0);
            const Vector y = es.eigenvectors().col(0);
            ritz = Vector::Zero(dim);
            Vector hritz = Vector::Zero(dim);
            for (int i = 0; i < k; ++i) {
                ritz += y(i) * basis[i];
                hritz += y(i) * sigma[i];
            }
            const Vector residual = hritz - theta * ritz;
            if (residual.norm() < opts.davidson_tolerance) {
                converged = true;
                break;
            }
            if (k >= opts.davidson_max_subspace) { // restart from the Ritz vector
                basis.clear();
                sigma.clear();
                b0 = ritz;
                continue;
            }
            b0 = residual;
            for (std::size_t j = 0; j < dim; ++j) {
                const double denom = diag[j] - theta;
                b0[j] /= (std::abs(denom) > 1e-8 ? denom : std::copysign(1e-8, denom));
            }
        }
        if (!converged) throw std::runtime_error("Davidson did not converge");
        result.energy = theta + heff.e_frozen;
        ci.amplitudes = ritz / ritz.norm();
    }
    // fix the global sign for determinism: largest amplitude positive
    int imax = 0;
    ci.amplitudes.cwiseAbs().maxCoeff(&imax);
    if (ci.amplitudes[imax] < 0) ci.amplitudes = -ci.amplitudes;
    result.ground_state = ci;
    result.s_squared = s_squared(ci);
    return result;
}

SpinSummedRDMs rdms_from_ci(const CIVector& ci) {
    const int n = ci.alpha->n_orbitals();
    SpinSummedRDMs rdms;
    rdms.one_particle = Matrix::Zero(n, n);
    rdms.two_particle = ActiveERI(n);
    std::vector<Vector> t(std::size_t(n) * n);
    for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
            t[std::size_t(r) * n + s] = apply_epq(ci, ci.amplitudes, r, s);
            rdms.one_particle(r, s) = ci.amplitudes.dot(t[std::size_t(r) * n + s]);
        }
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
            for (int r = 0; r < n; ++r)
                for (int s = 0; s < n; ++s) {
                    double val = t[std::size_t(q) * n + p].dot(t[std::size_t(r) * n + s]);
                    if (q == r) val -= rdms.one_particle(p, s);
                    rdms.two_particle.at(p, q, r, s) = val;
                }
    return rdms;
}

double s_squared(const CIVector& ci) {
    const int n = ci.alpha->n_orbitals();
    const int nb = ci.beta->n_electrons();
    // <S^2> = n_beta - sum_rs <e^beta_rs psi, e^alpha_rs psi> at M_s = 0
    double acc = 0.0;
    for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
            Vector ta = Vector::Zero(ci.amplitudes.size());
            Vector tb = Vector::Zero(ci.amplitudes.size());
            accumulate_spin_move(ci, ci.amplitudes, ta, r, s, 1.0, true);
            accumulate_spin_move(ci, ci.amplitudes, tb, r, s, 1.0, false);
            acc += tb.dot(ta);
        }
    return nb - acc;
}

double energy_from_rdms(const EffectiveHamiltonian& heff, const SpinSummedRDMs& rdms) {
    const int n = rdms.n();
    double e = heff.e_frozen + heff.h.cwiseProduct(rdms.one_particle).sum();
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
            for (int r = 0; r < n; ++r)
                for (int s = 0; s < n; ++s)
                    e += 0.5 * heff.eri(p, q, r, s) * rdms.two_particle(p, q, r, s);
    return e;
}

} // namespace saptvqe
