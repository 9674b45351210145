#include "saptvqe/scf.hpp"

#include <cmath>
#include <deque>
#include <fstream>

namespace saptvqe {

JKPair build_jk(const ERITensor& eri, const Matrix& density) {
    return {eri.coulomb(density), eri.exchange(density)};
}

namespace {

struct DiisState {
    std::deque<Matrix> focks;
    std::deque<Matrix> errors;
    int depth;

    explicit DiisState(int depth) : depth(depth) {}

    void push(const Matrix& f, const Matrix& e) {
        focks.push_back(f);
        errors.push_back(e);
        if (static_cast<int>(focks.size()) > depth) {
            focks.pop_front();
            errors.pop_front();
        }
    }

    // Pulay extrapolation; falls back to the raw Fock if the equations
    // are too ill-conditioned.
    Matrix extrapolate() const {
        const int n = static_cast<int>(focks.size());
        Matrix b = Matrix::Zero(n + 1, n + 1);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j <= i; ++j) {
                b(i, j) = b(j, i) = errors[i].cwiseProduct(errors[j]).sum();
            }
            b(i, n) = b(n, i) = -1.0;
        }
        Vector rhs = Vector::Zero(n + 1);
        rhs(n) = -1.0;
        Eigen::FullPivLU<Matrix> lu(b);
        if (!lu.isInvertible()) return focks.back();
        Vector c = lu.solve(rhs);
        if (!c.allFinite() || c.head(n).cwiseAbs().maxCoeff() > 1e6) return focks.back();
        Matrix f = Matrix::Zero(focks.back().rows(), focks.back().cols());
        for (int i = 0; i < n; ++i) f += c(i) * focks[i];
        return f;
    }
};

} // namespace

RhfResult rhf(const Matrix& s, const Matrix& h, const ERITensor& eri, int n_electrons,
              double v_nn, const RhfOptions& opts) {
    RhfResult result;
    const int m = static_cast<int>(s.rows());
    if (n_electrons == 0 || m == 0) {
        result.energy = v_nn;
        result.mos.coefficients = Matrix::Zero(m, 0);
        result.mos.orbital_energies = Vector::Zero(0);
        return result;
    }
    if (n_electrons % 2 != 0)
        throw std::invalid_argument("restricted SCF requires an even electron count");
    const int n_occ = n_electrons / 2;
    if (n_occ > m) throw std::invalid_argument("more electron pairs than basis functions");

    Eigen::SelfAdjointEigenSolver<Matrix> ses(s);
    const Vector sev = ses.eigenvalues();
    if (sev.minCoeff() <= 0.0 || sev.maxCoeff() / sev.minCoeff() > 1e10)
        throw ScfError("overlap matrix is numerically singular (condition number > 1e10)", 0.0,
                       0.0);
    result.overlap_condition = sev.maxCoeff() / sev.minCoeff();
    // symmetric orthogonalization with an eigenvalue floor
    std::vector<int> kept;
    for (int i = 0; i < m; ++i)
        if (sev(i) > 1e-8) kept.push_back(i);
    Matrix x(m, kept.size());
    for (std::size_t i = 0; i < kept.size(); ++i)
        x.col(i) = ses.eigenvectors().col(kept[i]) / std::sqrt(sev(kept[i]));

    std::ofstream trace;
    if (opts.trace_csv_path) {
        trace.open(*opts.trace_csv_path);
        trace << "iteration,energy,gradient\n";
    }

    Matrix f = h;
    Matrix d = Matrix::Zero(m, m);
    DiisState diis(opts.diis_depth);
    double energy = 0.0, grad = 0.0;
    for (int iter = 1; iter <= opts.max_iterations; ++iter) {
        Matrix fp = x.transpose() * f * x;
        Eigen::SelfAdjointEigenSolver<Matrix> fes(fp);
        Matrix c = x * fes.eigenvectors();
        d = 2.0 * c.leftCols(n_occ) * c.leftCols(n_occ).transpose();
        Matrix j = eri.coulomb(d);
        Matrix k = eri.exchange(d);
        f = h + j - 0.5 * k;
        energy = 0.5 * d.cwiseProduct(h + f).sum() + v_nn;
        const Matrix err = f * d * s - s * d * f;
        grad = err.cwiseAbs().maxCoeff();
        result.energy_trace.push_back(energy);
        result.gradient_trace.push_back(grad);
        result.iterations = iter;
        if (trace.is_open()) trace << iter << "," << energy << "," << grad << "\n";
        if (grad < opts.convergence) {
            result.energy = energy;
            result.mos.coefficients = c;
            result.mos.orbital_energies = fes.eigenvalues();
            result.mos.n_occupied = n_occ;
            return result;
        }
        if (iter >= 2) {
            diis.push(f, err);
            f = diis.extrapolate();
        }
    }
    throw ScfError("SCF failed to converge in " + std::to_string(opts.max_iterations) +
                       " iterations (last E = " + std::to_string(energy) +
                       ", |FDS-SDF| = " + std::to_string(grad) + ")",
                   energy, grad);
}

RhfResult rhf(const Molecule& molecule, const GaussianBasis& basis, const RhfOptions& opts) {
    const Matrix s = overlap_matrix(basis, basis);
    const Matrix h =
        kinetic_matrix(basis, basis) + nuclear_attraction_matrix(basis, basis, molecule.atoms);
    const ERITensor eri = two_electron_integrals(basis, basis);
    return rhf(s, h, eri, molecule.n_electrons(), molecule.nuclear_repulsion(), opts);
}

double supermolecular_interaction(const DimerSystem& dimer, const GaussianBasis& basis_a,
                                  const GaussianBasis& basis_b, const RhfOptions& opts) {
    Molecule combined = dimer.monomer_a;
    combined.net_charge += dimer.monomer_b.net_charge;
    combined.atoms.insert(combined.atoms.end(), dimer.monomer_b.atoms.begin(),
                          dimer.monomer_b.atoms.end());
    const GaussianBasis merged = merge_bases(basis_a, basis_b);
    const double e_ab = rhf(combined, merged, opts).energy;
    const double e_a = rhf(dimer.monomer_a, basis_a, opts).energy;
    const double e_b = rhf(dimer.monomer_b, basis_b, opts).energy;
    return e_ab - e_a - e_b;
}

} // namespace saptvqe
