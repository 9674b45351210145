#include "saptvqe/active_space.hpp"

#include <sstream>
#include <stdexcept>

namespace saptvqe {

ActivePartition select_window(const MOSpace& mos, int n_below, int n_above) {
    const int m = mos.n_orbitals();
    const int homo = mos.n_occupied - 1;
    const int lumo = mos.n_occupied;
    if (n_below < 0 || n_above < 0) throw std::invalid_argument("window extents must be >= 0");
    if (homo - n_below < 0)
        throw std::invalid_argument("window reaches below the lowest occupied orbital");
    if (lumo + n_above >= m)
        throw std::invalid_argument("window reaches beyond the highest virtual orbital");
    ActivePartition part;
    for (int p = 0; p < homo - n_below; ++p) part.core.push_back(p);
    for (int p = homo - n_below; p <= lumo + n_above; ++p) part.active.push_back(p);
    for (int p = lumo + n_above + 1; p < m; ++p) part.virtuals.push_back(p);
    part.n_active_electrons = 2 * mos.n_occupied - 2 * part.n_core();
    return part;
}

Matrix core_density_ao(const MOSpace& mos, const ActivePartition& partition) {
    const int m = static_cast<int>(mos.coefficients.rows());
    Matrix d = Matrix::Zero(m, m);
    for (int i : partition.core) {
        const auto c = mos.coefficients.col(i);
        d += 2.0 * c * c.transpose();
    }
    return d;
}

Matrix active_density_ao(const MOSpace& mos, const ActivePartition& partition,
                         const Matrix& gamma_active) {
    const int m = static_cast<int>(mos.coefficients.rows());
    const int na = partition.n_active();
    Matrix c_act(m, na);
    for (int t = 0; t < na; ++t) c_act.col(t) = mos.coefficients.col(partition.active[t]);
    return c_act * gamma_active * c_act.transpose();
}

EffectiveHamiltonian build_effective_hamiltonian(const MOSpace& mos,
                                                 const ActivePartition& partition,
                                                 const Matrix& h_ao, const ERITensor& eri_ao,
                                                 double v_nn) {
    EffectiveHamiltonian heff;
    heff.n_active_electrons = partition.n_active_electrons;
    const int na = partition.n_active();
    const int m = static_cast<int>(h_ao.rows());

    const Matrix d_core = core_density_ao(mos, partition);
    const Matrix h_dressed = h_ao + eri_ao.coulomb(d_core) - 0.5 * eri_ao.exchange(d_core);

    Matrix c_act(m, na);
    for (int t = 0; t < na; ++t) c_act.col(t) = mos.coefficients.col(partition.active[t]);
    heff.h = c_act.transpose() * h_dressed * c_act;

    // frozen-core energy: sum over core of (h + dressed h) diagonals
    heff.e_frozen = v_nn;
    for (int i : partition.core) {
        const auto c = mos.coefficients.col(i);
        heff.e_frozen += c.dot(h_ao * c) + c.dot(h_dressed * c);
    }

    // active ERIs by four sequential quarter transforms
    heff.eri = ActiveERI(na);
    if (na > 0) {
        std::vector<double> full(std::size_t(m) * m * m * m);
        for (int p = 0; p < m; ++p)
            for (int q = 0; q < m; ++q)
                for (int r = 0; r < m; ++r)
                    for (int s = 0; s < m; ++s)
                        full[((std::size_t(p) * m + q) * m + r) * m + s] = eri_ao(p, q, r, s);
        auto quarter = [&](const std::vector<double>& in, int d0, int d1, int d2, int d3) {
            // transform the first index, cycle it to the back
            std::vector<double> out(std::size_t(na) * d1 * d2 * d3);
            for (int t = 0; t < na; ++t)
                for (int q = 0; q < d1; ++q)
                    for (int r = 0; r < d2; ++r)
                        for (int s = 0; s < d3; ++s) {
                            double acc = 0.0;
                            for (int p = 0; p < d0; ++p)
                                acc += c_act(p, t) *
                                       in[((std::size_t(p) * d1 + q) * d2 + r) * d3 + s];
                            out[((std::size_t(q) * d2 + r) * d3 + s) * na + t] = acc;
                        }
            return out;
        };
        auto w = quarter(full, m, m, m, m); // -> (q r s t)
        w = quarter(w, m, m, m, na);        // -> (r s t u)
        w = quarter(w, m, m, na, na);       // -> (s t u v)
        w = quarter(w, m, na, na, na);      // -> (t u v w)
        for (int p = 0; p < na; ++p)
            for (int q = 0; q < na; ++q)
                for (int r = 0; r < na; ++r)
                    for (int s = 0; s < na; ++s)
                        heff.eri.at(p, q, r, s) =
                            w[((std::size_t(p) * na + q) * na + r) * na + s];
    }
    return heff;
}

std::string fcidump_text(const EffectiveHamiltonian& heff) {
    const int n = static_cast<int>(heff.h.rows());
    std::ostringstream out;
    out.precision(16);
    out << "&FCI NORB=" << n << ",NELEC=" << heff.n_active_electrons << ",MS2=0,\n ORBSYM=";
    for (int i = 0; i < n; ++i) out << "1,";
    out << "\n ISYM=1,\n&END\n";
    out << std::scientific;
    for (int p = 0; p < n; ++p)
        for (int q = 0; q <= p; ++q)
            for (int r = 0; r <= p; ++r)
                for (int s = 0; s <= (r == p ? q : r); ++s) {
                    const double v = heff.eri(p, q, r, s);
                    if (v != 0.0)
                        out << v << " " << p + 1 << " " << q + 1 << " " << r + 1 << " " << s + 1
                            << "\n";
                }
    for (int p = 0; p < n; ++p)
        for (int q = 0; q <= p; ++q)
            if (heff.h(p, q) != 0.0)
                out << heff.h(p, q) << " " << p + 1 << " " << q + 1 << " 0 0\n";
    out << heff.e_frozen << " 0 0 0 0\n";
    return out.str();
}

} // namespace saptvqe
