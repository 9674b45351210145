#include "saptvqe/sapt.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <future>
#include <stdexcept>

namespace saptvqe {

namespace {

Matrix embed(const Matrix& m, int offset, int total) {
    Matrix out = Matrix::Zero(total, total);
    out.block(offset, offset, m.rows(), m.cols()) = m;
    return out;
}

// Dimer-embedded densities and active coefficients of one monomer.
struct Side {
    Matrix gamma_total;
    Matrix gamma_active;
    Matrix c_active; // M_dimer x n_active
    const ActiveERI* d_corr = nullptr;
    int n_active = 0;
};

Side make_side(const MonomerState& st, int offset, int total) {
    Side s;
    s.n_active = st.partition.n_active();
    s.gamma_total = embed(st.total_density_ao(), offset, total);
    s.gamma_active = embed(st.active_density(), offset, total);
    s.c_active = Matrix::Zero(total, s.n_active);
    for (int t = 0; t < s.n_active; ++t)
        s.c_active.col(t).segment(offset, st.mos.coefficients.rows()) =
            st.mos.coefficients.col(st.partition.active[t]);
    s.d_corr = &st.rdms.two_particle;
    return s;
}

// Flat 4-index tensor with explicit dimensions.
struct Tensor4 {
    int n0 = 0, n1 = 0, n2 = 0, n3 = 0;
    std::vector<double> data;

    Tensor4() = default;
    Tensor4(int a, int b, int c, int d)
        : n0(a), n1(b), n2(c), n3(d), data(std::size_t(a) * b * c * d, 0.0) {}
    double& at(int a, int b, int c, int d) {
        return data[((std::size_t(a) * n1 + b) * n2 + c) * n3 + d];
    }
    double get(int a, int b, int c, int d) const {
        return data[((std::size_t(a) * n1 + b) * n2 + c) * n3 + d];
    }
};

std::vector<double> dense_eri(const ERITensor& eri) {
    const int m = eri.n_bra();
    std::vector<double> out(std::size_t(m) * m * m * m);
    for (int p = 0; p < m; ++p)
        for (int q = 0; q < m; ++q)
            for (int r = 0; r < m; ++r)
                for (int s = 0; s < m; ++s)
                    out[((std::size_t(p) * m + q) * m + r) * m + s] = eri(p, q, r, s);
    return out;
}

// Plain-ERI four-index transform (c1 c2 | c3 c4) over a dense AO tensor.
Tensor4 transform_eri(const std::vector<double>& ao, int m, const Matrix& c1, const Matrix& c2,
                      const Matrix& c3, const Matrix& c4) {
    const int n1 = static_cast<int>(c1.cols()), n2 = static_cast<int>(c2.cols()),
              n3 = static_cast<int>(c3.cols()), n4 = static_cast<int>(c4.cols());
    auto quarter = [m](const std::vector<double>& in, int d1, int d2, int d3, const Matrix& c) {
        const int nt = static_cast<int>(c.cols());
        std::vector<double> out(std::size_t(nt) * d1 * d2 * d3, 0.0);
        for (int p = 0; p < m; ++p)
            for (int t = 0; t < nt; ++t) {
                const double w = c(p, t);
                if (w == 0.0) continue;
                const double* src = &in[std::size_t(p) * d1 * d2 * d3];
                for (int r = 0; r < d1 * d2 * d3; ++r)
                    out[std::size_t(r) * nt + t] += w * src[r];
            }
        return out;
    };
    // cycle-transform each index in turn: (p q r s) -> ... -> (t1 t2 t3 t4)
    auto w1 = quarter(ao, m, m, m, c1);
    auto w2 = quarter(w1, m, m, n1, c2);
    auto w3 = quarter(w2, m, n1, n2, c3);
    auto w4 = quarter(w3, n1, n2, n3, c4);
    Tensor4 out(n1, n2, n3, n4);
    for (int a = 0; a < n1; ++a)
        for (int b = 0; b < n2; ++b)
            for (int c = 0; c < n3; ++c)
                for (int d = 0; d < n4; ++d)
                    out.at(a, b, c, d) = w4[((std::size_t(a) * n2 + b) * n3 + c) * n4 + d];
    return out;
}

// Generalized-ERI transform: the interaction-operator extras on top of the
// plain ERIs; pair (c1,c2) is the electron-1 slot.
Tensor4 vtilde_transform(const DimerWorkspace& w, const std::vector<double>& ao_dense,
                         const Matrix& c1, const Matrix& c2, const Matrix& c3,
                         const Matrix& c4) {
    const int m = static_cast<int>(w.s.rows());
    Tensor4 out = transform_eri(ao_dense, m, c1, c2, c3, c4);
    const Matrix s12 = c1.transpose() * w.s * c2;
    const Matrix s34 = c3.transpose() * w.s * c4;
    const Matrix va34 = c3.transpose() * w.v_nuc_a * c4;
    const Matrix vb12 = c1.transpose() * w.v_nuc_b * c2;
    const double inv_ab = w.v_ab / (double(w.nel_a) * w.nel_b);
    for (int a = 0; a < out.n0; ++a)
        for (int b = 0; b < out.n1; ++b)
            for (int c = 0; c < out.n2; ++c)
                for (int d = 0; d < out.n3; ++d)
                    out.at(a, b, c, d) += s12(a, b) * va34(c, d) / w.nel_a +
                                          vb12(a, b) * s34(c, d) / w.nel_b +
                                          inv_ab * s12(a, b) * s34(c, d);
    return out;
}

double sum_elem(const Matrix& a, const Matrix& b) { return a.cwiseProduct(b).sum(); }

} // namespace

Matrix MonomerState::active_density() const {
    if (partition.n_active() == 0)
        return Matrix::Zero(mos.coefficients.rows(), mos.coefficients.rows());
    return active_density_ao(mos, partition, rdms.one_particle);
}

Matrix MonomerState::total_density_ao() const { return core_density() + active_density(); }

MonomerState monomer_state_from_rhf(const RhfResult& rhf) {
    MonomerState st;
    st.mos = rhf.mos;
    for (int i = 0; i < rhf.mos.n_occupied; ++i) st.partition.core.push_back(i);
    for (int p = rhf.mos.n_occupied; p < rhf.mos.n_orbitals(); ++p)
        st.partition.virtuals.push_back(p);
    st.partition.n_active_electrons = 0;
    st.rdms.one_particle = Matrix::Zero(0, 0);
    st.rdms.two_particle = ActiveERI(0);
    st.source = "RHF";
    return st;
}

MonomerState monomer_state_from_rdms(const MOSpace& mos, const ActivePartition& partition,
                                     const SpinSummedRDMs& rdms, std::string source) {
    MonomerState st;
    st.mos = mos;
    st.partition = partition;
    st.rdms = rdms;
    st.source = std::move(source);
    return st;
}

void validate_monomer_state(const MonomerState& state, const Matrix& s_monomer,
                            int n_electrons) {
    const double trace = state.total_density_ao().cwiseProduct(s_monomer).sum();
    if (std::abs(trace - n_electrons) > 1e-6)
        throw std::runtime_error("monomer density carries " + std::to_string(trace) +
                                 " electrons but the molecule has " +
                                 std::to_string(n_electrons));
}

double e_pol1(const MonomerState& a, const MonomerState& b, const DimerWorkspace& w) {
    const int total = static_cast<int>(w.s.rows());
    const Matrix ga = embed(a.total_density_ao(), 0, total);
    const Matrix gb = embed(b.total_density_ao(), w.n_a, total);
    return sum_elem(ga, w.gen_coulomb(gb, /*output_first=*/true));
}

std::pair<double, ExchangeBreakdown> e_exch1(const MonomerState& a, const MonomerState& b,
                                             const DimerWorkspace& w) {
    const int total = static_cast<int>(w.s.rows());
    const Side sa = make_side(a, 0, total);
    const Side sb = make_side(b, w.n_a, total);
    const double e_pol = e_pol1(a, b, w);
    const std::vector<double> ao = dense_eri(w.eri);

    ExchangeBreakdown t;
    t.t1 = -0.5 * sum_elem(sa.gamma_total, w.gen_exchange(sb.gamma_total));
    t.t5 = 0.5 * e_pol * sum_elem(sa.gamma_total * w.s * sb.gamma_total, w.s);

    // T2: mean-field pieces via generalized J/K builds, correlated active
    // tensor via the half-transformed generalized MO-ERIs
    auto t2_mf = [&](const Matrix& gamma) {
        const Matrix m1 = sa.gamma_total * w.s * gamma;
        return -0.5 * sum_elem(m1, w.gen_coulomb(gamma, true) - 0.5 * w.gen_exchange(gamma));
    };
    t.t2 = t2_mf(sb.gamma_total) - t2_mf(sb.gamma_active);
    if (sb.n_active > 0) {
        const Matrix f = sa.gamma_total * w.s * sb.c_active;
        const Tensor4 w2 = vtilde_transform(w, ao, f, sb.c_active, sb.c_active, sb.c_active);
        double acc = 0.0;
        const ActiveERI& db = *sb.d_corr;
        for (int q = 0; q < sb.n_active; ++q)
            for (int q2 = 0; q2 < sb.n_active; ++q2)
                for (int q1 = 0; q1 < sb.n_active; ++q1)
                    for (int q3 = 0; q3 < sb.n_active; ++q3)
                        acc += db(q, q2, q1, q3) * w2.get(q1, q3, q, q2);
        t.t2 += -0.5 * acc;
    }

    // T3 mirrors T2 with the roles of the monomers swapped
    auto t3_mf = [&](const Matrix& gamma) {
        const Matrix m1 = sb.gamma_total * w.s * gamma;
        return -0.5 * sum_elem(m1, w.gen_coulomb(gamma, false)) +
               0.25 * sum_elem(m1, w.gen_exchange(gamma).transpose());
    };
    t.t3 = t3_mf(sa.gamma_total) - t3_mf(sa.gamma_active);
    if (sa.n_active > 0) {
        const Matrix g = sb.gamma_total * w.s * sa.c_active;
        const Tensor4 w3 = vtilde_transform(w, ao, sa.c_active, sa.c_active, g, sa.c_active);
        double acc = 0.0;
        const ActiveERI& da = *sa.d_corr;
        for (int p = 0; p < sa.n_active; ++p)
            for (int p2 = 0; p2 < sa.n_active; ++p2)
                for (int p1 = 0; p1 < sa.n_active; ++p1)
                    for (int p3 = 0; p3 < sa.n_active; ++p3)
                        acc += da(p, p2, p1, p3) * w3.get(p, p2, p1, p3);
        t.t3 += -0.5 * acc;
    }

    // T4: mean-field x mean-field through J/K builds
    auto t4_mm = [&](const Matrix& g1, const Matrix& g2) {
        const Matrix j2 = w.gen_coulomb(g1, false);
        const Matrix j1 = w.gen_coulomb(g2, true);
        const double vbar = sum_elem(g2, j2);
        const double sigma = (g1 * w.s * g2 * w.s).trace();
        const Matrix x = g1 * w.s * g2;
        double acc = -0.5 * vbar * sigma;
        acc += 0.25 * sum_elem(g2 * w.s * g1 * w.s * g2, j2);
        acc += 0.25 * sum_elem(g1 * w.s * g2 * w.s * g1, j1);
        acc += -0.125 * sum_elem(x, w.gen_exchange(x.transpose()));
        return acc;
    };
    t.t4 = t4_mm(sa.gamma_total, sb.gamma_total) - t4_mm(sa.gamma_active, sb.gamma_total) -
           t4_mm(sa.gamma_total, sb.gamma_active) + t4_mm(sa.gamma_active, sb.gamma_active);

    // mean-field (A) x correlated tensor (B)
    auto t4_mt = [&](const Matrix& gamma) {
        const Matrix j2mo = sb.c_active.transpose() * w.gen_coulomb(gamma, false) * sb.c_active;
        const Matrix sgs = sb.c_active.transpose() * (w.s * gamma * w.s) * sb.c_active;
        const Matrix f = gamma * w.s * sb.c_active;
        const Tensor4 y4 = vtilde_transform(w, ao, f, f, sb.c_active, sb.c_active);
        double acc = 0.0;
        const ActiveERI& db = *sb.d_corr;
        for (int q = 0; q < sb.n_active; ++q)
            for (int q2 = 0; q2 < sb.n_active; ++q2)
                for (int q1 = 0; q1 < sb.n_active; ++q1)
                    for (int q3 = 0; q3 < sb.n_active; ++q3)
                        acc += db(q, q2, q1, q3) *
                               (-0.5 * j2mo(q, q2) * sgs(q3, q1) +
                                0.25 * y4.get(q1, q3, q, q2));
        return acc;
    };
    if (sb.n_active > 0) t.t4 += t4_mt(sa.gamma_total) - t4_mt(sa.gamma_active);

    // correlated tensor (A) x mean-field (B)
    auto t4_tm = [&](const Matrix& gamma) {
        const Matrix j1mo = sa.c_active.transpose() * w.gen_coulomb(gamma, true) * sa.c_active;
        const Matrix sgs = sa.c_active.transpose() * (w.s * gamma * w.s) * sa.c_active;
        const Matrix g = gamma * w.s * sa.c_active;
        const Tensor4 y4t = vtilde_transform(w, ao, sa.c_active, sa.c_active, g, g);
        double acc = 0.0;
        const ActiveERI& da = *sa.d_corr;
        for (int p = 0; p < sa.n_active; ++p)
            for (int p2 = 0; p2 < sa.n_active; ++p2)
                for (int p1 = 0; p1 < sa.n_active; ++p1)
                    for (int p3 = 0; p3 < sa.n_active; ++p3)
                        acc += da(p, p2, p1, p3) *
                               (-0.5 * j1mo(p, p2) * sgs(p1, p3) +
                                0.25 * y4t.get(p, p2, p1, p3));
        return acc;
    };
    if (sa.n_active > 0) t.t4 += t4_tm(sb.gamma_total) - t4_tm(sb.gamma_active);

    // correlated x correlated
    if (sa.n_active > 0 && sb.n_active > 0) {
        const Matrix sx = sa.c_active.transpose() * w.s * sb.c_active; // n_aA x n_aB
        const Tensor4 vact =
            vtilde_transform(w, ao, sa.c_active, sa.c_active, sb.c_active, sb.c_active);
        const int na = sa.n_active, nb = sb.n_active;
        const ActiveERI& da = *sa.d_corr;
        const ActiveERI& db = *sb.d_corr;
        // A2[p][p2][q3][q1] = sum_{p1 p3} dA[p][p2][p1][p3] Sx(p1,q3) Sx(p3,q1)
        Tensor4 a2(na, na, nb, nb);
        for (int p = 0; p < na; ++p)
            for (int p2 = 0; p2 < na; ++p2)
                for (int q3 = 0; q3 < nb; ++q3)
                    for (int q1 = 0; q1 < nb; ++q1) {
                        double acc = 0.0;
                        for (int p1 = 0; p1 < na; ++p1)
                            for (int p3 = 0; p3 < na; ++p3)
                                acc += da(p, p2, p1, p3) * sx(p1, q3) * sx(p3, q1);
                        a2.at(p, p2, q3, q1) = acc;
                    }
        double acc = 0.0;
        for (int p = 0; p < na; ++p)
            for (int p2 = 0; p2 < na; ++p2)
                for (int q = 0; q < nb; ++q)
                    for (int q2 = 0; q2 < nb; ++q2) {
                        double inner = 0.0;
                        for (int q1 = 0; q1 < nb; ++q1)
                            for (int q3 = 0; q3 < nb; ++q3)
                                inner += a2.get(p, p2, q3, q1) * db(q, q2, q1, q3);
                        acc += inner * vact.get(p, p2, q, q2);
                    }
        t.t4 += -0.5 * acc;
    }

    return {t.total(), t};
}

namespace {

// Full-space mean-field pair density d_pqrs = g_pq g_rs - 1/2 g_ps g_rq.
Tensor4 mean_field_tensor(const Matrix& g) {
    const int n = static_cast<int>(g.rows());
    Tensor4 d(n, n, n, n);
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
            for (int r = 0; r < n; ++r)
                for (int s = 0; s < n; ++s)
                    d.at(p, q, r, s) = g(p, q) * g(r, s) - 0.5 * g(p, s) * g(r, q);
    return d;
}

struct NaiveSide {
    Matrix gamma;   // full monomer-MO 1-RDM
    Tensor4 d;      // full monomer-MO 2-RDM (per block mask)
    int offset = 0; // column offset in the combined MO set
    int n_mo = 0;
};

NaiveSide make_naive_side(const MonomerState& st, int offset, int mask) {
    NaiveSide s;
    s.offset = offset;
    s.n_mo = st.mos.n_orbitals();
    s.gamma = Matrix::Zero(s.n_mo, s.n_mo);
    for (int i : st.partition.core) s.gamma(i, i) = 2.0;
    Matrix g_act = Matrix::Zero(s.n_mo, s.n_mo);
    const int na = st.partition.n_active();
    for (int t = 0; t < na; ++t)
        for (int u = 0; u < na; ++u)
            g_act(st.partition.active[t], st.partition.active[u]) = st.rdms.one_particle(t, u);
    s.gamma += g_act;

    s.d = Tensor4(s.n_mo, s.n_mo, s.n_mo, s.n_mo);
    const Tensor4 mf_total = mean_field_tensor(s.gamma);
    const Tensor4 mf_active = mean_field_tensor(g_act);
    for (std::size_t i = 0; i < s.d.data.size(); ++i) {
        if (mask & 1) s.d.data[i] += mf_total.data[i];
        if (mask & 2) s.d.data[i] -= mf_active.data[i];
    }
    if (mask & 4) {
        for (int t = 0; t < na; ++t)
            for (int u = 0; u < na; ++u)
                for (int v = 0; v < na; ++v)
                    for (int x = 0; x < na; ++x)
                        s.d.at(st.partition.active[t], st.partition.active[u],
                               st.partition.active[v], st.partition.active[x]) +=
                            st.rdms.two_particle(t, u, v, x);
    }
    return s;
}

struct NaiveWorkspace {
    Matrix s, va, vb;
    Tensor4 vt; // generalized ERIs over the combined MO set
    int mc = 0;
};

NaiveWorkspace make_naive_workspace(const MonomerState& a, const MonomerState& b,
                                    const DimerWorkspace& w) {
    NaiveWorkspace nw;
    const int total = static_cast<int>(w.s.rows());
    const int ma = a.mos.n_orbitals(), mb = b.mos.n_orbitals();
    nw.mc = ma + mb;
    Matrix x = Matrix::Zero(total, nw.mc);
    x.block(0, 0, a.mos.coefficients.rows(), ma) = a.mos.coefficients;
    x.block(w.n_a, ma, b.mos.coefficients.rows(), mb) = b.mos.coefficients;
    nw.s = x.transpose() * w.s * x;
    nw.va = x.transpose() * w.v_nuc_a * x;
    nw.vb = x.transpose() * w.v_nuc_b * x;
    const std::vector<double> ao = dense_eri(w.eri);
    nw.vt = transform_eri(ao, total, x, x, x, x);
    for (int p = 0; p < nw.mc; ++p)
        for (int q = 0; q < nw.mc; ++q)
            for (int r = 0; r < nw.mc; ++r)
                for (int s = 0; s < nw.mc; ++s)
                    nw.vt.at(p, q, r, s) += nw.s(p, q) * nw.va(r, s) / w.nel_a +
                                            nw.vb(p, q) * nw.s(r, s) / w.nel_b +
                                            w.v_ab * nw.s(p, q) * nw.s(r, s) /
                                                (double(w.nel_a) * w.nel_b);
    return nw;
}

} // namespace

double naive_pol1_oracle(const MonomerState& a, const MonomerState& b, const DimerWorkspace& w) {
    const NaiveWorkspace nw = make_naive_workspace(a, b, w);
    const NaiveSide sa = make_naive_side(a, 0, 7);
    const NaiveSide sb = make_naive_side(b, a.mos.n_orbitals(), 7);
    double acc = 0.0;
    for (int p = 0; p < sa.n_mo; ++p)
        for (int p1 = 0; p1 < sa.n_mo; ++p1)
            for (int q = 0; q < sb.n_mo; ++q)
                for (int q1 = 0; q1 < sb.n_mo; ++q1)
                    acc += sa.gamma(p, p1) * sb.gamma(q, q1) *
                           nw.vt.get(p, p1, sb.offset + q, sb.offset + q1);
    return acc;
}

std::pair<double, ExchangeBreakdown> naive_exch1_oracle(const MonomerState& a,
                                                        const MonomerState& b,
                                                        const DimerWorkspace& w, int block_mask_a,
                                                        int block_mask_b) {
    const NaiveWorkspace nw = make_naive_workspace(a, b, w);
    const NaiveSide sa = make_naive_side(a, 0, block_mask_a);
    const NaiveSide sb = make_naive_side(b, a.mos.n_orbitals(), block_mask_b);
    const int ma = sa.n_mo, mb = sb.n_mo, ob = sb.offset;
    const double e_pol = naive_pol1_oracle(a, b, w);

    ExchangeBreakdown t;
    // T1 = -1/2 gA_{pp'} gB_{qq'} v(p q'| q p')
    for (int p = 0; p < ma; ++p)
        for (int p1 = 0; p1 < ma; ++p1)
            for (int q = 0; q < mb; ++q)
                for (int q1 = 0; q1 < mb; ++q1)
                    t.t1 += sa.gamma(p, p1) * sb.gamma(q, q1) *
                            nw.vt.get(p, ob + q1, ob + q, p1);
    t.t1 *= -0.5;

    // T2 = -1/2 gA_{pp'} dB_{q q'' q' q'''} S_{p' q'} v(p q'''|q q'')
    {
        Matrix r = Matrix::Zero(mb, ma); // R(q', p) = sum_{p'} gA(p,p') S(p', q')
        for (int q1 = 0; q1 < mb; ++q1)
            for (int p = 0; p < ma; ++p) {
                double acc = 0.0;
                for (int p1 = 0; p1 < ma; ++p1) acc += sa.gamma(p, p1) * nw.s(p1, ob + q1);
                r(q1, p) = acc;
            }
        double acc = 0.0;
        for (int q = 0; q < mb; ++q)
            for (int q2 = 0; q2 < mb; ++q2)
                for (int q1 = 0; q1 < mb; ++q1)
                    for (int q3 = 0; q3 < mb; ++q3) {
                        const double dval = sb.d.get(q, q2, q1, q3);
                        if (dval == 0.0) continue;
                        for (int p = 0; p < ma; ++p)
                            acc += dval * r(q1, p) * nw.vt.get(p, ob + q3, ob + q, ob + q2);
                    }
        t.t2 = -0.5 * acc;
    }

    // T3 = -1/2 gB_{qq'} dA_{p p'' p' p'''} S_{q' p'} v(p p''|q p''')
    {
        Matrix r = Matrix::Zero(ma, mb); // R(p', q) = sum_{q'} gB(q,q') S(q', p')
        for (int p1 = 0; p1 < ma; ++p1)
            for (int q = 0; q < mb; ++q) {
                double acc = 0.0;
                for (int q1 = 0; q1 < mb; ++q1) acc += sb.gamma(q, q1) * nw.s(ob + q1, p1);
                r(p1, q) = acc;
            }
        double acc = 0.0;
        for (int p = 0; p < ma; ++p)
            for (int p2 = 0; p2 < ma; ++p2)
                for (int p1 = 0; p1 < ma; ++p1)
                    for (int p3 = 0; p3 < ma; ++p3) {
                        const double dval = sa.d.get(p, p2, p1, p3);
                        if (dval == 0.0) continue;
                        for (int q = 0; q < mb; ++q)
                            acc += dval * r(p1, q) * nw.vt.get(p, p2, ob + q, p3);
                    }
        t.t3 = -0.5 * acc;
    }

    // T4 = -1/2 dA_{p p'' p' p'''} dB_{q q'' q' q'''} S_{p' q'''} S_{q' p'''}
    //      v(p p''|q q'')
    {
        Tensor4 a2(ma, ma, mb, mb); // [p][p''][q'][q''']
        for (int p = 0; p < ma; ++p)
            for (int p2 = 0; p2 < ma; ++p2)
                for (int q1 = 0; q1 < mb; ++q1)
                    for (int q3 = 0; q3 < mb; ++q3) {
                        double acc = 0.0;
                        for (int p1 = 0; p1 < ma; ++p1)
                            for (int p3 = 0; p3 < ma; ++p3)
                                acc += sa.d.get(p, p2, p1, p3) * nw.s(p1, ob + q3) *
                                       nw.s(ob + q1, p3);
                        a2.at(p, p2, q1, q3) = acc;
                    }
        double acc = 0.0;
        for (int p = 0; p < ma; ++p)
            for (int p2 = 0; p2 < ma; ++p2)
                for (int q = 0; q < mb; ++q)
                    for (int q2 = 0; q2 < mb; ++q2) {
                        double inner = 0.0;
                        for (int q1 = 0; q1 < mb; ++q1)
                            for (int q3 = 0; q3 < mb; ++q3)
                                inner += a2.get(p, p2, q1, q3) * sb.d.get(q, q2, q1, q3);
                        acc += inner * nw.vt.get(p, p2, ob + q, ob + q2);
                    }
        t.t4 = -0.5 * acc;
    }

    // T5 = +1/2 E_pol tr(gA S gB S)
    {
        double acc = 0.0;
        for (int p = 0; p < ma; ++p)
            for (int p1 = 0; p1 < ma; ++p1)
                for (int q = 0; q < mb; ++q)
                    for (int q1 = 0; q1 < mb; ++q1)
                        acc += sa.gamma(p, p1) * sb.gamma(q, q1) * nw.s(p, ob + q1) *
                               nw.s(ob + q, p1);
        t.t5 = 0.5 * e_pol * acc;
    }
    return {t.total(), t};
}

std::pair<ElstMeasurementPlan, double> electrostatic_plan_energy(const Statevector& state_a,
                                                                 const MonomerState& a,
                                                                 const MonomerState& b,
                                                                 const DimerWorkspace& w) {
    const int total = static_cast<int>(w.s.rows());
    const Matrix gb = embed(b.total_density_ao(), w.n_a, total);
    const Matrix w_full = w.eri.coulomb(gb) + w.v_nuc_b;
    const Matrix w_ao = w_full.block(0, 0, w.n_a, w.n_a);
    const double nuclear = w.v_ab + w.v_nuc_a.cwiseProduct(gb).sum();
    auto [plan, quantum] = elst_measurement_plan(state_a, w_ao, a.mos, a.partition, nuclear);
    return {plan, quantum + plan.core_offset + plan.nuclear_offset};
}

std::uint64_t geometry_hash(const DimerSystem& dimer) {
    std::uint64_t h = 1469598103934665603ull; // FNV-1a
    auto mix = [&h](std::uint64_t v) {
        h ^= v;
        h *= 1099511628211ull;
    };
    for (const auto* mol : {&dimer.monomer_a, &dimer.monomer_b}) {
        mix(mol->atoms.size());
        for (const auto& atom : mol->atoms) {
            mix(static_cast<std::uint64_t>(atom.charge));
            for (double x : atom.position) {
                const auto scaled = static_cast<std::int64_t>(std::llround(x * 1e10));
                mix(static_cast<std::uint64_t>(scaled));
            }
        }
    }
    return h;
}

namespace {

struct MonomerPipeline {
    MonomerState state;
    Statevector statevector; // active-space state when correlated
    bool has_statevector = false;
    double scf_energy = 0.0;
    double total_energy = 0.0;
    int vqe_iterations = 0;
    double vqe_gradient = 0.0;
};

MonomerPipeline solve_monomer(const Molecule& mol, const GaussianBasis& basis,
                              const MethodSpec& spec) {
    MonomerPipeline out;
    const RhfResult scf = rhf(mol, basis);
    out.scf_energy = scf.energy;
    out.total_energy = scf.energy;
    if (spec.kind == MethodSpec::Kind::Rhf) {
        out.state = monomer_state_from_rhf(scf);
        return out;
    }
    const ActivePartition part = select_window(scf.mos, spec.n_below, spec.n_above);
    const Matrix s = overlap_matrix(basis, basis);
    const Matrix h =
        kinetic_matrix(basis, basis) + nuclear_attraction_matrix(basis, basis, mol.atoms);
    const ERITensor eri = two_electron_integrals(basis, basis);
    const EffectiveHamiltonian heff =
        build_effective_hamiltonian(scf.mos, part, h, eri, mol.nuclear_repulsion());
    (void)s;
    if (spec.kind == MethodSpec::Kind::Casci) {
        const CasciResult cas = casci_ground_state(heff);
        out.state = monomer_state_from_rdms(scf.mos, part, rdms_from_ci(cas.ground_state),
                                            "CASCI");
        out.total_energy = cas.energy;
        out.statevector = statevector_from_ci(cas.ground_state);
        out.has_statevector = true;
        return out;
    }
    VqeOptions vopts;
    vopts.layers = spec.layers;
    vopts.gradient_tolerance = spec.gradient_tolerance;
    vopts.max_iterations = spec.max_iterations;
    vopts.init = spec.init;
    vopts.seed = spec.seed;
    const VqeResult vqe = optimize_vqe(heff, vopts);
    out.state = monomer_state_from_rdms(scf.mos, part, rdms_from_statevector(vqe.state),
                                        "VQE(k=" + std::to_string(spec.layers) + ")");
    out.total_energy = vqe.energy;
    out.statevector = vqe.state;
    out.has_statevector = true;
    out.vqe_iterations = vqe.iterations;
    out.vqe_gradient = vqe.trace.empty() ? 0.0 : vqe.trace.back().gradient_norm;
    return out;
}

} // namespace

SAPTReport run_sapt(const SaptJob& job) {
    using Clock = std::chrono::steady_clock;
    const auto t_start = Clock::now();
    SAPTReport report;
    report.basis_name = job.basis_name;
    report.geometry_hash = geometry_hash(job.dimer);

    const auto t_mono = Clock::now();
    MonomerPipeline pa, pb;
    const char* threads_env = std::getenv("SAPT_VQE_THREADS");
    const bool concurrent = threads_env && std::atoi(threads_env) >= 2;
    if (concurrent) {
        auto fa = std::async(std::launch::async, [&] {
            return solve_monomer(job.dimer.monomer_a, job.basis_a, job.method_a);
        });
        pb = solve_monomer(job.dimer.monomer_b, job.basis_b, job.method_b);
        pa = fa.get();
    } else {
        pa = solve_monomer(job.dimer.monomer_a, job.basis_a, job.method_a);
        pb = solve_monomer(job.dimer.monomer_b, job.basis_b, job.method_b);
    }
    report.seconds_monomers =
        std::chrono::duration<double>(Clock::now() - t_mono).count();

    validate_monomer_state(pa.state, overlap_matrix(job.basis_a, job.basis_a),
                           job.dimer.monomer_a.n_electrons());
    validate_monomer_state(pb.state, overlap_matrix(job.basis_b, job.basis_b),
                           job.dimer.monomer_b.n_electrons());

    const auto t_ints = Clock::now();
    const DimerWorkspace w = build_dimer_workspace(job.dimer, job.basis_a, job.basis_b);
    report.seconds_integrals =
        std::chrono::duration<double>(Clock::now() - t_ints).count();

    report.e_pol1 = e_pol1(pa.state, pb.state, w);
    const auto [exch, breakdown] = e_exch1(pa.state, pb.state, w);
    report.e_exch1 = exch;
    report.terms = breakdown;
    report.source_a = pa.state.source;
    report.source_b = pb.state.source;
    report.scf_energy_a = pa.scf_energy;
    report.scf_energy_b = pb.scf_energy;
    report.monomer_energy_a = pa.total_energy;
    report.monomer_energy_b = pb.total_energy;
    report.vqe_iterations_a = pa.vqe_iterations;
    report.vqe_iterations_b = pb.vqe_iterations;
    report.vqe_gradient_a = pa.vqe_gradient;
    report.vqe_gradient_b = pb.vqe_gradient;

    if (job.run_supermolecular)
        report.supermolecular_interaction =
            supermolecular_interaction(job.dimer, job.basis_a, job.basis_b);
    if (job.run_naive_oracle)
        report.naive_exchange = naive_exch1_oracle(pa.state, pb.state, w).first;
    if (job.run_measurement_plan) {
        // evaluate on whichever monomer carries a quantum state (B first,
        // matching the stretched-monomer setups)
        if (pb.has_statevector) {
            // roles swapped: B is the quantum side
            DimerSystem swapped{job.dimer.monomer_b, job.dimer.monomer_a};
            const DimerWorkspace ws = build_dimer_workspace(swapped, job.basis_b, job.basis_a);
            report.measurement_plan_energy =
                electrostatic_plan_energy(pb.statevector, pb.state, pa.state, ws).second;
        } else if (pa.has_statevector) {
            report.measurement_plan_energy =
                electrostatic_plan_energy(pa.statevector, pa.state, pb.state, w).second;
        }
    }
    report.seconds_total = std::chrono::duration<double>(Clock::now() - t_start).count();
    return report;
}

} // namespace saptvqe
