#include "saptvqe/integrals.hpp"

#include <cassert>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "saptvqe/boys.hpp"

namespace saptvqe {

namespace {

constexpr int kMaxL = 4;           // per-index angular momentum cap (incl. kinetic +2)
constexpr int kMaxHermite = 4 * 3; // highest Hermite order in an ERI quartet

// Hermite expansion coefficients E_t^{ij} for one axis.
struct AxisE {
    double e[kMaxL + 2][kMaxL + 2][2 * kMaxL + 5] = {};

    void build(int imax, int jmax, double a, double b, double ab) {
        const double p = a + b;
        const double mu = a * b / p;
        const double xpa = -b * ab / p; // P - A, with ab = A - B
        const double xpb = a * ab / p;  // P - B
        e[0][0][0] = std::exp(-mu * ab * ab);
        for (int i = 0; i < imax; ++i) {
            for (int t = 0; t <= i + 1; ++t) {
                double v = 0.0;
                if (t > 0) v += e[i][0][t - 1] / (2.0 * p);
                v += xpa * e[i][0][t];
                v += (t + 1.0) * e[i][0][t + 1];
                e[i + 1][0][t] = v;
            }
        }
        for (int j = 0; j < jmax; ++j) {
            for (int i = 0; i <= imax; ++i) {
                for (int t = 0; t <= i + j + 1; ++t) {
                    double v = 0.0;
                    if (t > 0) v += e[i][j][t - 1] / (2.0 * p);
                    v += xpb * e[i][j][t];
                    v += (t + 1.0) * e[i][j][t + 1];
                    e[i][j + 1][t] = v;
                }
            }
        }
    }
};

// Hermite Coulomb integrals R_{tuv} = R^0_{tuv}(alpha, PC).
struct HermiteR {
    int n = 0;
    std::vector<double> r; // [t][u][v] flattened with stride n+1

    double operator()(int t, int u, int v) const {
        return r[std::size_t((t * (n + 1) + u) * (n + 1)) + v];
    }

    void build(int order, double alpha, const double* pc) {
        n = order;
        const int d = n + 1;
        const double x2 = alpha * (pc[0] * pc[0] + pc[1] * pc[1] + pc[2] * pc[2]);
        std::vector<double> f = boys_function(n, x2);
        // aux[m] holds R^m_{tuv}; peel off one auxiliary order per sweep.
        std::vector<std::vector<double>> aux(n + 1, std::vector<double>(std::size_t(d) * d * d, 0.0));
        double pref = 1.0;
        for (int m = 0; m <= n; ++m) {
            aux[m][0] = pref * f[m];
            pref *= -2.0 * alpha;
        }
        auto idx = [d](int t, int u, int v) { return std::size_t((t * d + u) * d) + v; };
        for (int m = n - 1; m >= 0; --m) {
            for (int ord = 1; ord <= n - m; ++ord) {
                for (int t = 0; t <= ord; ++t) {
                    for (int u = 0; u <= ord - t; ++u) {
                        const int v = ord - t - u;
                        double val = 0.0;
                        if (t > 0) {
                            val = pc[0] * aux[m + 1][idx(t - 1, u, v)];
                            if (t > 1) val += (t - 1.0) * aux[m + 1][idx(t - 2, u, v)];
                        } else if (u > 0) {
                            val = pc[1] * aux[m + 1][idx(t, u - 1, v)];
                            if (u > 1) val += (u - 1.0) * aux[m + 1][idx(t, u - 2, v)];
                        } else {
                            val = pc[2] * aux[m + 1][idx(t, u, v - 1)];
                            if (v > 1) val += (v - 1.0) * aux[m + 1][idx(t, u, v - 2)];
                        }
                        aux[m][idx(t, u, v)] = val;
                    }
                }
            }
        }
        r = std::move(aux[0]);
    }
};

struct PrimPair {
    double p = 0.0;       // exponent sum
    double coef = 0.0;    // product of contraction coefficients
    double center[3]{};   // composite center P
    AxisE ex, ey, ez;
};

// All primitive pairs of a shell pair with E tables up to (la+extra, lb+extra).
std::vector<PrimPair> make_prim_pairs(const Shell& sa, const Shell& sb, int extra) {
    std::vector<PrimPair> pairs;
    pairs.reserve(sa.primitives.size() * sb.primitives.size());
    for (const auto& pa : sa.primitives) {
        for (const auto& pb : sb.primitives) {
            PrimPair pp;
            pp.p = pa.exponent + pb.exponent;
            pp.coef = pa.coefficient * pb.coefficient;
            for (int ax = 0; ax < 3; ++ax)
                pp.center[ax] =
                    (pa.exponent * sa.origin[ax] + pb.exponent * sb.origin[ax]) / pp.p;
            pp.ex.build(sa.l + extra, sb.l + extra, pa.exponent, pb.exponent,
                        sa.origin[0] - sb.origin[0]);
            pp.ey.build(sa.l + extra, sb.l + extra, pa.exponent, pb.exponent,
                        sa.origin[1] - sb.origin[1]);
            pp.ez.build(sa.l + extra, sb.l + extra, pa.exponent, pb.exponent,
                        sa.origin[2] - sb.origin[2]);
            pairs.push_back(std::move(pp));
        }
    }
    return pairs;
}

double comp_norm(const Shell& s, int m) {
    const auto c = cartesian_component(s.l, m);
    return component_normalization(c[0], c[1], c[2]);
}

} // namespace

ERITensor::ERITensor(int n_bra, int n_ket, bool same_basis)
    : n_bra_(n_bra), n_ket_(n_ket), same_(same_basis) {
    const std::size_t npb = std::size_t(n_bra) * (n_bra + 1) / 2;
    npair_ket_ = std::size_t(n_ket) * (n_ket + 1) / 2;
    const std::size_t size = same_ ? npb * (npb + 1) / 2 : npb * npair_ket_;
    if (size * sizeof(double) > std::size_t(3) * 1024 * 1024 * 1024)
        throw std::runtime_error(
            "in-core ERI storage exceeds the memory budget; an integral-direct path is required "
            "for bases this large");
    data_.assign(size, 0.0);
}

Matrix ERITensor::coulomb(const Matrix& density) const {
    assert(density.rows() == n_ket_ && density.cols() == n_ket_);
    Matrix j = Matrix::Zero(n_bra_, n_bra_);
    for (int x = 0; x < n_bra_; ++x)
        for (int y = 0; y <= x; ++y) {
            double acc = 0.0;
            for (int n = 0; n < n_ket_; ++n)
                for (int np = 0; np < n_ket_; ++np) acc += (*this)(x, y, n, np) * density(n, np);
            j(x, y) = acc;
            j(y, x) = acc;
        }
    return j;
}

Matrix ERITensor::exchange(const Matrix& density) const {
    assert(same_ && density.rows() == n_ket_ && density.cols() == n_ket_);
    Matrix k = Matrix::Zero(n_bra_, n_bra_);
    for (int x = 0; x < n_bra_; ++x)
        for (int y = 0; y < n_bra_; ++y) {
            double acc = 0.0;
            for (int n = 0; n < n_ket_; ++n)
                for (int np = 0; np < n_ket_; ++np) acc += (*this)(x, np, n, y) * density(n, np);
            k(x, y) = acc;
        }
    return k;
}

namespace {

template <typename F>
void for_component_pairs(const Shell& sa, const Shell& sb, F&& fn) {
    for (int ma = 0; ma < sa.n_components(); ++ma) {
        const auto ca = cartesian_component(sa.l, ma);
        for (int mb = 0; mb < sb.n_components(); ++mb) {
            const auto cb = cartesian_component(sb.l, mb);
            fn(ma, ca, mb, cb);
        }
    }
}

} // namespace

Matrix overlap_matrix(const GaussianBasis& bx, const GaussianBasis& by) {
    const auto offx = bx.shell_offsets();
    const auto offy = by.shell_offsets();
    Matrix s = Matrix::Zero(bx.n_functions(), by.n_functions());
    const double pi = std::numbers::pi;
    for (std::size_t ia = 0; ia < bx.shells.size(); ++ia) {
        for (std::size_t ib = 0; ib < by.shells.size(); ++ib) {
            const Shell& sa = bx.shells[ia];
            const Shell& sb = by.shells[ib];
            const auto pairs = make_prim_pairs(sa, sb, 0);
            for_component_pairs(sa, sb, [&](int ma, auto ca, int mb, auto cb) {
                double acc = 0.0;
                for (const auto& pp : pairs) {
                    const double pref = pp.coef * std::pow(pi / pp.p, 1.5);
                    acc += pref * pp.ex.e[ca[0]][cb[0]][0] * pp.ey.e[ca[1]][cb[1]][0] *
                           pp.ez.e[ca[2]][cb[2]][0];
                }
                s(offx[ia] + ma, offy[ib] + mb) = acc * comp_norm(sa, ma) * comp_norm(sb, mb);
            });
        }
    }
    return s;
}

Matrix kinetic_matrix(const GaussianBasis& bx, const GaussianBasis& by) {
    const auto offx = bx.shell_offsets();
    const auto offy = by.shell_offsets();
    Matrix t = Matrix::Zero(bx.n_functions(), by.n_functions());
    const double pi = std::numbers::pi;
    for (std::size_t ia = 0; ia < bx.shells.size(); ++ia) {
        for (std::size_t ib = 0; ib < by.shells.size(); ++ib) {
            const Shell& sa = bx.shells[ia];
            const Shell& sb = by.shells[ib];
            for (const auto& pa : sa.primitives) {
                for (const auto& pb : sb.primitives) {
                    PrimPair pp;
                    pp.p = pa.exponent + pb.exponent;
                    pp.coef = pa.coefficient * pb.coefficient;
                    pp.ex.build(sa.l, sb.l + 2, pa.exponent, pb.exponent,
                                sa.origin[0] - sb.origin[0]);
                    pp.ey.build(sa.l, sb.l + 2, pa.exponent, pb.exponent,
                                sa.origin[1] - sb.origin[1]);
                    pp.ez.build(sa.l, sb.l + 2, pa.exponent, pb.exponent,
                                sa.origin[2] - sb.origin[2]);
                    const double root = std::sqrt(pi / pp.p);
                    const double b = pb.exponent;
                    const AxisE* axes[3] = {&pp.ex, &pp.ey, &pp.ez};
                    for_component_pairs(sa, sb, [&](int ma, auto ca, int mb, auto cb) {
                        double s1[3], t1[3];
                        for (int ax = 0; ax < 3; ++ax) {
                            const int i = ca[ax], j = cb[ax];
                            const auto& e = axes[ax]->e;
                            s1[ax] = e[i][j][0] * root;
                            double kin = -2.0 * b * b * e[i][j + 2][0] +
                                         b * (2.0 * j + 1.0) * e[i][j][0];
                            if (j >= 2) kin -= 0.5 * j * (j - 1.0) * e[i][j - 2][0];
                            t1[ax] = kin * root;
                        }
                        t(offx[ia] + ma, offy[ib] + mb) +=
                            pp.coef * comp_norm(sa, ma) * comp_norm(sb, mb) *
                            (t1[0] * s1[1] * s1[2] + s1[0] * t1[1] * s1[2] +
                             s1[0] * s1[1] * t1[2]);
                    });
                }
            }
        }
    }
    return t;
}

Matrix nuclear_attraction_matrix(const GaussianBasis& bx, const GaussianBasis& by,
                                 const std::vector<Atom>& nuclei) {
    const auto offx = bx.shell_offsets();
    const auto offy = by.shell_offsets();
    Matrix v = Matrix::Zero(bx.n_functions(), by.n_functions());
    const double pi = std::numbers::pi;
    HermiteR hr;
    for (std::size_t ia = 0; ia < bx.shells.size(); ++ia) {
        for (std::size_t ib = 0; ib < by.shells.size(); ++ib) {
            const Shell& sa = bx.shells[ia];
            const Shell& sb = by.shells[ib];
            const int ltot = sa.l + sb.l;
            const auto pairs = make_prim_pairs(sa, sb, 0);
            for (const auto& pp : pairs) {
                for (const auto& nuc : nuclei) {
                    double pc[3];
                    for (int ax = 0; ax < 3; ++ax) pc[ax] = pp.center[ax] - nuc.position[ax];
                    hr.build(ltot, pp.p, pc);
                    const double pref =
                        -double(nuc.charge) * pp.coef * 2.0 * pi / pp.p;
                    for_component_pairs(sa, sb, [&](int ma, auto ca, int mb, auto cb) {
                        double acc = 0.0;
                        for (int t = 0; t <= ca[0] + cb[0]; ++t) {
                            const double etx = pp.ex.e[ca[0]][cb[0]][t];
                            if (etx == 0.0) continue;
                            for (int u = 0; u <= ca[1] + cb[1]; ++u) {
                                const double ety = pp.ey.e[ca[1]][cb[1]][u];
                                if (ety == 0.0) continue;
                                for (int w = 0; w <= ca[2] + cb[2]; ++w)
                                    acc += etx * ety * pp.ez.e[ca[2]][cb[2]][w] * hr(t, u, w);
                            }
                        }
                        v(offx[ia] + ma, offy[ib] + mb) +=
                            pref * acc * comp_norm(sa, ma) * comp_norm(sb, mb);
                    });
                }
            }
        }
    }
    return v;
}

namespace {

// Hermite expansion of one component pair of a primitive pair:
// lambda[t][u][v] over t<=i1+i2 etc.
struct HermiteDensity {
    int tx = 0, ty = 0, tz = 0;
    double lam[2 * kMaxL + 1][2 * kMaxL + 1][2 * kMaxL + 1];

    void build(const PrimPair& pp, const std::array<int, 3>& ca, const std::array<int, 3>& cb) {
        tx = ca[0] + cb[0];
        ty = ca[1] + cb[1];
        tz = ca[2] + cb[2];
        for (int t = 0; t <= tx; ++t)
            for (int u = 0; u <= ty; ++u)
                for (int v = 0; v <= tz; ++v)
                    lam[t][u][v] = pp.ex.e[ca[0]][cb[0]][t] * pp.ey.e[ca[1]][cb[1]][u] *
                                   pp.ez.e[ca[2]][cb[2]][v];
    }
};

void eri_shell_quartet(const Shell& sa, const Shell& sb, const Shell& sc, const Shell& sd,
                       std::vector<double>& block) {
    const int na = sa.n_components(), nb = sb.n_components(), nc = sc.n_components(),
              nd = sd.n_components();
    block.assign(std::size_t(na) * nb * nc * nd, 0.0);
    const auto bra = make_prim_pairs(sa, sb, 0);
    const auto ket = make_prim_pairs(sc, sd, 0);
    const int lbra = sa.l + sb.l, lket = sc.l + sd.l;
    const double pi = std::numbers::pi;
    HermiteR hr;
    HermiteDensity hb;
    static thread_local std::vector<HermiteDensity> hk_all;
    hk_all.resize(std::size_t(nc) * nd);
    for (const auto& pb : bra) {
        for (const auto& pk : ket) {
            double pq[3];
            for (int ax = 0; ax < 3; ++ax) pq[ax] = pb.center[ax] - pk.center[ax];
            const double alpha = pb.p * pk.p / (pb.p + pk.p);
            hr.build(lbra + lket, alpha, pq);
            const double pref = 2.0 * std::pow(pi, 2.5) /
                                (pb.p * pk.p * std::sqrt(pb.p + pk.p)) * pb.coef * pk.coef;
            if (std::abs(pref) < 1e-30) continue;
            for (int mc = 0; mc < nc; ++mc)
                for (int md = 0; md < nd; ++md)
                    hk_all[std::size_t(mc) * nd + md].build(
                        pk, cartesian_component(sc.l, mc), cartesian_component(sd.l, md));
            std::size_t out = 0;
            for (int ma = 0; ma < na; ++ma) {
                const auto ca = cartesian_component(sa.l, ma);
                for (int mb = 0; mb < nb; ++mb) {
                    const auto cb = cartesian_component(sb.l, mb);
                    hb.build(pb, ca, cb);
                    for (int mc = 0; mc < nc; ++mc) {
                        for (int md = 0; md < nd; ++md) {
                            const HermiteDensity& hk = hk_all[std::size_t(mc) * nd + md];
                            double acc = 0.0;
                            for (int t = 0; t <= hb.tx; ++t)
                                for (int u = 0; u <= hb.ty; ++u)
                                    for (int v = 0; v <= hb.tz; ++v) {
                                        const double lb = hb.lam[t][u][v];
                                        if (lb == 0.0) continue;
                                        for (int tt = 0; tt <= hk.tx; ++tt)
                                            for (int uu = 0; uu <= hk.ty; ++uu)
                                                for (int vv = 0; vv <= hk.tz; ++vv) {
                                                    const double sign =
                                                        ((tt + uu + vv) & 1) ? -1.0 : 1.0;
                                                    acc += sign * lb * hk.lam[tt][uu][vv] *
                                                           hr(t + tt, u + uu, v + vv);
                                                }
                                    }
                            block[out++] += pref * acc;
                        }
                    }
                }
            }
        }
    }
    // component normalization factors
    std::size_t out = 0;
    for (int ma = 0; ma < na; ++ma)
        for (int mb = 0; mb < nb; ++mb)
            for (int mc = 0; mc < nc; ++mc)
                for (int md = 0; md < nd; ++md)
                    block[out++] *= comp_norm(sa, ma) * comp_norm(sb, mb) * comp_norm(sc, mc) *
                                    comp_norm(sd, md);
}

} // namespace

ERITensor two_electron_integrals(const GaussianBasis& bx, const GaussianBasis& by) {
    const bool same = &bx == &by;
    ERITensor eri(bx.n_functions(), by.n_functions(), same);
    const auto offx = bx.shell_offsets();
    const auto offy = by.shell_offsets();
    std::vector<double> block;
    const auto nsx = bx.shells.size();
    const auto nsy = by.shells.size();
    for (std::size_t ia = 0; ia < nsx; ++ia) {
        for (std::size_t ib = 0; ib <= ia; ++ib) {
            for (std::size_t ic = 0; ic < nsy; ++ic) {
                for (std::size_t id = 0; id <= ic; ++id) {
                    if (same) {
                        // keep only canonical bra/ket ordering of shell pairs
                        const std::size_t braidx = ia * (ia + 1) / 2 + ib;
                        const std::size_t ketidx = ic * (ic + 1) / 2 + id;
                        if (braidx < ketidx) continue;
                    }
                    const Shell& sa = bx.shells[ia];
                    const Shell& sb = bx.shells[ib];
                    const Shell& sc = by.shells[ic];
                    const Shell& sd = by.shells[id];
                    eri_shell_quartet(sa, sb, sc, sd, block);
                    std::size_t idx = 0;
                    for (int ma = 0; ma < sa.n_components(); ++ma)
                        for (int mb = 0; mb < sb.n_components(); ++mb)
                            for (int mc = 0; mc < sc.n_components(); ++mc)
                                for (int md = 0; md < sd.n_components(); ++md)
                                    eri.at(offx[ia] + ma, offx[ib] + mb, offy[ic] + mc,
                                           offy[id] + md) = block[idx++];
                }
            }
        }
    }
    return eri;
}

IntegralSet build_integral_set(const DimerSystem& dimer, const GaussianBasis& basis_a,
                               const GaussianBasis& basis_b) {
    IntegralSet ints;
    ints.s_a = overlap_matrix(basis_a, basis_a);
    ints.s_b = overlap_matrix(basis_b, basis_b);
    ints.s_cross = overlap_matrix(basis_a, basis_b);
    ints.h_a = kinetic_matrix(basis_a, basis_a) +
               nuclear_attraction_matrix(basis_a, basis_a, dimer.monomer_a.atoms);
    ints.h_b = kinetic_matrix(basis_b, basis_b) +
               nuclear_attraction_matrix(basis_b, basis_b, dimer.monomer_b.atoms);
    ints.eri_a = two_electron_integrals(basis_a, basis_a);
    ints.eri_b = two_electron_integrals(basis_b, basis_b);
    ints.eri_cross = two_electron_integrals(basis_a, basis_b);
    ints.v_a_on_b = nuclear_attraction_matrix(basis_b, basis_b, dimer.monomer_a.atoms);
    ints.v_b_on_a = nuclear_attraction_matrix(basis_a, basis_a, dimer.monomer_b.atoms);
    ints.v_ab = dimer.cross_nuclear_repulsion();
    return ints;
}

double generalized_eri(const DimerSystem& dimer, const IntegralSet& ints, int p, int pp, int q,
                       int qq) {
    const int na = dimer.monomer_a.n_electrons();
    const int nb = dimer.monomer_b.n_electrons();
    if (na == 0 || nb == 0)
        throw std::invalid_argument("generalized ERI undefined for a monomer with no electrons");
    return ints.eri_cross(p, pp, q, qq) + ints.v_a_on_b(q, qq) * ints.s_a(p, pp) / na +
           ints.v_b_on_a(p, pp) * ints.s_b(q, qq) / nb +
           ints.v_ab * ints.s_a(p, pp) * ints.s_b(q, qq) / (double(na) * nb);
}

Matrix DimerWorkspace::gen_coulomb(const Matrix& density, bool output_first) const {
    const Matrix j = eri.coulomb(density);
    const double sd = s.cwiseProduct(density).sum();
    if (output_first) {
        const double vad = v_nuc_a.cwiseProduct(density).sum();
        return j + s * (vad / nel_a) + v_nuc_b * (sd / nel_b) +
               s * (v_ab * sd / (double(nel_a) * nel_b));
    }
    const double vbd = v_nuc_b.cwiseProduct(density).sum();
    return j + v_nuc_a * (sd / nel_a) + s * (vbd / nel_b) +
           s * (v_ab * sd / (double(nel_a) * nel_b));
}

Matrix DimerWorkspace::gen_exchange(const Matrix& density) const {
    const Matrix k = eri.exchange(density);
    const Matrix dt = density.transpose();
    return k + s * dt * v_nuc_a / nel_a + v_nuc_b * dt * s / nel_b +
           v_ab / (double(nel_a) * nel_b) * s * dt * s;
}

DimerWorkspace build_dimer_workspace(const DimerSystem& dimer, const GaussianBasis& basis_a,
                                     const GaussianBasis& basis_b) {
    DimerWorkspace w;
    w.basis = merge_bases(basis_a, basis_b);
    w.n_a = basis_a.n_functions();
    w.n_b = basis_b.n_functions();
    w.nel_a = dimer.monomer_a.n_electrons();
    w.nel_b = dimer.monomer_b.n_electrons();
    w.s = overlap_matrix(w.basis, w.basis);
    w.v_nuc_a = nuclear_attraction_matrix(w.basis, w.basis, dimer.monomer_a.atoms);
    w.v_nuc_b = nuclear_attraction_matrix(w.basis, w.basis, dimer.monomer_b.atoms);
    w.eri = two_electron_integrals(w.basis, w.basis);
    w.v_ab = dimer.cross_nuclear_repulsion();
    return w;
}

} // namespace saptvqe
