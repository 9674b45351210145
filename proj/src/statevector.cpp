#include "saptvqe/statevector.hpp"

#include <bit>
#include <cmath>
#include <map>
#include <stdexcept>

namespace saptvqe {

namespace {

double jw_parity(std::size_t n, int qubit) {
    const std::size_t below = n & ((std::size_t(1) << qubit) - 1);
    return (std::popcount(below) & 1) ? -1.0 : 1.0;
}

std::shared_ptr<const StringSpace> cached_string_space(int n_orb, int n_el) {
    static thread_local std::map<std::pair<int, int>, std::shared_ptr<const StringSpace>> cache;
    auto& slot = cache[{n_orb, n_el}];
    if (!slot) slot = std::make_shared<StringSpace>(n_orb, n_el);
    return slot;
}

} // namespace

Statevector::Statevector(int n_orbitals) : n_orb_(n_orbitals) {
    if (n_orbitals < 1 || n_orbitals > 15)
        throw std::invalid_argument("statevector supports 1..15 spatial orbitals");
    amps_.assign(std::size_t(1) << (2 * n_orbitals), 0.0);
}

double Statevector::norm() const {
    double acc = 0.0;
    for (double a : amps_) acc += a * a;
    return std::sqrt(acc);
}

double Statevector::expectation_z(int qubit) const {
    double acc = 0.0;
    for (std::size_t n = 0; n < amps_.size(); ++n)
        acc += (n >> qubit & 1 ? -1.0 : 1.0) * amps_[n] * amps_[n];
    return acc;
}

double Statevector::expectation_number(int qubit) const {
    return 0.5 * (1.0 - expectation_z(qubit));
}

double Statevector::alpha_count() const {
    double acc = 0.0;
    for (int p = 0; p < n_orb_; ++p) acc += expectation_number(2 * p);
    return acc;
}

double Statevector::beta_count() const {
    double acc = 0.0;
    for (int p = 0; p < n_orb_; ++p) acc += expectation_number(2 * p + 1);
    return acc;
}

Statevector reference_statevector(int n_orbitals, int n_electrons) {
    if (n_electrons % 2 != 0) throw std::invalid_argument("closed-shell reference requires even N");
    Statevector s(n_orbitals);
    std::size_t n = 0;
    for (int p = 0; p < n_electrons / 2; ++p)
        n |= (std::size_t(1) << (2 * p)) | (std::size_t(1) << (2 * p + 1));
    s[n] = 1.0;
    return s;
}

void apply_spin_givens(Statevector& state, int orbital_p, bool beta, double theta) {
    const int j1 = 2 * orbital_p + (beta ? 1 : 0);
    const int j2 = j1 + 2;
    if (orbital_p < 0 || orbital_p + 1 >= state.n_orbitals())
        throw std::out_of_range("orbital pair out of range");
    const std::size_t b1 = std::size_t(1) << j1;
    const std::size_t b2 = std::size_t(1) << j2;
    const std::size_t bm = std::size_t(1) << (j1 + 1); // in-between qubit
    const double c = std::cos(theta), s = std::sin(theta);
    auto& a = state.amplitudes();
    for (std::size_t n = 0; n < a.size(); ++n) {
        if (!(n & b1) || (n & b2)) continue;
        const std::size_t m = n ^ b1 ^ b2;
        const double sigma = (n & bm) ? -1.0 : 1.0;
        const double an = a[n], am = a[m];
        a[n] = c * an - sigma * s * am;
        a[m] = sigma * s * an + c * am;
    }
}

void apply_givens(Statevector& state, int orbital_p, double theta) {
    apply_spin_givens(state, orbital_p, false, theta);
    apply_spin_givens(state, orbital_p, true, theta);
}

void apply_pair_exchange(Statevector& state, int orbital_p, double theta) {
    if (orbital_p < 0 || orbital_p + 1 >= state.n_orbitals())
        throw std::out_of_range("orbital pair out of range");
    const std::size_t mask_p = std::size_t(0b11) << (2 * orbital_p);
    const std::size_t mask_q = std::size_t(0b11) << (2 * orbital_p + 2);
    const double c = std::cos(theta), s = std::sin(theta);
    auto& a = state.amplitudes();
    for (std::size_t n = 0; n < a.size(); ++n) {
        if ((n & (mask_p | mask_q)) != mask_p) continue;
        const std::size_t m = n ^ mask_p ^ mask_q;
        const double an = a[n], am = a[m];
        a[n] = c * an - s * am;
        a[m] = s * an + c * am;
    }
}

void accumulate_annihilation(const Statevector& x, int qubit, Statevector& y, double scale) {
    const std::size_t b = std::size_t(1) << qubit;
    for (std::size_t n = 0; n < x.size(); ++n) {
        if (!(n & b)) continue;
        y[n ^ b] += scale * jw_parity(n, qubit) * x[n];
    }
}

void accumulate_creation(const Statevector& x, int qubit, Statevector& y, double scale) {
    const std::size_t b = std::size_t(1) << qubit;
    for (std::size_t n = 0; n < x.size(); ++n) {
        if (n & b) continue;
        y[n | b] += scale * jw_parity(n, qubit) * x[n];
    }
}

Statevector apply_spin_substitution(const Statevector& x, int p, int q, bool beta) {
    Statevector y(x.n_orbitals());
    const int off = beta ? 1 : 0;
    Statevector tmp(x.n_orbitals());
    accumulate_annihilation(x, 2 * q + off, tmp, 1.0);
    accumulate_creation(tmp, 2 * p + off, y, 1.0);
    return y;
}

Statevector apply_substitution(const Statevector& x, int p, int q) {
    Statevector y = apply_spin_substitution(x, p, q, false);
    const Statevector yb = apply_spin_substitution(x, p, q, true);
    for (std::size_t n = 0; n < y.size(); ++n) y[n] += yb[n];
    return y;
}

namespace {

// parity of reordering alpha-block-then-beta-block creation operators into
// interleaved qubit order
double interleave_phase(std::uint32_t alpha_mask, std::uint32_t beta_mask, int n_orb) {
    int inversions = 0;
    for (int p = 0; p < n_orb; ++p) {
        if (!(beta_mask >> p & 1)) continue;
        for (int q = p + 1; q < n_orb; ++q) inversions += alpha_mask >> q & 1;
    }
    return (inversions & 1) ? -1.0 : 1.0;
}

std::size_t interleave_bits(std::uint32_t alpha_mask, std::uint32_t beta_mask, int n_orb) {
    std::size_t n = 0;
    for (int p = 0; p < n_orb; ++p) {
        if (alpha_mask >> p & 1) n |= std::size_t(1) << (2 * p);
        if (beta_mask >> p & 1) n |= std::size_t(1) << (2 * p + 1);
    }
    return n;
}

} // namespace

Statevector statevector_from_ci(const CIVector& ci) {
    const int n_orb = ci.alpha->n_orbitals();
    Statevector s(n_orb);
    const int nb = ci.n_beta();
    for (int ia = 0; ia < ci.n_alpha(); ++ia) {
        const std::uint32_t am = ci.alpha->string(ia);
        for (int ib = 0; ib < nb; ++ib) {
            const std::uint32_t bm = ci.beta->string(ib);
            const double amp = ci.amplitudes[std::size_t(ia) * nb + ib];
            if (amp == 0.0) continue;
            s[interleave_bits(am, bm, n_orb)] = amp * interleave_phase(am, bm, n_orb);
        }
    }
    return s;
}

CIVector ci_from_statevector(const Statevector& state, int n_alpha, int n_beta) {
    const int n_orb = state.n_orbitals();
    CIVector ci;
    ci.alpha = cached_string_space(n_orb, n_alpha);
    ci.beta = n_beta == n_alpha ? ci.alpha : cached_string_space(n_orb, n_beta);
    const int nb = ci.beta->size();
    ci.amplitudes = Vector::Zero(std::size_t(ci.alpha->size()) * nb);
    for (int ia = 0; ia < ci.alpha->size(); ++ia) {
        const std::uint32_t am = ci.alpha->string(ia);
        for (int ib = 0; ib < nb; ++ib) {
            const std::uint32_t bm = ci.beta->string(ib);
            ci.amplitudes[std::size_t(ia) * nb + ib] =
                state[interleave_bits(am, bm, n_orb)] * interleave_phase(am, bm, n_orb);
        }
    }
    return ci;
}

SpinSummedRDMs rdms_from_statevector(const Statevector& state) {
    const int n = state.n_orbitals();
    SpinSummedRDMs rdms;
    rdms.one_particle = Matrix::Zero(n, n);
    rdms.two_particle = ActiveERI(n);
    std::vector<Statevector> t;
    t.reserve(std::size_t(n) * n);
    for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) t.push_back(apply_substitution(state, r, s));
    auto dot = [](const Statevector& a, const Statevector& b) {
        double acc = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
        return acc;
    };
    for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s)
            rdms.one_particle(r, s) = dot(state, t[std::size_t(r) * n + s]);
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
            for (int r = 0; r < n; ++r)
                for (int s = 0; s < n; ++s) {
                    double val = dot(t[std::size_t(q) * n + p], t[std::size_t(r) * n + s]);
                    if (q == r) val -= rdms.one_particle(p, s);
                    rdms.two_particle.at(p, q, r, s) = val;
                }
    return rdms;
}

double energy_expectation_fast(const Statevector& state, const EffectiveHamiltonian& heff) {
    const int n_orb = state.n_orbitals();
    const int na = static_cast<int>(std::lround(state.alpha_count()));
    const int nb = static_cast<int>(std::lround(state.beta_count()));
    const CIVector ci = ci_from_statevector(state, na, nb);
    const Vector sigma = apply_hamiltonian(ci, ci.amplitudes, heff.h, heff.eri);
    (void)n_orb;
    return ci.amplitudes.dot(sigma) + heff.e_frozen;
}

double energy_expectation(const Statevector& state, const EffectiveHamiltonian& heff) {
    return energy_from_rdms(heff, rdms_from_statevector(state));
}

double s_squared(const Statevector& state) {
    const int n = state.n_orbitals();
    double acc = 0.0;
    for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
            const Statevector ta = apply_spin_substitution(state, r, s, false);
            const Statevector tb = apply_spin_substitution(state, r, s, true);
            for (std::size_t i = 0; i < ta.size(); ++i) acc += ta[i] * tb[i];
        }
    return state.beta_count() - acc;
}

} // namespace saptvqe
