#include "doctest.h"

#include <cmath>
#include <random>

#include "saptvqe/constants.hpp"
#include "saptvqe/scf.hpp"
#include "test_helpers.hpp"

using namespace saptvqe;
using testhelpers::load_basis;
using testhelpers::water_dimer;

namespace {

Molecule h2_molecule(double r_bohr) {
    Molecule m;
    m.atoms.push_back({"H", 1, {0, 0, 0}});
    m.atoms.push_back({"H", 1, {0, 0, r_bohr}});
    return m;
}

} // namespace

TEST_CASE("zero density gives zero J and K") {
    const Molecule h2 = h2_molecule(1.4);
    const auto basis = load_basis("sto-3g.gbs", h2);
    const ERITensor eri = two_electron_integrals(basis, basis);
    const Matrix zero = Matrix::Zero(2, 2);
    const auto [j, k] = build_jk(eri, zero);
    CHECK(j.cwiseAbs().maxCoeff() == 0.0);
    CHECK(k.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("tr(D J[D']) is symmetric in the two densities") {
    const DimerSystem dimer = water_dimer();
    const auto basis = load_basis("sto-3g.gbs", dimer.monomer_a);
    const ERITensor eri = two_electron_integrals(basis, basis);
    const int m = basis.n_functions();
    std::mt19937_64 rng(7);
    std::normal_distribution<double> dist;
    Matrix d1(m, m), d2(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= i; ++j) {
            d1(i, j) = d1(j, i) = dist(rng);
            d2(i, j) = d2(j, i) = dist(rng);
        }
    const double a = d1.cwiseProduct(eri.coulomb(d2)).sum();
    const double b = d2.cwiseProduct(eri.coulomb(d1)).sum();
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
    // same for exchange
    const double ka = d1.cwiseProduct(eri.exchange(d2)).sum();
    const double kb = d2.cwiseProduct(eri.exchange(d1)).sum();
    CHECK(ka == doctest::Approx(kb).epsilon(1e-12));
}

TEST_CASE("H2/STO-3G matches the symmetry-determined single-orbital oracle") {
    const Molecule h2 = h2_molecule(1.4);
    const auto basis = load_basis("sto-3g.gbs", h2);
    const Matrix s = overlap_matrix(basis, basis);
    const Matrix h =
        kinetic_matrix(basis, basis) + nuclear_attraction_matrix(basis, basis, h2.atoms);
    const ERITensor eri = two_electron_integrals(basis, basis);

    // By symmetry the doubly-occupied MO is (1,1)/sqrt(2+2S); the SCF
    // fixpoint is reached in one step and the energy follows directly.
    const double c = 1.0 / std::sqrt(2.0 + 2.0 * s(0, 1));
    Vector mo(2);
    mo << c, c;
    const Matrix d = 2.0 * mo * mo.transpose();
    const Matrix f = h + eri.coulomb(d) - 0.5 * eri.exchange(d);
    const double oracle = 0.5 * d.cwiseProduct(h + f).sum() + h2.nuclear_repulsion();

    const RhfResult res = rhf(h2, basis);
    CHECK(res.energy == doctest::Approx(oracle).epsilon(1e-9));
    CHECK(res.energy < -1.1);
    // canonical-orbital orthonormality under S
    const Matrix ctc =
        res.mos.coefficients.transpose() * s * res.mos.coefficients;
    CHECK((ctc - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("water monomer 2 (compressed OH) reproduces the reference RHF energy") {
    const DimerSystem dimer = water_dimer();
    const auto basis = load_basis("6-31g.gbs", dimer.monomer_b);
    const RhfResult res = rhf(dimer.monomer_b, basis);
    CHECK(std::abs(res.energy - (-63.545181)) < 2e-4);
}

TEST_CASE("water monomer 1 lands in the expected equilibrium range") {
    const DimerSystem dimer = water_dimer();
    const auto basis = load_basis("6-31g.gbs", dimer.monomer_a);
    const RhfResult res = rhf(dimer.monomer_a, basis);
    CHECK(res.energy > -76.1);
    CHECK(res.energy < -75.9);
}

TEST_CASE("energy is non-increasing once DIIS settles") {
    const DimerSystem dimer = water_dimer();
    const auto basis = load_basis("6-31g.gbs", dimer.monomer_b);
    const RhfResult res = rhf(dimer.monomer_b, basis);
    for (std::size_t i = 3; i + 1 < res.energy_trace.size(); ++i)
        CHECK(res.energy_trace[i + 1] <= res.energy_trace[i] + 1e-9);
}

TEST_CASE("converged density is idempotent in the orthonormal basis") {
    const DimerSystem dimer = water_dimer();
    const auto basis = load_basis("6-31g.gbs", dimer.monomer_a);
    const Matrix s = overlap_matrix(basis, basis);
    const RhfResult res = rhf(dimer.monomer_a, basis);
    const Matrix c_occ = res.mos.coefficients.leftCols(res.mos.n_occupied);
    const Matrix d = 2.0 * c_occ * c_occ.transpose();
    Eigen::SelfAdjointEigenSolver<Matrix> es(s);
    const Matrix shalf = es.operatorSqrt();
    const Matrix dp = shalf * d * shalf;
    CHECK((dp * dp - 2.0 * dp).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("rigid rotation leaves the RHF energy unchanged") {
    const DimerSystem dimer = water_dimer();
    const double e0 = rhf(dimer.monomer_a, load_basis("6-31g.gbs", dimer.monomer_a)).energy;
    // rotate by 0.7 rad about z then 0.4 about x
    Molecule rot = dimer.monomer_a;
    const double cz = std::cos(0.7), sz = std::sin(0.7);
    const double cx = std::cos(0.4), sx = std::sin(0.4);
    for (auto& atom : rot.atoms) {
        auto& p = atom.position;
        const double x = cz * p[0] - sz * p[1], y = sz * p[0] + cz * p[1];
        p = {x, cx * y - sx * p[2], sx * y + cx * p[2]};
    }
    const double e1 = rhf(rot, load_basis("6-31g.gbs", rot)).energy;
    CHECK(std::abs(e0 - e1) < 1e-9);
}

TEST_CASE("additivity: two closed-shell fragments at 100 Angstrom") {
    // RHF is size-consistent for closed-shell fragments, so one combined
    // computation must equal the fragment sum.
    Molecule pair_a = h2_molecule(1.4);
    Molecule combined = pair_a;
    const double far = 100.0 * kAngstromToBohr;
    combined.atoms.push_back({"H", 1, {far, 0, 0}});
    combined.atoms.push_back({"H", 1, {far, 0, 1.4}});
    RhfOptions opts;
    opts.convergence = 1e-10;
    const double e_one = rhf(pair_a, load_basis("sto-3g.gbs", pair_a), opts).energy;
    const double e_two = rhf(combined, load_basis("sto-3g.gbs", combined), opts).energy;
    CHECK(std::abs(e_two - 2.0 * e_one) < 1e-8);
}

TEST_CASE("supermolecular interaction vanishes for separated identical monomers") {
    DimerSystem dimer;
    dimer.monomer_a = h2_molecule(1.4);
    dimer.monomer_b = h2_molecule(1.4);
    for (auto& atom : dimer.monomer_b.atoms) atom.position[0] += 500.0 * kAngstromToBohr;
    RhfOptions opts;
    opts.convergence = 1e-10;
    const double e_int =
        supermolecular_interaction(dimer, load_basis("sto-3g.gbs", dimer.monomer_a),
                                   load_basis("sto-3g.gbs", dimer.monomer_b), opts);
    CHECK(std::abs(e_int) < 1e-6);
}

TEST_CASE("degenerate dimer with an empty partner gives exactly zero interaction") {
    DimerSystem dimer;
    dimer.monomer_a = h2_molecule(1.4);
    // monomer B has no atoms and no basis functions
    const auto basis_a = load_basis("sto-3g.gbs", dimer.monomer_a);
    const GaussianBasis empty;
    const double e_int = supermolecular_interaction(dimer, basis_a, empty);
    CHECK(e_int == 0.0);
}

TEST_CASE("water dimer supermolecular interaction is bound and of SAPT magnitude") {
    const DimerSystem dimer = water_dimer();
    const auto ba = load_basis("6-31g.gbs", dimer.monomer_a);
    const auto bb = load_basis("6-31g.gbs", dimer.monomer_b);
    const double e_int = supermolecular_interaction(dimer, ba, bb);
    CHECK(e_int < 0.0);
    // |E_pol1 + E_exch1| ~ 0.0042 Ha for this system; stay within 2x
    CHECK(std::abs(e_int) < 2.0 * 0.009);
}

TEST_CASE("odd electron count and singular overlap produce errors") {
    Molecule h;
    h.atoms.push_back({"H", 1, {0, 0, 0}});
    CHECK_THROWS(rhf(h, load_basis("sto-3g.gbs", h)));

    Molecule twice = h2_molecule(1e-6); // nearly coincident -> singular S
    CHECK_THROWS_AS(rhf(twice, load_basis("sto-3g.gbs", twice)), ScfError);
}
