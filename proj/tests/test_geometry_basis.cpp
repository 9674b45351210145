#include "doctest.h"

#include "saptvqe/basis.hpp"
#include <cmath>
#include "saptvqe/constants.hpp"
#include "saptvqe/molecule.hpp"
#include "test_helpers.hpp"

using namespace saptvqe;
using testhelpers::load_basis;
using testhelpers::water_dimer;

TEST_CASE("water dimer xyz block parses to two monomers with 10 electrons each") {
    const DimerSystem dimer = water_dimer();
    CHECK(dimer.monomer_a.atoms.size() == 3);
    CHECK(dimer.monomer_b.atoms.size() == 3);
    CHECK(dimer.monomer_a.n_electrons() == 10);
    CHECK(dimer.monomer_b.n_electrons() == 10);
    CHECK(dimer.monomer_a.atoms[0].symbol == "O");
    CHECK(dimer.monomer_a.atoms[0].position[0] ==
          doctest::Approx(-1.551007 * kAngstromToBohr).epsilon(1e-12));
    // monomer 2's OH bonds are compressed to 0.2397 Angstrom
    const auto& o = dimer.monomer_b.atoms[0].position;
    const auto& h = dimer.monomer_b.atoms[1].position;
    const double r = std::hypot(o[0] - h[0], o[1] - h[1], o[2] - h[2]) / kAngstromToBohr;
    CHECK(r == doctest::Approx(0.2397).epsilon(5e-4));
}

TEST_CASE("two distant hydrogen atoms: counts and cross repulsion") {
    const auto dimer = parse_dimer_xyz("H 0 0 0\n--\nH 0 0 100\n");
    CHECK(dimer.monomer_a.n_electrons() == 1);
    CHECK(dimer.monomer_b.n_electrons() == 1);
    CHECK(dimer.cross_nuclear_repulsion() ==
          doctest::Approx(1.0 / (100.0 * kAngstromToBohr)).epsilon(1e-12));
}

TEST_CASE("three blocks rejected") {
    CHECK_THROWS_AS(parse_dimer_xyz("H 0 0 0\n--\nH 0 0 1\n--\nH 0 0 2\n"), ParseError);
}

TEST_CASE("malformed line and unknown element produce parse errors") {
    CHECK_THROWS_AS(parse_dimer_xyz("H 0 0\n--\nH 0 0 1\n"), ParseError);
    CHECK_THROWS_AS(parse_dimer_xyz("Qq 0 0 0\n--\nH 0 0 1\n"), ParseError);
    CHECK_THROWS_AS(parse_dimer_xyz("H 0 0 0\nH 0 0 1\n"), ParseError); // missing --
}

TEST_CASE("6-31G shell structure: 2 AOs per H, 13 AOs for water") {
    const DimerSystem dimer = water_dimer();
    const auto basis = load_basis("6-31g.gbs", dimer.monomer_a);
    CHECK(basis.n_functions() == 13);
    Molecule h_only;
    h_only.atoms.push_back({"H", 1, {0, 0, 0}});
    const auto hbasis = load_basis("6-31g.gbs", h_only);
    CHECK(hbasis.shells.size() == 2);
    CHECK(hbasis.n_functions() == 2);
    for (const auto& sh : hbasis.shells) CHECK(sh.l == 0);
}

TEST_CASE("missing element reported by name") {
    Molecule fe;
    fe.atoms.push_back({"Fe", 26, {0, 0, 0}});
    try {
        load_basis("sto-3g.gbs", fe);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("Fe") != std::string::npos);
    }
}

TEST_CASE("non-positive basis exponent rejected") {
    Molecule h;
    h.atoms.push_back({"H", 1, {0, 0, 0}});
    CHECK_THROWS_AS(parse_basis("****\nH 0\nS 1 1.00\n  -0.5  1.0\n****\n", h), ParseError);
}
