#include "saptvqe/molecule.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <sstream>

#include "saptvqe/constants.hpp"

namespace saptvqe {

namespace {

const std::map<std::string, int>& element_table() {
    static const std::map<std::string, int> table = {
        {"H", 1},   {"He", 2},  {"Li", 3},  {"Be", 4},  {"B", 5},
        {"C", 6},   {"N", 7},   {"O", 8},   {"F", 9},   {"Ne", 10},
        {"Na", 11}, {"Mg", 12}, {"Al", 13}, {"Si", 14}, {"P", 15},
        {"S", 16},  {"Cl", 17}, {"Ar", 18}, {"K", 19},  {"Ca", 20},
        {"Fe", 26}, {"Zn", 30}, {"Br", 35}, {"Kr", 36},
    };
    return table;
}

std::string normalize_symbol(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (std::isalpha(static_cast<unsigned char>(c))) out.push_back(c);
    }
    if (out.empty()) return out;
    out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
    for (size_t i = 1; i < out.size(); ++i)
        out[i] = static_cast<char>(std::tolower(static_cast<unsigned char>(out[i])));
    return out;
}

bool is_separator_line(const std::string& line) {
    std::string t;
    for (char c : line)
        if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
    return t == "--";
}

bool is_blank(const std::string& line) {
    return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
}

} // namespace

int element_number(const std::string& symbol) {
    const std::string key = normalize_symbol(symbol);
    auto it = element_table().find(key);
    if (it == element_table().end())
        throw ParseError("unknown element symbol '" + symbol + "'");
    return it->second;
}

int Molecule::nuclear_charge() const {
    int z = 0;
    for (const auto& a : atoms) z += a.charge;
    return z;
}

int Molecule::n_electrons() const {
    const int n = nuclear_charge() - net_charge;
    if (n < 0) throw std::runtime_error("negative electron count");
    return n;
}

double Molecule::nuclear_repulsion() const {
    double e = 0.0;
    for (size_t i = 0; i < atoms.size(); ++i) {
        for (size_t j = i + 1; j < atoms.size(); ++j) {
            const auto& ri = atoms[i].position;
            const auto& rj = atoms[j].position;
            const double r = std::hypot(ri[0] - rj[0], ri[1] - rj[1], ri[2] - rj[2]);
            if (r <= 0.0) throw std::runtime_error("coincident nuclei");
            e += double(atoms[i].charge) * double(atoms[j].charge) / r;
        }
    }
    return e;
}

double DimerSystem::cross_nuclear_repulsion() const {
    double e = 0.0;
    for (const auto& ai : monomer_a.atoms) {
        for (const auto& aj : monomer_b.atoms) {
            const double r = std::hypot(ai.position[0] - aj.position[0],
                                        ai.position[1] - aj.position[1],
                                        ai.position[2] - aj.position[2]);
            if (r <= 0.0) throw std::runtime_error("coincident nuclei across monomers");
            e += double(ai.charge) * double(aj.charge) / r;
        }
    }
    return e;
}

Molecule parse_xyz_block(const std::string& text) {
    Molecule mol;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (is_blank(line)) continue;
        std::istringstream ls(line);
        std::string sym;
        double x, y, z;
        if (!(ls >> sym >> x >> y >> z))
            throw ParseError("malformed coordinate line " + std::to_string(lineno) + ": '" + line + "'");
        std::string rest;
        if (ls >> rest)
            throw ParseError("trailing tokens on line " + std::to_string(lineno) + ": '" + line + "'");
        Atom a;
        a.symbol = sym;
        a.charge = element_number(sym);
        a.position = {x * kAngstromToBohr, y * kAngstromToBohr, z * kAngstromToBohr};
        if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z))
            throw ParseError("non-finite coordinate on line " + std::to_string(lineno));
        mol.atoms.push_back(std::move(a));
    }
    return mol;
}

DimerSystem parse_dimer_xyz(const std::string& text) {
    std::vector<std::string> blocks(1);
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (is_separator_line(line)) {
            blocks.emplace_back();
        } else {
            blocks.back() += line;
            blocks.back() += '\n';
        }
    }
    if (blocks.size() < 2) throw ParseError("missing `--` separator between monomers");
    if (blocks.size() > 2) throw ParseError("expected exactly two monomer blocks, found " +
                                            std::to_string(blocks.size()));
    DimerSystem dimer;
    dimer.monomer_a = parse_xyz_block(blocks[0]);
    dimer.monomer_b = parse_xyz_block(blocks[1]);
    if (dimer.monomer_a.atoms.empty() || dimer.monomer_b.atoms.empty())
        throw ParseError("each monomer block must contain at least one atom");
    return dimer;
}

} // namespace saptvqe
