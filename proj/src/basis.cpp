#include "saptvqe/basis.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

namespace saptvqe {

namespace {

double double_factorial(int n) {
    double r = 1.0;
    for (int k = n; k > 1; k -= 2) r *= k;
    return r;
}

// Normalization of the (l,0,0) Cartesian primitive without the
// component-dependent double-factorial part.
double primitive_base_norm(double alpha, int l) {
    return std::pow(2.0 * alpha / std::numbers::pi, 0.75) * std::pow(4.0 * alpha, 0.5 * l);
}

std::string upper(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::toupper(c); });
    return s;
}

double parse_fortran_double(std::string tok, int lineno) {
    for (char& c : tok)
        if (c == 'D' || c == 'd') c = 'E';
    try {
        size_t pos = 0;
        const double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ParseError("bad numeric token '" + tok + "' on basis line " + std::to_string(lineno));
    }
}

struct RawShell {
    int l = 0;
    std::vector<Primitive> primitives; // raw contraction coefficients
};

int shell_l(const std::string& type, int lineno) {
    if (type == "S") return 0;
    if (type == "P") return 1;
    if (type == "D") return 2;
    if (type == "F") return 3;
    throw ParseError("unsupported shell type '" + type + "' on basis line " + std::to_string(lineno));
}

// Element blocks of the basis file, keyed by normalized symbol.
std::map<std::string, std::vector<RawShell>> parse_element_blocks(const std::string& text) {
    std::map<std::string, std::vector<RawShell>> blocks;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;

    std::string element;
    std::vector<RawShell> shells;
    int pending = 0; // primitive rows still expected
    bool pending_sp = false;
    auto flush = [&]() {
        if (!element.empty()) {
            if (pending > 0) throw ParseError("truncated shell block for element " + element);
            blocks[element] = shells;
        }
        element.clear();
        shells.clear();
    };

    while (std::getline(in, line)) {
        ++lineno;
        std::string t = line;
        if (auto p = t.find('!'); p != std::string::npos) t.erase(p);
        std::istringstream ls(t);
        std::string first;
        if (!(ls >> first)) continue;
        if (first == "****") {
            flush();
            continue;
        }
        if (pending > 0) {
            const double expo = parse_fortran_double(first, lineno);
            std::string c1tok, c2tok;
            if (!(ls >> c1tok)) throw ParseError("missing coefficient on basis line " + std::to_string(lineno));
            const double c1 = parse_fortran_double(c1tok, lineno);
            if (expo <= 0.0)
                throw ParseError("non-positive exponent on basis line " + std::to_string(lineno));
            if (pending_sp) {
                if (!(ls >> c2tok))
                    throw ParseError("SP row missing p coefficient on basis line " + std::to_string(lineno));
                const double c2 = parse_fortran_double(c2tok, lineno);
                shells[shells.size() - 2].primitives.push_back({expo, c1});
                shells[shells.size() - 1].primitives.push_back({expo, c2});
            } else {
                shells.back().primitives.push_back({expo, c1});
            }
            --pending;
            continue;
        }
        const std::string tok = upper(first);
        if (element.empty() || (std::isalpha(static_cast<unsigned char>(tok[0])) && shells.empty() &&
                                element.empty())) {
            // new element header: `SYMBOL 0`
            element = tok;
            element = std::string(1, tok[0]) +
                      (tok.size() > 1 ? std::string(1, static_cast<char>(std::tolower(tok[1]))) : "");
            continue;
        }
        // shell header: `TYPE NPRIM SCALE`
        int nprim = 0;
        std::string nptok;
        if (!(ls >> nptok)) throw ParseError("bad shell header on basis line " + std::to_string(lineno));
        nprim = static_cast<int>(parse_fortran_double(nptok, lineno));
        if (nprim <= 0) throw ParseError("bad primitive count on basis line " + std::to_string(lineno));
        if (tok == "SP") {
            shells.push_back(RawShell{0, {}});
            shells.push_back(RawShell{1, {}});
            pending_sp = true;
        } else {
            shells.push_back(RawShell{shell_l(tok, lineno), {}});
            pending_sp = false;
        }
        pending = nprim;
    }
    flush();
    return blocks;
}

// Analytic self-overlap of the contracted (l,0,0) component with
// base-normalized primitive coefficients folded in.
double contracted_self_overlap(const std::vector<Primitive>& prims, int l) {
    double s = 0.0;
    for (const auto& a : prims) {
        for (const auto& b : prims) {
            const double p = a.exponent + b.exponent;
            s += a.coefficient * b.coefficient * double_factorial(2 * l - 1) *
                 std::pow(std::numbers::pi / p, 1.5) / std::pow(2.0 * p, l);
        }
    }
    return s;
}

} // namespace

std::array<int, 3> cartesian_component(int l, int m) {
    int idx = 0;
    for (int i = l; i >= 0; --i) {
        for (int j = l - i; j >= 0; --j) {
            if (idx == m) return {i, j, l - i - j};
            ++idx;
        }
    }
    throw std::out_of_range("cartesian component index");
}

double component_normalization(int i, int j, int k) {
    const int l = i + j + k;
    return std::sqrt(double_factorial(2 * l - 1) /
                     (double_factorial(2 * i - 1) * double_factorial(2 * j - 1) *
                      double_factorial(2 * k - 1)));
}

int GaussianBasis::n_functions() const {
    int n = 0;
    for (const auto& s : shells) n += s.n_components();
    return n;
}

std::vector<int> GaussianBasis::shell_offsets() const {
    std::vector<int> offs;
    offs.reserve(shells.size() + 1);
    int n = 0;
    for (const auto& s : shells) {
        offs.push_back(n);
        n += s.n_components();
    }
    offs.push_back(n);
    return offs;
}

GaussianBasis parse_basis(const std::string& text, const Molecule& molecule) {
    const auto blocks = parse_element_blocks(text);
    GaussianBasis basis;
    for (size_t atom = 0; atom < molecule.atoms.size(); ++atom) {
        const auto& a = molecule.atoms[atom];
        auto it = blocks.find(a.symbol.substr(0, 1) +
                              (a.symbol.size() > 1 ? std::string(1, static_cast<char>(std::tolower(
                                                         static_cast<unsigned char>(a.symbol[1]))))
                                                   : ""));
        if (it == blocks.end()) it = blocks.find(a.symbol);
        if (it == blocks.end())
            throw ParseError("basis set has no block for element '" + a.symbol + "'");
        for (const auto& raw : it->second) {
            Shell sh;
            sh.center = static_cast<int>(atom);
            sh.l = raw.l;
            sh.origin = a.position;
            sh.primitives = raw.primitives;
            // Fold the (l,0,0) primitive norm into each coefficient, then
            // rescale the contraction to unit self-overlap. Components other
            // than (l,0,0) are handled by the per-component ratio the
            // integral engine applies, so one scale serves all components.
            for (auto& p : sh.primitives)
                p.coefficient *= primitive_base_norm(p.exponent, sh.l) /
                                 std::sqrt(double_factorial(2 * sh.l - 1));
            const double scale = 1.0 / std::sqrt(contracted_self_overlap(sh.primitives, sh.l));
            for (auto& p : sh.primitives) p.coefficient *= scale;
            basis.shells.push_back(std::move(sh));
        }
    }
    return basis;
}

GaussianBasis merge_bases(const GaussianBasis& a, const GaussianBasis& b) {
    GaussianBasis out = a;
    out.shells.insert(out.shells.end(), b.shells.begin(), b.shells.end());
    return out;
}

} // namespace saptvqe
