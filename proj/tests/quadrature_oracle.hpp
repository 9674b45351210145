#pragma once

// Quadrature oracles for Gaussian integrals, independent of the production
// engine: no Boys function and no Hermite recurrences. One-electron
// integrals use product Gauss-Legendre; the 1/r kernels go through the
// Gaussian transform 1/r = (2/sqrt(pi)) Int_0^inf exp(-t^2 r^2) dt with the
// t-integral mapped to [0,1) and the spatial part done by Gauss-Hermite.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

namespace quadrature {

struct Rule {
    std::vector<double> nodes, weights;
};

// Golub-Welsch on the Jacobi matrix of the orthogonal-polynomial recurrence.
inline Rule gauss_legendre(int n) {
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) {
        const double b = i / std::sqrt(4.0 * i * i - 1.0);
        jac(i, i - 1) = jac(i - 1, i) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
    Rule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        r.nodes[i] = es.eigenvalues()(i);
        r.weights[i] = 2.0 * es.eigenvectors()(0, i) * es.eigenvectors()(0, i);
    }
    return r;
}

inline Rule gauss_hermite(int n) {
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) {
        const double b = std::sqrt(0.5 * i);
        jac(i, i - 1) = jac(i - 1, i) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
    Rule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    const double w0 = std::sqrt(std::numbers::pi);
    for (int i = 0; i < n; ++i) {
        r.nodes[i] = es.eigenvalues()(i);
        r.weights[i] = w0 * es.eigenvectors()(0, i) * es.eigenvectors()(0, i);
    }
    return r;
}

// Unnormalized Cartesian primitive x^i y^j z^k exp(-a r^2) about a center.
struct Primitive {
    double exponent;
    std::array<double, 3> center;
    std::array<int, 3> powers;

    double value(double x, double y, double z) const {
        const double dx = x - center[0], dy = y - center[1], dz = z - center[2];
        return std::pow(dx, powers[0]) * std::pow(dy, powers[1]) * std::pow(dz, powers[2]) *
               std::exp(-exponent * (dx * dx + dy * dy + dz * dz));
    }

    // One axis factor and its (-1/2) second derivative, for kinetic energy.
    double axis_value(int ax, double x) const {
        const double d = x - center[ax];
        return std::pow(d, powers[ax]) * std::exp(-exponent * d * d);
    }
    double axis_d2(int ax, double x) const {
        const double d = x - center[ax];
        const int i = powers[ax];
        const double g = std::exp(-exponent * d * d);
        double v = -2.0 * exponent * (2.0 * i + 1.0) * std::pow(d, i) +
                   4.0 * exponent * exponent * std::pow(d, i + 2);
        if (i >= 2) v += double(i) * (i - 1) * std::pow(d, i - 2);
        return v * g;
    }
};

// 1D overlap of axis factors by Gauss-Legendre over a window that contains
// all Gaussian mass of the pair.
inline double axis_integral(const Primitive& a, const Primitive& b, int ax, const Rule& gl,
                            bool laplacian_b = false) {
    // the pair density is a Gaussian of exponent a+b about the composite
    // center; window accordingly
    const double p = a.exponent + b.exponent;
    const double mid =
        (a.exponent * a.center[ax] + b.exponent * b.center[ax]) / p;
    const double half = 13.0 / std::sqrt(p);
    double acc = 0.0;
    for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
        const double x = mid + half * gl.nodes[k];
        const double fb = laplacian_b ? b.axis_d2(ax, x) : b.axis_value(ax, x);
        acc += gl.weights[k] * a.axis_value(ax, x) * fb;
    }
    return acc * half;
}

inline double overlap(const Primitive& a, const Primitive& b, int n_points = 64) {
    const Rule gl = gauss_legendre(n_points);
    return axis_integral(a, b, 0, gl) * axis_integral(a, b, 1, gl) * axis_integral(a, b, 2, gl);
}

inline double kinetic(const Primitive& a, const Primitive& b, int n_points = 96) {
    const Rule gl = gauss_legendre(n_points);
    double s[3], t[3];
    for (int ax = 0; ax < 3; ++ax) {
        s[ax] = axis_integral(a, b, ax, gl);
        t[ax] = -0.5 * axis_integral(a, b, ax, gl, true);
    }
    return t[0] * s[1] * s[2] + s[0] * t[1] * s[2] + s[0] * s[1] * t[2];
}

namespace detail {

// Int dx (x-A)^i (x-B)^j exp(-a(x-A)^2 - b(x-B)^2 - t2 (x-C)^2), exact
// Gauss-Hermite after recentering on the composite Gaussian.
inline double triple_axis_moment(double a, double A, int i, double b, double B, int j, double t2,
                                 double C, const Rule& gh) {
    const double q = a + b + t2;
    const double Q = (a * A + b * B + t2 * C) / q;
    const double expo =
        -(a * A * A + b * B * B + t2 * C * C) + q * Q * Q; // completed square remainder
    const double scale = 1.0 / std::sqrt(q);
    double acc = 0.0;
    for (std::size_t k = 0; k < gh.nodes.size(); ++k) {
        const double x = Q + scale * gh.nodes[k];
        acc += gh.weights[k] * std::pow(x - A, i) * std::pow(x - B, j);
    }
    return acc * scale * std::exp(expo);
}

} // namespace detail

// <a| 1/|r-C| |b> by the Gaussian transform; the t-integral is mapped with
// t = sqrt(p) u / sqrt(1-u^2) so the tail is integrated exactly on [0,1).
inline double coulomb_kernel(const Primitive& a, const Primitive& b,
                             const std::array<double, 3>& c, int n_u = 160, int n_h = 24) {
    const Rule gl = gauss_legendre(n_u);
    const Rule gh = gauss_hermite(n_h);
    const double p = a.exponent + b.exponent;
    double acc = 0.0;
    for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
        const double u = 0.5 * (gl.nodes[k] + 1.0); // [0,1]
        const double w = 0.5 * gl.weights[k];
        const double om = 1.0 - u * u;
        const double t = std::sqrt(p) * u / std::sqrt(om);
        const double dt = std::sqrt(p) / (om * std::sqrt(om));
        double prod = 1.0;
        for (int ax = 0; ax < 3; ++ax)
            prod *= detail::triple_axis_moment(a.exponent, a.center[ax], a.powers[ax], b.exponent,
                                               b.center[ax], b.powers[ax], t * t, c[ax], gh);
        acc += w * prod * dt;
    }
    return acc * 2.0 / std::sqrt(std::numbers::pi);
}

namespace detail {

// Int dx1 dx2 f1(x1) f2(x2) exp(-t2 (x1-x2)^2) with fi = (x-A)^i(x-B)^j
// exp(...) pair factors; whitened 2D Gauss-Hermite, exact for polynomials.
inline double pair_axis_moment(double pa, double A, int ia, double pb, double B, int ib,
                               double pc, double C, int ic, double pd, double D, int id,
                               double t2, const Rule& gh) {
    const double p = pa + pb, q = pc + pd;
    const double P = (pa * A + pb * B) / p;
    const double Q = (pc * C + pd * D) / q;
    // exponent: -p(x1-P)^2 - q(x2-Q)^2 - t2(x1-x2)^2 + const from pair recentering
    const double cA = std::exp(-pa * pb / p * (A - B) * (A - B));
    const double cB = std::exp(-pc * pd / q * (C - D) * (C - D));
    // quadratic form in y = (x1-P, x2-Q): M = [[p+t2, -t2],[-t2, q+t2]],
    // linear term from t2 (y1 - y2 + P - Q)^2
    const double dpq = P - Q;
    Eigen::Matrix2d m;
    m << p + t2, -t2, -t2, q + t2;
    Eigen::Vector2d lin(t2 * dpq, -t2 * dpq);
    const Eigen::Vector2d shift = m.ldlt().solve(lin);
    const double c0 = -t2 * dpq * dpq + shift.dot(m * shift);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(m);
    const Eigen::Matrix2d rot = es.eigenvectors();
    const double l1 = es.eigenvalues()(0), l2 = es.eigenvalues()(1);
    double acc = 0.0;
    for (std::size_t k1 = 0; k1 < gh.nodes.size(); ++k1) {
        for (std::size_t k2 = 0; k2 < gh.nodes.size(); ++k2) {
            const Eigen::Vector2d wvec(gh.nodes[k1] / std::sqrt(l1), gh.nodes[k2] / std::sqrt(l2));
            const Eigen::Vector2d y = rot * wvec - shift;
            const double x1 = y(0) + P, x2 = y(1) + Q;
            acc += gh.weights[k1] * gh.weights[k2] * std::pow(x1 - A, ia) * std::pow(x1 - B, ib) *
                   std::pow(x2 - C, ic) * std::pow(x2 - D, id);
        }
    }
    return acc * cA * cB * std::exp(c0) / std::sqrt(l1 * l2);
}

} // namespace detail

// (ab|cd) in chemists' notation over unnormalized primitives.
inline double eri(const Primitive& a, const Primitive& b, const Primitive& c, const Primitive& d,
                  int n_u = 160, int n_h = 14) {
    const Rule gl = gauss_legendre(n_u);
    const Rule gh = gauss_hermite(n_h);
    const double p = a.exponent + b.exponent, q = c.exponent + d.exponent;
    const double alpha = p * q / (p + q);
    double acc = 0.0;
    for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
        const double u = 0.5 * (gl.nodes[k] + 1.0);
        const double w = 0.5 * gl.weights[k];
        const double om = 1.0 - u * u;
        const double t = std::sqrt(alpha) * u / std::sqrt(om);
        const double dt = std::sqrt(alpha) / (om * std::sqrt(om));
        double prod = 1.0;
        for (int ax = 0; ax < 3; ++ax)
            prod *= detail::pair_axis_moment(a.exponent, a.center[ax], a.powers[ax], b.exponent,
                                             b.center[ax], b.powers[ax], c.exponent, c.center[ax],
                                             c.powers[ax], d.exponent, d.center[ax], d.powers[ax],
                                             t * t, gh);
        acc += w * prod * dt;
    }
    return acc * 2.0 / std::sqrt(std::numbers::pi);
}

} // namespace quadrature
