#include "saptvqe/boys.hpp"

#include <cmath>
#include <numbers>

namespace saptvqe {

namespace {

// Convergent series for F_m(x), valid for moderate x:
//   F_m(x) = exp(-x) sum_k (2m-1)!! (2x)^k / (2m+2k+1)!!
double boys_series(int m, double x) {
    double term = 1.0 / (2.0 * m + 1.0);
    double sum = term;
    for (int k = 1; k < 400; ++k) {
        term *= 2.0 * x / (2.0 * m + 2.0 * k + 1.0);
        sum += term;
        if (term < sum * 1e-17) break;
    }
    return std::exp(-x) * sum;
}

} // namespace

void boys_function(int m_max, double x, double* out) {
    if (x < 1e-13) {
        for (int m = 0; m <= m_max; ++m)
            out[m] = 1.0 / (2.0 * m + 1.0) - x / (2.0 * m + 3.0);
        return;
    }
    if (x > 36.0) {
        // Asymptotic start, upward recursion (stable at large x).
        out[0] = 0.5 * std::sqrt(std::numbers::pi / x);
        const double ex = std::exp(-x);
        for (int m = 0; m < m_max; ++m)
            out[m + 1] = ((2.0 * m + 1.0) * out[m] - ex) / (2.0 * x);
        return;
    }
    out[m_max] = boys_series(m_max, x);
    const double ex = std::exp(-x);
    for (int m = m_max; m > 0; --m)
        out[m - 1] = (2.0 * x * out[m] + ex) / (2.0 * m - 1.0);
}

std::vector<double> boys_function(int m_max, double x) {
    std::vector<double> out(m_max + 1);
    boys_function(m_max, x, out.data());
    return out;
}

} // namespace saptvqe
