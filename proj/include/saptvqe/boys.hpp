#pragma once

#include <vector>

namespace saptvqe {

// Fills out[0..m_max] with the Boys functions F_m(x). Downward recursion
// from a convergent series at the highest order; small arguments switch
// to the Taylor limit, large arguments to the asymptotic form.
void boys_function(int m_max, double x, double* out);

std::vector<double> boys_function(int m_max, double x);

} // namespace saptvqe
