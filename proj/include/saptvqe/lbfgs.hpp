#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace saptvqe {

struct LbfgsOptions {
    int max_iterations = 1000;
    double gradient_tolerance = 1e-6; // inf-norm of the gradient
    int history = 10;
    double wolfe_c1 = 1e-4;
    double wolfe_c2 = 0.9;
    int max_line_search = 40;
};

struct LbfgsTracePoint {
    int iteration;
    double value;
    double gradient_norm; // inf-norm
};

struct LbfgsResult {
    Eigen::VectorXd x;
    double value = 0.0;
    bool converged = false;
    int iterations = 0;
    int n_evaluations = 0;
    std::vector<LbfgsTracePoint> trace;
};

// Limited-memory BFGS with a strong-Wolfe line search. The objective
// returns f(x) and writes the gradient. Throws std::runtime_error on
// non-finite objective values, carrying the offending point.
LbfgsResult lbfgs_minimize(
    const std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>& objective,
    Eigen::VectorXd x0, const LbfgsOptions& opts = {});

} // namespace saptvqe
