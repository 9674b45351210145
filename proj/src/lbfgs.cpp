#include "saptvqe/lbfgs.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>

namespace saptvqe {

namespace {

using Eigen::VectorXd;

struct Evaluator {
    const std::function<double(const VectorXd&, VectorXd&)>& fn;
    int count = 0;

    double operator()(const VectorXd& x, VectorXd& g) {
        ++count;
        const double f = fn(x, g);
        if (!std::isfinite(f) || !g.allFinite())
            throw std::runtime_error("non-finite objective at |x|_inf = " +
                                     std::to_string(x.cwiseAbs().maxCoeff()));
        return f;
    }
};

} // namespace

LbfgsResult lbfgs_minimize(
    const std::function<double(const VectorXd&, VectorXd&)>& objective, VectorXd x0,
    const LbfgsOptions& opts) {
    Evaluator eval{objective};
    LbfgsResult result;
    const int n = static_cast<int>(x0.size());

    VectorXd x = std::move(x0);
    VectorXd g(n), g_new(n);
    double f = eval(x, g);
    result.trace.push_back({0, f, g.size() ? g.cwiseAbs().maxCoeff() : 0.0});

    std::deque<VectorXd> s_hist, y_hist;
    std::deque<double> rho_hist;

    for (int iter = 1; iter <= opts.max_iterations; ++iter) {
        const double gnorm = g.size() ? g.cwiseAbs().maxCoeff() : 0.0;
        if (gnorm < opts.gradient_tolerance) {
            result.converged = true;
            break;
        }
        // two-loop recursion
        VectorXd q = g;
        const int m = static_cast<int>(s_hist.size());
        std::vector<double> alpha(m);
        for (int i = m - 1; i >= 0; --i) {
            alpha[i] = rho_hist[i] * s_hist[i].dot(q);
            q -= alpha[i] * y_hist[i];
        }
        if (m > 0) {
            const double gamma =
                s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
            q *= gamma;
        }
        for (int i = 0; i < m; ++i) {
            const double beta = rho_hist[i] * y_hist[i].dot(q);
            q += (alpha[i] - beta) * s_hist[i];
        }
        VectorXd direction = -q;
        double dg = direction.dot(g);
        if (dg >= 0.0) { // not a descent direction; reset to steepest descent
            direction = -g;
            dg = -g.squaredNorm();
            s_hist.clear();
            y_hist.clear();
            rho_hist.clear();
        }

        // strong-Wolfe line search (bracket + zoom)
        double step = 1.0, step_lo = 0.0, step_hi = 0.0;
        double f_lo = f, dg_lo = dg;
        double f_new = f;
        bool bracketed = false, ok = false;
        double prev_step = 0.0, prev_f = f, prev_dg = dg;
        VectorXd x_new;
        for (int ls = 0; ls < opts.max_line_search; ++ls) {
            x_new = x + step * direction;
            f_new = eval(x_new, g_new);
            const double dg_new = direction.dot(g_new);
            if (!bracketed) {
                if (f_new > f + opts.wolfe_c1 * step * dg || (ls > 0 && f_new >= prev_f)) {
                    bracketed = true;
                    step_lo = prev_step;
                    f_lo = prev_f;
                    dg_lo = prev_dg;
                    step_hi = step;
                } else if (std::abs(dg_new) <= -opts.wolfe_c2 * dg) {
                    ok = true;
                    break;
                } else if (dg_new >= 0.0) {
                    bracketed = true;
                    step_lo = step;
                    f_lo = f_new;
                    dg_lo = dg_new;
                    step_hi = prev_step;
                } else {
                    prev_step = step;
                    prev_f = f_new;
                    prev_dg = dg_new;
                    step *= 2.0;
                    continue;
                }
            } else {
                if (f_new > f + opts.wolfe_c1 * step * dg || f_new >= f_lo) {
                    step_hi = step;
                } else {
                    if (std::abs(dg_new) <= -opts.wolfe_c2 * dg) {
                        ok = true;
                        break;
                    }
                    if (dg_new * (step_hi - step_lo) >= 0.0) step_hi = step_lo;
                    step_lo = step;
                    f_lo = f_new;
                    dg_lo = dg_new;
                }
            }
            if (bracketed) {
                step = 0.5 * (step_lo + step_hi);
                if (std::abs(step_hi - step_lo) < 1e-16) break;
            }
        }
        if (!ok && f_new >= f) {
            // line search failed to improve; stop here
            result.iterations = iter - 1;
            break;
        }

        const VectorXd s = x_new - x;
        const VectorXd y = g_new - g;
        const double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm()) {
            s_hist.push_back(s);
            y_hist.push_back(y);
            rho_hist.push_back(1.0 / sy);
            if (static_cast<int>(s_hist.size()) > opts.history) {
                s_hist.pop_front();
                y_hist.pop_front();
                rho_hist.pop_front();
            }
        }
        x = std::move(x_new);
        f = f_new;
        g = g_new;
        result.iterations = iter;
        result.trace.push_back({iter, f, g.cwiseAbs().maxCoeff()});
    }
    if (!result.converged && g.size() && g.cwiseAbs().maxCoeff() < opts.gradient_tolerance)
        result.converged = true;
    result.x = std::move(x);
    result.value = f;
    result.n_evaluations = eval.count;
    return result;
}

} // namespace saptvqe
