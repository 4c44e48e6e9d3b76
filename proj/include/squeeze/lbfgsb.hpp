#pragma once

#include <functional>
#include <span>
#include <vector>

namespace squeeze {

/// f(x), writing the gradient into g.
using BoundedObjective =
    std::function<double(std::span<const double> x, std::span<double> g)>;

struct LbfgsbOptions {
    int memory = 10;
    int max_iterations = 2000;
    /// Stop when the projected gradient's infinity norm falls below this.
    double gradient_tolerance = 1e-9;
    /// Stop when (f_k - f_{k+1}) <= tol * max(|f_k|, |f_{k+1}|, 1).
    double function_tolerance = 1e-15;
    int max_line_search = 40;
};

enum class LbfgsbStatus { Gradient, Stagnation, MaxIterations, LineSearchFailure };

struct LbfgsbResult {
    std::vector<double> x;
    double f;
    double projected_gradient_norm; ///< infinity norm
    int iterations;
    int evaluations;
    LbfgsbStatus status;

    [[nodiscard]] bool converged() const noexcept {
        return status == LbfgsbStatus::Gradient ||
               status == LbfgsbStatus::Stagnation;
    }
};

/**
 * Box-constrained limited-memory quasi-Newton minimization.
 *
 * Projected L-BFGS: variables pinned at a bound with the gradient pointing
 * outward are frozen for the step, the two-loop recursion runs on the free
 * variables, and an Armijo backtracking search moves along the projected
 * path P(x + a d). Curvature pairs with s'y <= 0 are skipped.
 */
LbfgsbResult minimize_bounded(const BoundedObjective &objective,
                              std::vector<double> x0,
                              const std::vector<double> &lower,
                              const std::vector<double> &upper,
                              const LbfgsbOptions &options = {});

} // namespace squeeze
