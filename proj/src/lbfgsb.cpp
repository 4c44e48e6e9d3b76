#include "squeeze/lbfgsb.hpp"

#include "squeeze/errors.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace squeeze {

namespace {

struct CurvaturePair {
    std::vector<double> s;
    std::vector<double> y;
    double rho;
};

double dot(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc += a[i] * b[i];
    }
    return acc;
}

class Box {
  public:
    Box(const std::vector<double> &lo, const std::vector<double> &hi)
        : lo_(lo), hi_(hi) {}

    void project(std::vector<double> &x) const {
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] = std::clamp(x[i], lo_[i], hi_[i]);
        }
    }

    [[nodiscard]] double projected_gradient_norm(const std::vector<double> &x,
                                                 const std::vector<double> &g) const {
        double best = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double p = std::clamp(x[i] - g[i], lo_[i], hi_[i]) - x[i];
            best = std::max(best, std::abs(p));
        }
        return best;
    }

    // Variables held at a bound by an outward-pointing gradient.
    [[nodiscard]] std::vector<char> free_mask(const std::vector<double> &x,
                                              const std::vector<double> &g) const {
        std::vector<char> mask(x.size(), 1);
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double tol = 1e-12 * std::max(1.0, std::abs(x[i]));
            if ((x[i] <= lo_[i] + tol && g[i] > 0.0) ||
                (x[i] >= hi_[i] - tol && g[i] < 0.0)) {
                mask[i] = 0;
            }
        }
        return mask;
    }

  private:
    const std::vector<double> &lo_;
    const std::vector<double> &hi_;
};

std::vector<double> two_loop(const std::deque<CurvaturePair> &memory,
                             const std::vector<double> &g,
                             const std::vector<char> &free) {
    const std::size_t n = g.size();
    std::vector<double> q(n);
    for (std::size_t i = 0; i < n; ++i) {
        q[i] = free[i] ? -g[i] : 0.0;
    }
    std::vector<double> alpha(memory.size());
    for (std::size_t k = memory.size(); k-- > 0;) {
        const auto &p = memory[k];
        double a = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (free[i]) {
                a += p.s[i] * q[i];
            }
        }
        a *= p.rho;
        alpha[k] = a;
        for (std::size_t i = 0; i < n; ++i) {
            if (free[i]) {
                q[i] -= a * p.y[i];
            }
        }
    }
    if (!memory.empty()) {
        const auto &last = memory.back();
        const double gamma = dot(last.s, last.y) / dot(last.y, last.y);
        for (double &v : q) {
            v *= gamma;
        }
    }
    for (std::size_t k = 0; k < memory.size(); ++k) {
        const auto &p = memory[k];
        double b = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (free[i]) {
                b += p.y[i] * q[i];
            }
        }
        b *= p.rho;
        for (std::size_t i = 0; i < n; ++i) {
            if (free[i]) {
                q[i] += p.s[i] * (alpha[k] - b);
            }
        }
    }
    return q;
}

} // namespace

LbfgsbResult minimize_bounded(const BoundedObjective &objective,
                              std::vector<double> x0,
                              const std::vector<double> &lower,
                              const std::vector<double> &upper,
                              const LbfgsbOptions &options) {
    const std::size_t n = x0.size();
    SQUEEZE_REQUIRE(lower.size() == n && upper.size() == n,
                    "bounds must match the parameter count");
    for (std::size_t i = 0; i < n; ++i) {
        SQUEEZE_REQUIRE(lower[i] <= upper[i], "lower bound exceeds upper bound");
    }
    SQUEEZE_REQUIRE(options.memory >= 1, "L-BFGS memory must be positive");

    const Box box(lower, upper);
    std::vector<double> x = std::move(x0);
    box.project(x);
    std::vector<double> g(n, 0.0);
    double f = objective(x, g);
    int evaluations = 1;

    std::deque<CurvaturePair> memory;
    std::vector<double> xn(n);
    std::vector<double> gn(n);
    std::vector<double> dx(n);
    LbfgsbStatus status = LbfgsbStatus::MaxIterations;
    int iter = 0;
    constexpr double c1 = 1e-4;

    for (; iter < options.max_iterations; ++iter) {
        if (box.projected_gradient_norm(x, g) <= options.gradient_tolerance) {
            status = LbfgsbStatus::Gradient;
            break;
        }
        const std::vector<char> free = box.free_mask(x, g);
        std::vector<double> d = two_loop(memory, g, free);
        double gd = dot(g, d);
        if (!(gd < 0.0)) {
            memory.clear();
            d = two_loop(memory, g, free);
            gd = dot(g, d);
        }
        double step = 1.0;
        if (memory.empty()) {
            double dmax = 0.0;
            for (double v : d) {
                dmax = std::max(dmax, std::abs(v));
            }
            if (dmax > 0.0) {
                step = std::min(1.0, 1.0 / dmax);
            }
        }

        bool accepted = false;
        double fn = f;
        for (int ls = 0; ls < options.max_line_search; ++ls) {
            for (std::size_t i = 0; i < n; ++i) {
                xn[i] = x[i] + step * d[i];
            }
            box.project(xn);
            double moved = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                dx[i] = xn[i] - x[i];
                moved = std::max(moved, std::abs(dx[i]));
            }
            if (moved == 0.0) {
                break;
            }
            fn = objective(xn, gn);
            ++evaluations;
            const double decrease = dot(g, dx);
            if (std::isfinite(fn) && fn <= f + c1 * decrease) {
                accepted = true;
                break;
            }
            // Safeguarded quadratic interpolation along the step.
            double next = 0.5 * step;
            if (std::isfinite(fn)) {
                const double denom = 2.0 * (fn - f - decrease);
                if (denom > 0.0) {
                    next = std::clamp(-decrease * step / denom, 0.1 * step,
                                      0.5 * step);
                }
            }
            step = next;
        }
        if (!accepted) {
            if (!memory.empty()) {
                memory.clear();
                continue;
            }
            status = LbfgsbStatus::LineSearchFailure;
            break;
        }

        CurvaturePair pair{std::vector<double>(n), std::vector<double>(n), 0.0};
        for (std::size_t i = 0; i < n; ++i) {
            pair.s[i] = xn[i] - x[i];
            pair.y[i] = gn[i] - g[i];
        }
        const double sy = dot(pair.s, pair.y);
        if (sy > std::numeric_limits<double>::epsilon() * dot(pair.y, pair.y)) {
            pair.rho = 1.0 / sy;
            memory.push_back(std::move(pair));
            if (static_cast<int>(memory.size()) > options.memory) {
                memory.pop_front();
            }
        }

        const double df = f - fn;
        const double scale = std::max({std::abs(f), std::abs(fn), 1.0});
        x.swap(xn);
        g.swap(gn);
        f = fn;
        if (df <= options.function_tolerance * scale) {
            status = LbfgsbStatus::Stagnation;
            ++iter;
            break;
        }
    }
    if (status == LbfgsbStatus::MaxIterations &&
        box.projected_gradient_norm(x, g) <= options.gradient_tolerance) {
        status = LbfgsbStatus::Gradient;
    }
    return {std::move(x), f, box.projected_gradient_norm(x, g), iter,
            evaluations, status};
}

} // namespace squeeze
