#include "squeeze/tridiagonal.hpp"

#include "squeeze/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace squeeze {

namespace {

using Eigen::Index;
using Eigen::VectorXd;

double inf_norm(const VectorXd &d, const VectorXd &e) {
    double best = 0.0;
    const Index n = d.size();
    for (Index i = 0; i < n; ++i) {
        double row = std::abs(d[i]);
        if (i > 0) {
            row += std::abs(e[i - 1]);
        }
        if (i + 1 < n) {
            row += std::abs(e[i]);
        }
        best = std::max(best, row);
    }
    return best;
}

// Solves (T - shift I) x = b in place with partial pivoting (dgttrf/dgttrs).
void shifted_solve(const VectorXd &d, const VectorXd &e, double shift,
                   double tiny, VectorXd &b) {
    const Index n = d.size();
    if (n == 1) {
        double piv = d[0] - shift;
        if (std::abs(piv) < tiny) {
            piv = tiny;
        }
        b[0] /= piv;
        return;
    }
    // Row i of the factor keeps up to three entries: diag u0, super u1, u2.
    VectorXd u0(n), u1(n), u2 = VectorXd::Zero(n), low(n);
    std::vector<bool> swapped(n, false);
    VectorXd diag = d.array() - shift;
    VectorXd sup(n), sub(n);
    for (Index i = 0; i + 1 < n; ++i) {
        sup[i] = e[i];
        sub[i] = e[i];
    }
    sup[n - 1] = 0.0;
    for (Index i = 0; i + 1 < n; ++i) {
        if (std::abs(diag[i]) >= std::abs(sub[i])) {
            double piv = diag[i];
            if (std::abs(piv) < tiny) {
                piv = tiny;
            }
            const double f = sub[i] / piv;
            u0[i] = piv;
            u1[i] = sup[i];
            u2[i] = 0.0;
            low[i] = f;
            diag[i + 1] -= f * sup[i];
        } else {
            swapped[i] = true;
            const double f = diag[i] / sub[i];
            u0[i] = sub[i];
            u1[i] = diag[i + 1];
            u2[i] = (i + 2 < n) ? sup[i + 1] : 0.0;
            low[i] = f;
            diag[i + 1] = sup[i] - f * diag[i + 1];
            if (i + 2 < n) {
                sup[i + 1] = -f * sup[i + 1];
            }
        }
    }
    u0[n - 1] = std::abs(diag[n - 1]) < tiny ? tiny : diag[n - 1];
    // Forward substitution with the recorded row swaps.
    for (Index i = 0; i + 1 < n; ++i) {
        if (swapped[i]) {
            std::swap(b[i], b[i + 1]);
        }
        b[i + 1] -= low[i] * b[i];
    }
    // Back substitution.
    b[n - 1] /= u0[n - 1];
    if (n >= 2) {
        b[n - 2] = (b[n - 2] - u1[n - 2] * b[n - 1]) / u0[n - 2];
    }
    for (Index i = n - 3; i >= 0; --i) {
        b[i] = (b[i] - u1[i] * b[i + 1] - u2[i] * b[i + 2]) / u0[i];
    }
}

double residual_norm(const VectorXd &d, const VectorXd &e, double lambda,
                     const VectorXd &v) {
    const Index n = d.size();
    double acc = 0.0;
    for (Index i = 0; i < n; ++i) {
        double r = (d[i] - lambda) * v[i];
        if (i > 0) {
            r += e[i - 1] * v[i - 1];
        }
        if (i + 1 < n) {
            r += e[i] * v[i + 1];
        }
        acc += r * r;
    }
    return std::sqrt(acc);
}

} // namespace

int sturm_count(const VectorXd &diag, const VectorXd &offdiag, double x) {
    const Index n = diag.size();
    const double tiny = std::numeric_limits<double>::min();
    int count = 0;
    double q = diag[0] - x;
    for (Index i = 0;; ++i) {
        if (q == 0.0) {
            q = -tiny;
        }
        if (q < 0.0) {
            ++count;
        }
        if (i + 1 >= n) {
            break;
        }
        q = (diag[i + 1] - x) - offdiag[i] * offdiag[i] / q;
    }
    return count;
}

TridiagonalEigenpair lowest_eigenpair(const VectorXd &diag,
                                      const VectorXd &offdiag) {
    const Index n = diag.size();
    SQUEEZE_REQUIRE(n >= 1, "empty tridiagonal matrix");
    SQUEEZE_REQUIRE(offdiag.size() == n - 1,
                    "off-diagonal length must be n - 1");
    const double norm = inf_norm(diag, offdiag);

    // Gershgorin bracket.
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (Index i = 0; i < n; ++i) {
        double r = 0.0;
        if (i > 0) {
            r += std::abs(offdiag[i - 1]);
        }
        if (i + 1 < n) {
            r += std::abs(offdiag[i]);
        }
        lo = std::min(lo, diag[i] - r);
        hi = std::max(hi, diag[i] + r);
    }
    const double eps = std::numeric_limits<double>::epsilon();
    lo -= eps * norm + std::numeric_limits<double>::min();
    hi += eps * norm + std::numeric_limits<double>::min();
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        if (sturm_count(diag, offdiag, mid) >= 1) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    double lambda = 0.5 * (lo + hi);

    const double tiny = eps * std::max(norm, 1.0);
    VectorXd v = VectorXd::Ones(n) / std::sqrt(static_cast<double>(n));
    double res = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 8; ++it) {
        shifted_solve(diag, offdiag, lambda, tiny, v);
        const double vn = v.norm();
        if (!std::isfinite(vn) || vn == 0.0) {
            throw NumericalFailure("inverse iteration broke down");
        }
        v /= vn;
        res = residual_norm(diag, offdiag, lambda, v);
        if (it >= 1 && res <= 1e-13 * std::max(norm, 1.0)) {
            break;
        }
    }
    // Rayleigh quotient polishes the value against the final vector.
    double rq = 0.0;
    for (Index i = 0; i < n; ++i) {
        double tv = diag[i] * v[i];
        if (i > 0) {
            tv += offdiag[i - 1] * v[i - 1];
        }
        if (i + 1 < n) {
            tv += offdiag[i] * v[i + 1];
        }
        rq += v[i] * tv;
    }
    const double res_rq = residual_norm(diag, offdiag, rq, v);
    if (res_rq < res) {
        lambda = rq;
        res = res_rq;
    }
    if (res > 1e-10 * std::max(norm, 1.0)) {
        throw NumericalFailure("tridiagonal eigenpair residual too large");
    }
    return {lambda, std::move(v), res};
}

} // namespace squeeze
