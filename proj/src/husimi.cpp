#include "squeeze/husimi.hpp"

#include <cmath>

namespace squeeze {

GaussLegendre gauss_legendre(int n) {
    SQUEEZE_REQUIRE(n >= 1, "Gauss-Legendre order must be positive");
    GaussLegendre gl{std::vector<double>(static_cast<std::size_t>(n)),
                     std::vector<double>(static_cast<std::size_t>(n))};
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Chebyshev-like starting guess for the i-th largest root.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) {
                p0 = 1.0;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) {
                break;
            }
        }
        // Recompute the derivative at the converged root.
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        if (n == 1) {
            p0 = 1.0;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        const auto lo = static_cast<std::size_t>(i);
        const auto hi = static_cast<std::size_t>(n - 1 - i);
        gl.nodes[lo] = -x;
        gl.nodes[hi] = x;
        gl.weights[lo] = w;
        gl.weights[hi] = w;
    }
    if (n % 2 == 1) {
        gl.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
    }
    return gl;
}

double HusimiGrid::normalization(double total_spin) const {
    double acc = 0.0;
    for (int i = 0; i < n_theta; ++i) {
        double row = 0.0;
        for (int j = 0; j < n_phi; ++j) {
            row += value(i, j);
        }
        acc += weight(i) * row;
    }
    return (2.0 * total_spin + 1.0) / (4.0 * std::numbers::pi) * acc;
}

namespace {

HusimiGrid husimi_impl(const SpinState &state, int n_theta, int n_phi,
                       bool parallel) {
    SQUEEZE_REQUIRE(n_theta >= 2 && n_phi >= 2, "Husimi grid needs at least 2x2");
    detail::require_normalized(state);
    const SpinSystemPtr &sys = state.system_ptr();
    const Index d = state.dim();

    HusimiGrid g;
    g.n_theta = n_theta;
    g.n_phi = n_phi;
    const GaussLegendre gl = gauss_legendre(n_theta);
    for (int i = 0; i < n_theta; ++i) {
        // theta ascending means cos(theta) descending.
        const auto k = static_cast<std::size_t>(n_theta - 1 - i);
        g.theta.push_back(std::acos(gl.nodes[k]));
        g.theta_weights.push_back(gl.weights[k]);
    }
    for (int j = 0; j < n_phi; ++j) {
        g.phi.push_back(2.0 * std::numbers::pi * j / n_phi);
    }
    g.values.assign(static_cast<std::size_t>(n_theta) * n_phi, 0.0);

    // |theta, phi>_m = |theta, 0>_m * exp(i (S - m) phi); S - m = d - 1 - index.
    Eigen::MatrixXcd phase(d, n_phi);
    for (int j = 0; j < n_phi; ++j) {
        for (Index i = 0; i < d; ++i) {
            phase(i, j) = std::polar(1.0, static_cast<double>(d - 1 - i) * g.phi[j]);
        }
    }
    const VectorXcd psi_conj = state.amplitudes().conjugate();

#pragma omp parallel for schedule(static) if (parallel)
    for (int i = 0; i < n_theta; ++i) {
        const VectorXcd a = coherent_state(sys, g.theta[static_cast<std::size_t>(i)], 0.0)
                                .amplitudes()
                                .cwiseProduct(psi_conj);
        for (int j = 0; j < n_phi; ++j) {
            const cplx ov = a.dot(phase.col(j).conjugate());
            g.values[static_cast<std::size_t>(i) * n_phi + j] = std::norm(ov);
        }
    }
    return g;
}

} // namespace

HusimiGrid husimi_grid(const SpinState &state, int n_theta, int n_phi) {
    return husimi_impl(state, n_theta, n_phi, true);
}

HusimiGrid husimi_grid_serial(const SpinState &state, int n_theta, int n_phi) {
    return husimi_impl(state, n_theta, n_phi, false);
}

} // namespace squeeze
