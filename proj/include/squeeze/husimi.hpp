#pragma once

#include "squeeze/dicke.hpp"

#include <numbers>
#include <vector>

namespace squeeze {

struct GaussLegendre {
    std::vector<double> nodes;   ///< ascending in [-1, 1]
    std::vector<double> weights; ///< sum to 2
};

GaussLegendre gauss_legendre(int n);

/**
 * Q(theta, phi) = |<psi|theta, phi>|^2 on a product grid.
 *
 * theta sits at Gauss-Legendre nodes in cos(theta), phi is uniform on
 * [0, 2 pi). weight(i, j) is the cos(theta) weight times 2 pi / n_phi, so
 * (2S + 1) / (4 pi) * sum weight * Q is exactly 1 once n_theta >= S + 1 and
 * n_phi >= 2S + 1.
 */
struct HusimiGrid {
    int n_theta = 0;
    int n_phi = 0;
    std::vector<double> theta;
    std::vector<double> phi;
    std::vector<double> theta_weights; ///< quadrature weight per theta row
    std::vector<double> values;        ///< row-major, theta-major

    [[nodiscard]] double value(int i, int j) const {
        return values[static_cast<std::size_t>(i) * n_phi + j];
    }
    [[nodiscard]] double weight(int i) const {
        return theta_weights[static_cast<std::size_t>(i)] * 2.0 *
               std::numbers::pi / n_phi;
    }
    /// (2S + 1) / (4 pi) * sum of weight * Q for a system of total spin S.
    [[nodiscard]] double normalization(double total_spin) const;
};

HusimiGrid husimi_grid(const SpinState &state, int n_theta, int n_phi);

/// Single-threaded reference for husimi_grid.
HusimiGrid husimi_grid_serial(const SpinState &state, int n_theta, int n_phi);

} // namespace squeeze
