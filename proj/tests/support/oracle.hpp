#pragma once

// Dense reference implementations used as test oracles. They build the spin
// matrices from the ladder-operator formula directly and exponentiate with
// Eigen's general matrix exponential, sharing no code with the library.

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <complex>
#include <random>

namespace oracle {

using cplx = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

struct SpinMatrices {
    MatrixXcd sx, sy, sz;
};

inline SpinMatrices spin_matrices(int n) {
    const double s = 0.5 * n;
    const int d = n + 1;
    MatrixXcd sp = MatrixXcd::Zero(d, d);
    for (int i = 0; i + 1 < d; ++i) {
        const double m = i - s;
        sp(i + 1, i) = std::sqrt((s - m) * (s + m + 1.0));
    }
    const MatrixXcd sm = sp.adjoint();
    SpinMatrices out;
    out.sx = 0.5 * (sp + sm);
    out.sy = (sp - sm) / cplx(0.0, 2.0);
    out.sz = MatrixXcd::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        out.sz(i, i) = i - s;
    }
    return out;
}

/// exp(-i * angle * h) for Hermitian h.
inline MatrixXcd expm_i(const MatrixXcd &h, double angle) {
    const MatrixXcd a = cplx(0.0, -angle) * h;
    return a.exp();
}

inline double fidelity(const VectorXcd &a, const VectorXcd &b) {
    return std::norm(a.dot(b));
}

inline VectorXcd random_state(int d, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    VectorXcd v(d);
    for (int i = 0; i < d; ++i) {
        v[i] = cplx(g(rng), g(rng));
    }
    return v.normalized();
}

inline double expect(const VectorXcd &psi, const MatrixXcd &op) {
    return psi.dot(op * psi).real();
}

/// Wineland parameter by brute force: minimum perpendicular variance found by
/// scanning the angle in the plane normal to the mean spin.
inline double xi2_scan(const VectorXcd &psi, int n, int steps = 20000) {
    const SpinMatrices m = spin_matrices(n);
    const Eigen::Vector3d mean(expect(psi, m.sx), expect(psi, m.sy), expect(psi, m.sz));
    const Eigen::Vector3d nhat = mean.normalized();
    Eigen::Vector3d a = std::abs(nhat[2]) < 0.9 ? Eigen::Vector3d::UnitZ()
                                                : Eigen::Vector3d::UnitX();
    const Eigen::Vector3d u = (a - a.dot(nhat) * nhat).normalized();
    const Eigen::Vector3d v = nhat.cross(u);
    double best = 1e300;
    // Variance along cos(t) u + sin(t) v is a quadratic form in (cos t, sin t);
    // evaluate its three coefficients once and scan t.
    auto op = [&](const Eigen::Vector3d &w) {
        return MatrixXcd(w[0] * m.sx + w[1] * m.sy + w[2] * m.sz);
    };
    const MatrixXcd su = op(u);
    const MatrixXcd sv = op(v);
    const double eu = expect(psi, su), ev = expect(psi, sv);
    const double vuu = expect(psi, su * su) - eu * eu;
    const double vvv = expect(psi, sv * sv) - ev * ev;
    const double cuv = 0.5 * expect(psi, su * sv + sv * su) - eu * ev;
    for (int k = 0; k < steps; ++k) {
        const double t = M_PI * k / steps;
        const double c = std::cos(t), s = std::sin(t);
        best = std::min(best, c * c * vuu + s * s * vvv + 2.0 * s * c * cuv);
    }
    return best * n / mean.squaredNorm();
}

} // namespace oracle
