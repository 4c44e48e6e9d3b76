#pragma once
/**
 * @file
 * Collective spin algebra on the symmetric (Dicke) subspace of N two-level
 * atoms.
 *
 * Basis index i in [0, N] is the Dicke state |S, m> with m = i - S, so S_z is
 * diagonal and ascending. S_x and S_y are tridiagonal and never stored densely
 * on the hot path; dense copies are produced on request for tests.
 *
 * Coherent spin states follow the convention
 *   <m|theta, phi> = sqrt(C(2S, S+m)) cos(theta/2)^(S+m) sin(theta/2)^(S-m)
 *                    * exp(+i (S-m) phi),
 * i.e. |theta, phi> = exp(-i phi S_z) exp(-i theta S_y) |S, +S> up to a global
 * phase. Its mean spin points along (sin th cos ph, sin th sin ph, cos th).
 */

#include "squeeze/errors.hpp"

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <memory>
#include <span>
#include <vector>

namespace squeeze {

using cplx = std::complex<double>;
using Eigen::Index;
using Eigen::Vector3d;
using Eigen::VectorXcd;
using Eigen::VectorXd;

enum class Axis { X, Y, Z };
enum class Observable { Sx, Sy, Sz, Sz2 };

/// Unit vector in spin space.
class Direction {
  public:
    /// Rejects vectors whose norm differs from one by more than 1e-12.
    explicit Direction(const Vector3d &unit);
    static Direction normalized(const Vector3d &v);
    static Direction x() { return Direction(Vector3d::UnitX()); }
    static Direction y() { return Direction(Vector3d::UnitY()); }
    static Direction z() { return Direction(Vector3d::UnitZ()); }

    [[nodiscard]] const Vector3d &vec() const noexcept { return v_; }
    [[nodiscard]] double operator[](int i) const { return v_[i]; }

  private:
    Vector3d v_;
};

/**
 * Immutable operator cache for N atoms. Safe to share between threads.
 *
 * Holds the S_z spectrum, the ladder coefficients defining S_x/S_y, and the
 * eigendecomposition of S_x used to apply x and y rotations.
 */
class SpinSystem {
  public:
    explicit SpinSystem(int n_atoms);

    [[nodiscard]] int n_atoms() const noexcept { return n_atoms_; }
    [[nodiscard]] double total_spin() const noexcept { return 0.5 * n_atoms_; }
    [[nodiscard]] Index dim() const noexcept { return n_atoms_ + 1; }

    /// m values, ascending from -S to +S.
    [[nodiscard]] const VectorXd &m_values() const noexcept { return m_; }
    /// <m+1| S_x |m> for i = 0..dim-2 (half the raising-operator element).
    [[nodiscard]] const VectorXd &sx_offdiag() const noexcept { return sx_off_; }

    /// out = O * in, using the tridiagonal/diagonal structure.
    void apply(Observable op, const VectorXcd &in, VectorXcd &out) const;
    [[nodiscard]] VectorXcd apply(Observable op, const VectorXcd &in) const;
    /// out = (u . S) * in.
    void apply_component(const Vector3d &u, const VectorXcd &in,
                         VectorXcd &out) const;

    /// Dense Hermitian matrix of an observable.
    [[nodiscard]] Eigen::MatrixXcd dense(Observable op) const;

    /// psi <- exp(-i angle S_axis) psi.
    void rotate_inplace(VectorXcd &psi, Axis axis, double angle) const;
    /// psi <- exp(-i shear S_z^2) psi.
    void twist_inplace(VectorXcd &psi, double shear) const;

    [[nodiscard]] const Eigen::MatrixXd &sx_eigenvectors() const noexcept {
        return sx_vectors_;
    }
    [[nodiscard]] const VectorXd &sx_eigenvalues() const noexcept {
        return sx_values_;
    }

  private:
    void rotate_x_inplace(VectorXcd &psi, double angle) const;
    void phase_z_inplace(VectorXcd &psi, double angle) const;

    int n_atoms_;
    VectorXd m_;
    VectorXd sx_off_;
    Eigen::MatrixXd sx_vectors_;
    VectorXd sx_values_;
};

using SpinSystemPtr = std::shared_ptr<const SpinSystem>;

/// Builds and caches the operators for N atoms. Rejects N < 1.
SpinSystemPtr build_system(int n_atoms);

/// Normalized pure state on the Dicke subspace of a given system.
class SpinState {
  public:
    /// Rejects wrong dimension or a norm off by more than 1e-10.
    SpinState(SpinSystemPtr system, VectorXcd amplitudes);
    /// Rescales to unit norm; rejects the zero vector.
    static SpinState normalized(SpinSystemPtr system, VectorXcd amplitudes);
    /// Dicke state |S, m>.
    static SpinState dicke(SpinSystemPtr system, double m);

    [[nodiscard]] const SpinSystem &system() const noexcept { return *system_; }
    [[nodiscard]] const SpinSystemPtr &system_ptr() const noexcept {
        return system_;
    }
    [[nodiscard]] const VectorXcd &amplitudes() const noexcept { return amps_; }
    [[nodiscard]] Index dim() const noexcept { return amps_.size(); }

    /// <this|other>.
    [[nodiscard]] cplx overlap(const SpinState &other) const;

  private:
    SpinSystemPtr system_;
    VectorXcd amps_;
};

SpinState coherent_state(const SpinSystemPtr &system, double theta, double phi);

double expectation(const SpinState &state, Observable op);
double variance(const SpinState &state, const Direction &direction);
SpinState rotate(const SpinState &state, Axis axis, double angle);
Vector3d mean_spin_vector(const SpinState &state);

struct PerpendicularVariance {
    double value;
    Direction direction;
};

/**
 * Smallest variance of S_u over unit vectors u perpendicular to <S>.
 *
 * Diagonalizes the 2x2 symmetrized covariance matrix in an orthonormal pair
 * spanning the plane normal to the mean spin. Throws DegenerateMeanSpin when
 * |<S>| <= 1e-9 S.
 */
PerpendicularVariance min_perpendicular_variance(const SpinState &state);

/// Orthonormal pair (u, v) with u, v perpendicular to n and u x v = n.
std::pair<Vector3d, Vector3d> perpendicular_basis(const Vector3d &n);

namespace detail {
void require_normalized(const SpinState &state);
double log_binomial(double n, double k);
} // namespace detail

} // namespace squeeze
