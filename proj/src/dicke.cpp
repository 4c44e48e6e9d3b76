#include "squeeze/dicke.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

namespace squeeze {

namespace {

constexpr double kNormTolerance = 1e-10;

// Real matrix times complex vector, done as one real GEMM on [Re | Im].
void real_times_complex(const Eigen::MatrixXd &a, bool transpose,
                        const VectorXcd &x, VectorXcd &out) {
    Eigen::Matrix<double, Eigen::Dynamic, 2> xs(x.size(), 2);
    xs.col(0) = x.real();
    xs.col(1) = x.imag();
    Eigen::Matrix<double, Eigen::Dynamic, 2> ys =
        transpose ? (a.transpose() * xs).eval() : (a * xs).eval();
    out.resize(ys.rows());
    out.real() = ys.col(0);
    out.imag() = ys.col(1);
}

} // namespace

Direction::Direction(const Vector3d &unit) : v_(unit) {
    SQUEEZE_REQUIRE(std::abs(unit.norm() - 1.0) <= 1e-12,
                    "Direction must be a unit vector");
}

Direction Direction::normalized(const Vector3d &v) {
    const double n = v.norm();
    SQUEEZE_REQUIRE(n > 0.0 && std::isfinite(n),
                    "cannot normalize a zero or non-finite direction");
    return Direction(v / n);
}

SpinSystem::SpinSystem(int n_atoms) : n_atoms_(n_atoms) {
    SQUEEZE_REQUIRE(n_atoms >= 1, "n_atoms must be >= 1");
    const Index d = dim();
    const double s = total_spin();
    m_.resize(d);
    for (Index i = 0; i < d; ++i) {
        m_[i] = static_cast<double>(i) - s;
    }
    sx_off_.resize(d - 1);
    for (Index i = 0; i + 1 < d; ++i) {
        const double m = m_[i];
        sx_off_[i] = 0.5 * std::sqrt(s * (s + 1.0) - m * (m + 1.0));
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(VectorXd::Zero(d), sx_off_,
                                  Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) {
        throw NumericalFailure("S_x eigendecomposition failed");
    }
    sx_vectors_ = solver.eigenvectors();
    sx_values_ = solver.eigenvalues();
}

void SpinSystem::apply(Observable op, const VectorXcd &in,
                       VectorXcd &out) const {
    const Index d = dim();
    out.resize(d);
    switch (op) {
    case Observable::Sz:
        out = m_.cwiseProduct(in);
        return;
    case Observable::Sz2:
        out = m_.cwiseAbs2().cwiseProduct(in);
        return;
    case Observable::Sx:
        for (Index i = 0; i < d; ++i) {
            cplx acc{0.0, 0.0};
            if (i > 0) {
                acc += sx_off_[i - 1] * in[i - 1];
            }
            if (i + 1 < d) {
                acc += sx_off_[i] * in[i + 1];
            }
            out[i] = acc;
        }
        return;
    case Observable::Sy:
        // S_y = (S_+ - S_-) / 2i; S_+ raises i -> i+1.
        for (Index i = 0; i < d; ++i) {
            cplx acc{0.0, 0.0};
            if (i > 0) {
                acc += sx_off_[i - 1] * in[i - 1];
            }
            if (i + 1 < d) {
                acc -= sx_off_[i] * in[i + 1];
            }
            out[i] = cplx{0.0, -1.0} * acc;
        }
        return;
    }
}

VectorXcd SpinSystem::apply(Observable op, const VectorXcd &in) const {
    VectorXcd out;
    apply(op, in, out);
    return out;
}

void SpinSystem::apply_component(const Vector3d &u, const VectorXcd &in,
                                 VectorXcd &out) const {
    const Index d = dim();
    out.resize(d);
    // u.S = (u_x - i u_y) S_+/2 + (u_x + i u_y) S_-/2 + u_z S_z
    const cplx from_below{u[0], -u[1]};
    const cplx from_above{u[0], u[1]};
    for (Index i = 0; i < d; ++i) {
        cplx acc = u[2] * m_[i] * in[i];
        if (i > 0) {
            acc += from_below * sx_off_[i - 1] * in[i - 1];
        }
        if (i + 1 < d) {
            acc += from_above * sx_off_[i] * in[i + 1];
        }
        out[i] = acc;
    }
}

Eigen::MatrixXcd SpinSystem::dense(Observable op) const {
    const Index d = dim();
    Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(d, d);
    VectorXcd e = VectorXcd::Zero(d);
    VectorXcd col;
    for (Index j = 0; j < d; ++j) {
        e.setZero();
        e[j] = 1.0;
        apply(op, e, col);
        mat.col(j) = col;
    }
    return mat;
}

void SpinSystem::phase_z_inplace(VectorXcd &psi, double angle) const {
    for (Index i = 0; i < psi.size(); ++i) {
        psi[i] *= std::polar(1.0, -angle * m_[i]);
    }
}

void SpinSystem::rotate_x_inplace(VectorXcd &psi, double angle) const {
    VectorXcd coeffs;
    real_times_complex(sx_vectors_, true, psi, coeffs);
    for (Index k = 0; k < coeffs.size(); ++k) {
        coeffs[k] *= std::polar(1.0, -angle * sx_values_[k]);
    }
    real_times_complex(sx_vectors_, false, coeffs, psi);
}

void SpinSystem::rotate_inplace(VectorXcd &psi, Axis axis, double angle) const {
    switch (axis) {
    case Axis::Z:
        phase_z_inplace(psi, angle);
        return;
    case Axis::X:
        rotate_x_inplace(psi, angle);
        return;
    case Axis::Y: {
        // exp(-i a S_y) = D exp(-i a S_x) D^dag with D = exp(-i pi/2 S_z).
        constexpr double quarter = 0.5 * std::numbers::pi;
        phase_z_inplace(psi, -quarter);
        rotate_x_inplace(psi, angle);
        phase_z_inplace(psi, quarter);
        return;
    }
    }
}

void SpinSystem::twist_inplace(VectorXcd &psi, double shear) const {
    for (Index i = 0; i < psi.size(); ++i) {
        psi[i] *= std::polar(1.0, -shear * m_[i] * m_[i]);
    }
}

SpinSystemPtr build_system(int n_atoms) {
    return std::make_shared<const SpinSystem>(n_atoms);
}

SpinState::SpinState(SpinSystemPtr system, VectorXcd amplitudes)
    : system_(std::move(system)), amps_(std::move(amplitudes)) {
    SQUEEZE_REQUIRE(system_ != nullptr, "SpinState requires a system");
    SQUEEZE_REQUIRE(amps_.size() == system_->dim(),
                    "amplitude vector length must equal N+1");
    SQUEEZE_REQUIRE(std::abs(amps_.norm() - 1.0) <= kNormTolerance,
                    "SpinState amplitudes must be normalized");
}

SpinState SpinState::normalized(SpinSystemPtr system, VectorXcd amplitudes) {
    const double n = amplitudes.norm();
    SQUEEZE_REQUIRE(n > 0.0 && std::isfinite(n),
                    "cannot normalize a zero amplitude vector");
    amplitudes /= n;
    return SpinState(std::move(system), std::move(amplitudes));
}

SpinState SpinState::dicke(SpinSystemPtr system, double m) {
    SQUEEZE_REQUIRE(system != nullptr, "SpinState requires a system");
    const double idx = m + system->total_spin();
    const auto i = static_cast<Index>(std::llround(idx));
    SQUEEZE_REQUIRE(std::abs(idx - static_cast<double>(i)) < 1e-12 && i >= 0 &&
                        i < system->dim(),
                    "m must be one of -S, -S+1, ..., S");
    VectorXcd amps = VectorXcd::Zero(system->dim());
    amps[i] = 1.0;
    return SpinState(std::move(system), std::move(amps));
}

cplx SpinState::overlap(const SpinState &other) const {
    SQUEEZE_REQUIRE(dim() == other.dim(), "states live in different systems");
    return amps_.dot(other.amps_);
}

namespace detail {

void require_normalized(const SpinState &state) {
    SQUEEZE_REQUIRE(std::abs(state.amplitudes().norm() - 1.0) <= kNormTolerance,
                    "state is not normalized");
}

double log_binomial(double n, double k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
           std::lgamma(n - k + 1.0);
}

} // namespace detail

SpinState coherent_state(const SpinSystemPtr &system, double theta,
                         double phi) {
    SQUEEZE_REQUIRE(system != nullptr, "coherent_state requires a system");
    const double s = system->total_spin();
    const double two_s = 2.0 * s;
    const double c = std::cos(0.5 * theta);
    const double sn = std::sin(0.5 * theta);
    const double log_c = std::log(std::abs(c));
    const double log_s = std::log(std::abs(sn));
    const Index d = system->dim();
    VectorXcd amps(d);
    for (Index i = 0; i < d; ++i) {
        const double up = static_cast<double>(i); // S + m
        const double down = two_s - up;           // S - m
        double log_mag = 0.5 * detail::log_binomial(two_s, up);
        // 0 * log(0) is taken as 0 so the poles come out exact.
        if (up > 0.0) {
            log_mag += up * log_c;
        }
        if (down > 0.0) {
            log_mag += down * log_s;
        }
        double sign = 1.0;
        if (c < 0.0 && static_cast<long>(up) % 2 == 1) {
            sign = -sign;
        }
        if (sn < 0.0 && static_cast<long>(down) % 2 == 1) {
            sign = -sign;
        }
        amps[i] = sign * std::polar(std::exp(log_mag), down * phi);
    }
    return SpinState::normalized(system, std::move(amps));
}

double expectation(const SpinState &state, Observable op) {
    detail::require_normalized(state);
    const VectorXcd o = state.system().apply(op, state.amplitudes());
    const cplx v = state.amplitudes().dot(o);
    if (std::abs(v.imag()) > 1e-10 * (1.0 + std::abs(v.real()))) {
        throw NumericalFailure("expectation value has a non-negligible "
                               "imaginary part");
    }
    return v.real();
}

double variance(const SpinState &state, const Direction &direction) {
    detail::require_normalized(state);
    VectorXcd su;
    state.system().apply_component(direction.vec(), state.amplitudes(), su);
    const double mean = state.amplitudes().dot(su).real();
    return std::max(0.0, su.squaredNorm() - mean * mean);
}

SpinState rotate(const SpinState &state, Axis axis, double angle) {
    VectorXcd psi = state.amplitudes();
    state.system().rotate_inplace(psi, axis, angle);
    return SpinState::normalized(state.system_ptr(), std::move(psi));
}

Vector3d mean_spin_vector(const SpinState &state) {
    return {expectation(state, Observable::Sx),
            expectation(state, Observable::Sy),
            expectation(state, Observable::Sz)};
}

std::pair<Vector3d, Vector3d> perpendicular_basis(const Vector3d &n) {
    // Seed with the axis least aligned with n.
    Index k = 0;
    n.cwiseAbs().minCoeff(&k);
    Vector3d seed = Vector3d::Zero();
    seed[k] = 1.0;
    Vector3d u = (seed - seed.dot(n) * n).normalized();
    Vector3d v = n.cross(u);
    return {u, v};
}

PerpendicularVariance min_perpendicular_variance(const SpinState &state) {
    detail::require_normalized(state);
    const Vector3d mean = mean_spin_vector(state);
    const double s = state.system().total_spin();
    if (mean.norm() <= 1e-9 * s) {
        throw DegenerateMeanSpin("mean spin vanishes; perpendicular plane is "
                                 "undefined");
    }
    const auto [u, v] = perpendicular_basis(mean.normalized());
    const SpinSystem &sys = state.system();
    const VectorXcd &psi = state.amplitudes();
    VectorXcd su;
    VectorXcd sv;
    sys.apply_component(u, psi, su);
    sys.apply_component(v, psi, sv);
    const double mu = psi.dot(su).real();
    const double mv = psi.dot(sv).real();
    const double var_u = su.squaredNorm() - mu * mu;
    const double var_v = sv.squaredNorm() - mv * mv;
    const double cov = su.dot(sv).real() - mu * mv;

    Eigen::Matrix2d c;
    c << var_u, cov, cov, var_v;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(c);
    const Eigen::Vector2d w = eig.eigenvectors().col(0);
    return {std::max(0.0, eig.eigenvalues()[0]),
            Direction::normalized(w[0] * u + w[1] * v)};
}

} // namespace squeeze
