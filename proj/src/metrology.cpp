#include "squeeze/metrology.hpp"

#include <cmath>
#include <numbers>

namespace squeeze {

namespace {

constexpr double kHalfPi = 0.5 * std::numbers::pi;

// Active SO(3) rotation matching exp(-i angle S_axis): <S> -> R <S>.
Axis readout_generator(ReadoutAxis readout) {
    return readout == ReadoutAxis::X ? Axis::X : Axis::Y;
}

} // namespace

MetrologyReport wineland_xi2(const SpinState &state) {
    const Vector3d mean = mean_spin_vector(state);
    const double s = state.system().total_spin();
    if (mean.norm() <= 1e-9 * s) {
        throw DegenerateMeanSpin("mean spin vanishes; xi^2 is undefined");
    }
    const PerpendicularVariance pv = min_perpendicular_variance(state);
    const double xi2 =
        pv.value * state.system().n_atoms() / mean.squaredNorm();
    return {xi2, gain_db(xi2), mean, pv.value, pv.direction, mean.norm() / s};
}

double gain_db(double xi2) {
    SQUEEZE_REQUIRE(xi2 > 0.0, "gain requires xi2 > 0");
    return -10.0 * std::log10(xi2);
}

double contrast_loss(const LossModel &model, double q_tilde) {
    SQUEEZE_REQUIRE(q_tilde >= 0.0, "normalized shear must be non-negative");
    SQUEEZE_REQUIRE(model.gamma >= 0.0, "gamma must be non-negative");
    return std::exp(-model.gamma * q_tilde);
}

double corrected_xi2(double xi2, double c_sc) {
    SQUEEZE_REQUIRE(xi2 > 0.0, "xi2 must be positive");
    SQUEEZE_REQUIRE(c_sc > 0.0 && c_sc <= 1.0, "contrast must be in (0, 1]");
    return xi2 / (c_sc * c_sc);
}

SpinState apply_rotations(const SpinState &state, const RotationSequence &seq) {
    VectorXcd psi = state.amplitudes();
    for (const auto &r : seq) {
        state.system().rotate_inplace(psi, r.axis, r.angle);
    }
    return SpinState::normalized(state.system_ptr(), std::move(psi));
}

RotationSequence readout_alignment(const SpinState &state, ReadoutAxis readout) {
    const MetrologyReport rep = wineland_xi2(state);
    const Vector3d n = rep.mean_spin.normalized();
    Vector3d u = rep.squeezed_direction.vec();
    u = (u - u.dot(n) * n).normalized();

    const Vector3d a =
        readout == ReadoutAxis::X ? Vector3d::UnitX() : Vector3d::UnitY();
    const Vector3d b =
        readout == ReadoutAxis::X ? Vector3d::UnitY() : Vector3d::UnitX();
    Eigen::Matrix3d from;
    from << n, u, n.cross(u);
    Eigen::Matrix3d to;
    to << a, b, a.cross(b);
    const Eigen::Matrix3d r = to * from.transpose();

    // r = Rz(alpha) Ry(beta) Rz(gamma); gamma is applied first.
    const double beta = std::acos(std::clamp(r(2, 2), -1.0, 1.0));
    double alpha = 0.0;
    double gamma = 0.0;
    if (std::sin(beta) > 1e-12) {
        alpha = std::atan2(r(1, 2), r(0, 2));
        gamma = std::atan2(r(2, 1), -r(2, 0));
    } else if (r(2, 2) > 0.0) {
        alpha = std::atan2(r(1, 0), r(0, 0));
    } else {
        alpha = std::atan2(-r(1, 0), -r(0, 0));
    }
    return {{Axis::Z, gamma}, {Axis::Y, beta}, {Axis::Z, alpha}};
}

SpinState ramsey_final_state(const SpinState &input, double phase,
                             ReadoutAxis readout) {
    VectorXcd psi = input.amplitudes();
    input.system().rotate_inplace(psi, Axis::Z, phase);
    input.system().rotate_inplace(psi, readout_generator(readout), kHalfPi);
    return SpinState::normalized(input.system_ptr(), std::move(psi));
}

double ramsey_signal(const SpinState &input, double phase,
                     ReadoutAxis readout) {
    return expectation(ramsey_final_state(input, phase, readout),
                       Observable::Sz);
}

double ramsey_slope(const SpinState &input, double phase, ReadoutAxis readout) {
    constexpr double h = 1e-5;
    auto central = [&](double step) {
        return (ramsey_signal(input, phase + step, readout) -
                ramsey_signal(input, phase - step, readout)) /
               (2.0 * step);
    };
    const double coarse = central(h);
    const double fine = central(0.5 * h);
    return (4.0 * fine - coarse) / 3.0;
}

double ramsey_slope_analytic(const SpinState &input, double phase,
                             ReadoutAxis readout) {
    const SpinState fin = ramsey_final_state(input, phase, readout);
    const SpinSystem &sys = input.system();
    const VectorXcd &f = fin.amplitudes();
    // B = R S_z R^dag, R the closing pulse; apply B to f.
    VectorXcd bf = f;
    const Axis gen = readout_generator(readout);
    sys.rotate_inplace(bf, gen, -kHalfPi);
    bf = sys.m_values().cwiseProduct(bf);
    sys.rotate_inplace(bf, gen, kHalfPi);
    const VectorXcd zf = sys.m_values().cwiseProduct(f);
    return -2.0 * bf.dot(zf).imag();
}

double ramsey_sensitivity(const SpinState &input, double phase,
                          ReadoutAxis readout) {
    detail::require_normalized(input);
    const double slope = ramsey_slope_analytic(input, phase, readout);
    const double s = input.system().total_spin();
    if (std::abs(slope) < 1e-12 * s) {
        throw DivergentSensitivity(
            "fringe slope vanishes at this phase; sensitivity diverges");
    }
    const SpinState fin = ramsey_final_state(input, phase, readout);
    const double sd = std::sqrt(variance(fin, Direction::z()));
    return std::abs(sd / slope);
}

} // namespace squeeze
