#include "squeeze/pulse_sequence.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace squeeze {

PulseSequence::PulseSequence(std::vector<double> shears,
                             std::vector<double> angles)
    : shears_(std::move(shears)), angles_(std::move(angles)) {
    SQUEEZE_REQUIRE(shears_.size() == angles_.size(),
                    "a pulse sequence needs one rotation after each twist");
}

PulseSequence PulseSequence::from_parameters(std::span<const double> params) {
    SQUEEZE_REQUIRE(params.size() % 2 == 0,
                    "pulse parameter vector must have even length");
    std::vector<double> q;
    std::vector<double> mu;
    for (std::size_t i = 0; i < params.size(); i += 2) {
        q.push_back(params[i]);
        mu.push_back(params[i + 1]);
    }
    return {std::move(q), std::move(mu)};
}

PulseSequence PulseSequence::zeros(int n_pulses) {
    SQUEEZE_REQUIRE(n_pulses >= 2 && n_pulses % 2 == 0,
                    "n_pulses must be even and >= 2");
    const auto m = static_cast<std::size_t>(n_pulses / 2);
    return {std::vector<double>(m, 0.0), std::vector<double>(m, 0.0)};
}

std::vector<double> PulseSequence::parameters() const {
    std::vector<double> p;
    p.reserve(2 * shears_.size());
    for (std::size_t k = 0; k < shears_.size(); ++k) {
        p.push_back(shears_[k]);
        p.push_back(angles_[k]);
    }
    return p;
}

double PulseSequence::total_shear() const {
    double q = 0.0;
    for (double s : shears_) {
        q += std::abs(s);
    }
    return q;
}

double PulseSequence::normalized_shear(int n_atoms) const {
    return std::sqrt(static_cast<double>(n_atoms)) * total_shear();
}

PulseSequence PulseSequence::then(const PulseSequence &next) const {
    std::vector<double> q = shears_;
    std::vector<double> mu = angles_;
    q.insert(q.end(), next.shears_.begin(), next.shears_.end());
    mu.insert(mu.end(), next.angles_.begin(), next.angles_.end());
    return {std::move(q), std::move(mu)};
}

SpinState propagate(const SpinState &initial, const PulseSequence &sequence) {
    const SpinSystem &sys = initial.system();
    VectorXcd psi = initial.amplitudes();
    for (int k = 0; k < sequence.n_pairs(); ++k) {
        sys.twist_inplace(psi, sequence.shears()[k]);
        sys.rotate_inplace(psi, Axis::X, sequence.angles()[k]);
    }
    return SpinState::normalized(initial.system_ptr(), std::move(psi));
}

std::vector<SpinState> propagate_snapshots(const SpinState &initial,
                                           const PulseSequence &sequence) {
    const SpinSystem &sys = initial.system();
    std::vector<SpinState> out;
    VectorXcd psi = initial.amplitudes();
    for (int k = 0; k < sequence.n_pairs(); ++k) {
        sys.twist_inplace(psi, sequence.shears()[k]);
        out.push_back(SpinState::normalized(initial.system_ptr(), psi));
        sys.rotate_inplace(psi, Axis::X, sequence.angles()[k]);
        out.push_back(SpinState::normalized(initial.system_ptr(), psi));
    }
    return out;
}

double infidelity(const SpinState &state, const SpinState &target) {
    SQUEEZE_REQUIRE(state.dim() == target.dim(),
                    "infidelity needs states of the same dimension");
    detail::require_normalized(state);
    detail::require_normalized(target);
    const double f = std::norm(target.overlap(state));
    return std::clamp(1.0 - f, 0.0, 1.0);
}

double infidelity_and_gradient(const SpinSystem &sys, const VectorXcd &initial,
                               std::span<const double> shears,
                               std::span<const double> angles,
                               const VectorXcd &target,
                               std::span<double> grad_shears,
                               std::span<double> grad_angles) {
    const std::size_t m = shears.size();
    // states[j] = psi after pulse j (0-based over 2m pulses).
    std::vector<VectorXcd> states(2 * m);
    VectorXcd psi = initial;
    for (std::size_t k = 0; k < m; ++k) {
        sys.twist_inplace(psi, shears[k]);
        states[2 * k] = psi;
        sys.rotate_inplace(psi, Axis::X, angles[k]);
        states[2 * k + 1] = psi;
    }
    const cplx eta = target.dot(psi);
    const double eps = 1.0 - std::norm(eta);

    if (!grad_shears.empty() || !grad_angles.empty()) {
        const VectorXd m2 = sys.m_values().cwiseAbs2();
        VectorXcd lambda = target;
        VectorXcd gpsi;
        for (std::size_t kk = m; kk-- > 0;) {
            // Rotation pulse 2k+1.
            sys.apply(Observable::Sx, states[2 * kk + 1], gpsi);
            cplx deta = cplx{0.0, -1.0} * lambda.dot(gpsi);
            grad_angles[kk] = -2.0 * std::real(std::conj(eta) * deta);
            sys.rotate_inplace(lambda, Axis::X, -angles[kk]);
            // Twist pulse 2k.
            gpsi = m2.cwiseProduct(states[2 * kk]);
            deta = cplx{0.0, -1.0} * lambda.dot(gpsi);
            grad_shears[kk] = -2.0 * std::real(std::conj(eta) * deta);
            sys.twist_inplace(lambda, -shears[kk]);
        }
    }
    return eps;
}

InfidelityGradient infidelity_gradient(const SpinState &initial,
                                       const PulseSequence &sequence,
                                       const SpinState &target) {
    SQUEEZE_REQUIRE(initial.dim() == target.dim(),
                    "initial and target states differ in dimension");
    detail::require_normalized(initial);
    detail::require_normalized(target);
    const auto m = static_cast<std::size_t>(sequence.n_pairs());
    std::vector<double> gq(m);
    std::vector<double> gm(m);
    const double eps = infidelity_and_gradient(
        initial.system(), initial.amplitudes(), sequence.shears(),
        sequence.angles(), target.amplitudes(), gq, gm);
    std::vector<double> grad;
    grad.reserve(2 * m);
    for (std::size_t k = 0; k < m; ++k) {
        grad.push_back(gq[k]);
        grad.push_back(gm[k]);
    }
    return {std::clamp(eps, 0.0, 1.0), std::move(grad)};
}

EchoReport echo_oat(const SpinSystemPtr &system, const CavityEchoSpec &spec) {
    SQUEEZE_REQUIRE(system != nullptr, "echo_oat requires a system");
    SQUEEZE_REQUIRE(std::isfinite(spec.alpha) && std::isfinite(spec.chi_t),
                    "echo parameters must be finite");
    const SpinSystem &sys = *system;
    const double s = sys.total_spin();
    const Index d = sys.dim();
    const VectorXd &m = sys.m_values();

    auto arm = [&](VectorXcd &psi) {
        for (Index i = 0; i < d; ++i) {
            const double h = spec.alpha * (m[i] + s) - spec.chi_t * m[i] * m[i];
            psi[i] *= std::polar(1.0, -h);
        }
    };

    std::vector<VectorXcd> probes;
    for (Index i = 0; i < d; ++i) {
        probes.push_back(VectorXcd::Unit(d, i));
    }
    for (double theta : {0.3, 1.1, 0.5 * std::numbers::pi, 2.4}) {
        probes.push_back(coherent_state(system, theta, 0.7 * theta).amplitudes());
    }
    std::mt19937_64 rng(0x5eedULL);
    std::normal_distribution<double> gauss;
    for (int r = 0; r < 4; ++r) {
        VectorXcd v(d);
        for (Index i = 0; i < d; ++i) {
            v[i] = cplx{gauss(rng), gauss(rng)};
        }
        probes.push_back(v.normalized());
    }

    const double predicted =
        std::remainder(-2.0 * spec.alpha * s, 2.0 * std::numbers::pi);
    const cplx expected = std::polar(1.0, predicted);
    EchoReport rep{0.0, 0.0, 0.0, predicted, static_cast<int>(probes.size())};
    bool first = true;
    for (const VectorXcd &p : probes) {
        VectorXcd composed = p;
        arm(composed);
        sys.rotate_inplace(composed, Axis::X, std::numbers::pi);
        arm(composed);

        VectorXcd reference = p;
        sys.twist_inplace(reference, -2.0 * spec.chi_t);
        sys.rotate_inplace(reference, Axis::X, std::numbers::pi);

        const cplx ov = reference.dot(composed);
        rep.max_deviation = std::max(rep.max_deviation, std::abs(1.0 - std::abs(ov)));
        rep.phase_deviation = std::max(rep.phase_deviation, std::abs(ov - expected));
        if (first) {
            rep.measured_phase = std::arg(ov);
            first = false;
        }
    }
    return rep;
}

} // namespace squeeze
