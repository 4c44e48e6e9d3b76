#pragma once

#include "squeeze/dicke.hpp"

#include <span>
#include <vector>

namespace squeeze {

/**
 * Alternating one-axis-twisting / x-rotation sequence
 *   exp(-i mu_n S_x) exp(-i Q_{n-1} S_z^2) ... exp(-i mu_2 S_x) exp(-i Q_1 S_z^2).
 *
 * Stored as pairs (Q_k, mu_k); the first pulse is always a twist and the last
 * a rotation, so n_pulses is even. Flat parameter vectors interleave the
 * pairs in application order: [Q_1, mu_2, Q_3, mu_4, ...].
 */
class PulseSequence {
  public:
    PulseSequence() = default;
    PulseSequence(std::vector<double> shears, std::vector<double> angles);
    static PulseSequence from_parameters(std::span<const double> params);
    static PulseSequence zeros(int n_pulses);

    [[nodiscard]] int n_pulses() const noexcept {
        return 2 * static_cast<int>(shears_.size());
    }
    [[nodiscard]] int n_pairs() const noexcept {
        return static_cast<int>(shears_.size());
    }
    [[nodiscard]] const std::vector<double> &shears() const noexcept {
        return shears_;
    }
    [[nodiscard]] const std::vector<double> &angles() const noexcept {
        return angles_;
    }
    [[nodiscard]] std::vector<double> parameters() const;

    /// Sum of |Q_k|: photon scattering accrues regardless of the sign of chi.
    [[nodiscard]] double total_shear() const;
    /// sqrt(N) * total_shear().
    [[nodiscard]] double normalized_shear(int n_atoms) const;

    /// This sequence followed by `next`.
    [[nodiscard]] PulseSequence then(const PulseSequence &next) const;

    bool operator==(const PulseSequence &) const = default;

  private:
    std::vector<double> shears_;
    std::vector<double> angles_;
};

SpinState propagate(const SpinState &initial, const PulseSequence &sequence);

/// State after every individual pulse (2 * n_pairs entries).
std::vector<SpinState> propagate_snapshots(const SpinState &initial,
                                           const PulseSequence &sequence);

/// 1 - |<state|target>|^2.
double infidelity(const SpinState &state, const SpinState &target);

struct InfidelityGradient {
    double epsilon;
    std::vector<double> gradient; ///< interleaved like PulseSequence::parameters
};

/**
 * Infidelity and its gradient with respect to every Q_k and mu_k.
 *
 * One forward sweep keeps the intermediate states; one backward sweep carries
 * the target through the adjoint pulses. For pulse j with generator G_j,
 *   d eta / d theta_j = <lambda_j| -i G_j |psi_j>,  d eps = -2 Re(conj(eta) d eta).
 */
InfidelityGradient infidelity_gradient(const SpinState &initial,
                                       const PulseSequence &sequence,
                                       const SpinState &target);

/// Same as infidelity_gradient on raw vectors, for the optimizer hot loop.
double infidelity_and_gradient(const SpinSystem &system, const VectorXcd &initial,
                               std::span<const double> shears,
                               std::span<const double> angles,
                               const VectorXcd &target,
                               std::span<double> grad_shears,
                               std::span<double> grad_angles);

/// Cavity Hamiltonian alpha (S_z + S) - chi_t S_z^2 accumulated over one arm.
struct CavityEchoSpec {
    double alpha; ///< accumulated z-rotation coefficient (dimensionless)
    double chi_t; ///< accumulated chi * t
};

struct EchoReport {
    /// max over probes of |1 - |<ref psi|composed psi>||.
    double max_deviation;
    /// max over probes of |<ref psi|composed psi> - exp(i predicted_phase)|.
    double phase_deviation;
    /// arg of the overlap on the first probe.
    double measured_phase;
    /// -2 alpha S (mod 2 pi): the alpha (S_z + S) term survives only as this.
    double predicted_phase;
    int n_probes;
};

/**
 * Spin-echo construction of OAT: checks U R U = e^{-2i alpha S} R exp(+2i chi_t S_z^2)
 * with U = exp(-i[alpha(S_z+S) - chi_t S_z^2]) and R = exp(-i pi S_x).
 *
 * Probes: all Dicke basis states, several coherent states, and seeded random
 * states (the latter catch relative phases basis states cannot).
 */
EchoReport echo_oat(const SpinSystemPtr &system, const CavityEchoSpec &spec);

} // namespace squeeze
