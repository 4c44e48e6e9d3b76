#pragma once

#include "squeeze/dicke.hpp"

#include <vector>

namespace squeeze {

/// Wineland squeezing parameter and the quantities it is built from.
struct MetrologyReport {
    double xi2;
    double gain_db; ///< -10 log10(xi2)
    Vector3d mean_spin;
    double min_perp_variance;
    Direction squeezed_direction;
    double contrast; ///< |<S>|/S
};

/// xi^2 = N * min_perp Var(S_u) / |<S>|^2. Throws DegenerateMeanSpin.
MetrologyReport wineland_xi2(const SpinState &state);

/// Metrological gain in dB, -10 log10(xi2).
double gain_db(double xi2);

/// Photon-scattering contrast loss C_sc = exp(-gamma * q_tilde).
struct LossModel {
    double gamma = 0.36;
};

double contrast_loss(const LossModel &model, double q_tilde);

/// Loss-corrected squeezing xi^2 / C_sc^2.
double corrected_xi2(double xi2, double c_sc);

// Ramsey interferometer ----------------------------------------------------

/// Axis of the closing pi/2 pulse.
enum class ReadoutAxis { X, Y };

struct AxisRotation {
    Axis axis;
    double angle;
};

/// Rotations applied in order, each exp(-i angle S_axis).
using RotationSequence = std::vector<AxisRotation>;

SpinState apply_rotations(const SpinState &state, const RotationSequence &seq);

/**
 * Pre-free-evolution alignment for a given readout.
 *
 * Returns z-y-z Euler rotations that carry the mean spin onto the axis that
 * is phase-sensitive at phi = 0 (+x for X readout, +y for Y readout) and the
 * squeezed direction onto the axis the readout maps to S_z (y resp. x).
 */
RotationSequence readout_alignment(const SpinState &state, ReadoutAxis readout);

/// State after free evolution exp(-i phase S_z) and the closing pi/2 pulse.
SpinState ramsey_final_state(const SpinState &input, double phase,
                             ReadoutAxis readout);

/// <S_z> of the final state.
double ramsey_signal(const SpinState &input, double phase, ReadoutAxis readout);

/// d<S_z>/dphi by central differences (h = 1e-5) with one Richardson level.
double ramsey_slope(const SpinState &input, double phase, ReadoutAxis readout);

/// d<S_z>/dphi from the commutator form <final| i[R S_z R^dag, S_z] |final>.
double ramsey_slope_analytic(const SpinState &input, double phase,
                             ReadoutAxis readout);

/**
 * Phase sensitivity |Delta S_z / (d<S_z>/dphi)| of the final state.
 *
 * `input` is the state entering free evolution; apply readout_alignment
 * first when the squeezed axis is not already oriented for the readout.
 * Throws DivergentSensitivity when |slope| < 1e-12 S.
 */
double ramsey_sensitivity(const SpinState &input, double phase,
                          ReadoutAxis readout);

} // namespace squeeze
