#pragma once

#include "squeeze/dicke.hpp"

namespace squeeze {

/**
 * Extreme spin-squeezed state: the state of smallest Wineland parameter at a
 * fixed mean spin length, obtained as the ground state of
 *   H / chi = S_z^2 - (Omega/chi) S_x.
 * The mean spin points along +x and the squeezed axis is z.
 */
struct ExtremeSolution {
    SpinState state;
    double omega_over_chi;
    double achieved_contrast; ///< <S_x>/S
    double xi2;
    double ground_energy; ///< in units of chi
};

struct GroundState {
    SpinState state;
    double energy;
};

/// Ground state of S_z^2 - ratio * S_x, real with positive amplitudes.
GroundState ground_state(const SpinSystemPtr &system, double omega_over_chi);

/// <S_x>/S of the ground state at the given ratio.
double ground_state_contrast(const SpinSystemPtr &system, double omega_over_chi);

/**
 * Finds Omega/chi such that the ground-state contrast <S_x>/S matches the
 * target within `tolerance`, by bisection on log(Omega/chi).
 *
 * The search starts from [1e-6, 1e6] and widens by 1e3 per side up to four
 * times. Odd N cannot reach contrasts below roughly 1/2 + 1/(2N) (there is no
 * m = 0 ring state); such targets raise BracketFailure.
 */
ExtremeSolution solve_extreme(const SpinSystemPtr &system,
                              double target_contrast, double tolerance = 1e-10);

} // namespace squeeze
