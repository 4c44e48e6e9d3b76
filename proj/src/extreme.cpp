#include "squeeze/extreme.hpp"

#include "squeeze/metrology.hpp"
#include "squeeze/tridiagonal.hpp"

#include <cmath>

namespace squeeze {

namespace {

struct RealGround {
    VectorXd vector;
    double energy;
};

RealGround real_ground_state(const SpinSystem &sys, double ratio) {
    const VectorXd diag = sys.m_values().cwiseAbs2();
    const VectorXd off = -ratio * sys.sx_offdiag();
    TridiagonalEigenpair pair = lowest_eigenpair(diag, off);
    // Largest-magnitude amplitude made real positive. With negative
    // off-diagonals the ground state has one sign throughout.
    Index k = 0;
    pair.vector.cwiseAbs().maxCoeff(&k);
    if (pair.vector[k] < 0.0) {
        pair.vector = -pair.vector;
    }
    return {std::move(pair.vector), pair.value};
}

double contrast_of(const SpinSystem &sys, const VectorXd &v) {
    const VectorXd &off = sys.sx_offdiag();
    double sx = 0.0;
    for (Index i = 0; i + 1 < v.size(); ++i) {
        sx += 2.0 * off[i] * v[i] * v[i + 1];
    }
    return sx / sys.total_spin();
}

} // namespace

GroundState ground_state(const SpinSystemPtr &system, double omega_over_chi) {
    SQUEEZE_REQUIRE(system != nullptr, "ground_state requires a system");
    SQUEEZE_REQUIRE(omega_over_chi > 0.0 && std::isfinite(omega_over_chi),
                    "Omega/chi must be positive");
    RealGround g = real_ground_state(*system, omega_over_chi);
    return {SpinState::normalized(system, g.vector.cast<cplx>()), g.energy};
}

double ground_state_contrast(const SpinSystemPtr &system,
                             double omega_over_chi) {
    SQUEEZE_REQUIRE(system != nullptr, "ground_state requires a system");
    SQUEEZE_REQUIRE(omega_over_chi > 0.0 && std::isfinite(omega_over_chi),
                    "Omega/chi must be positive");
    return contrast_of(*system, real_ground_state(*system, omega_over_chi).vector);
}

ExtremeSolution solve_extreme(const SpinSystemPtr &system,
                              double target_contrast, double tolerance) {
    SQUEEZE_REQUIRE(system != nullptr, "solve_extreme requires a system");
    SQUEEZE_REQUIRE(target_contrast > 0.0 && target_contrast < 1.0,
                    "target contrast must lie strictly inside (0, 1)");
    SQUEEZE_REQUIRE(tolerance > 0.0, "tolerance must be positive");
    const SpinSystem &sys = *system;

    auto contrast_at = [&](double log_ratio) {
        return contrast_of(sys, real_ground_state(sys, std::exp(log_ratio)).vector);
    };

    double lo = std::log(1e-6);
    double hi = std::log(1e6);
    const double widen = std::log(1e3);
    for (int k = 0; contrast_at(lo) > target_contrast; ++k) {
        if (k == 4) {
            throw BracketFailure("target contrast is below the reachable range "
                                 "for this atom number");
        }
        lo -= widen;
    }
    for (int k = 0; contrast_at(hi) < target_contrast; ++k) {
        if (k == 4) {
            throw BracketFailure("target contrast is above the reachable range "
                                 "for this atom number");
        }
        hi += widen;
    }

    double mid = 0.5 * (lo + hi);
    double c = contrast_at(mid);
    for (int it = 0; it < 400 && std::abs(c - target_contrast) > tolerance;
         ++it) {
        if (c < target_contrast) {
            lo = mid;
        } else {
            hi = mid;
        }
        const double next = 0.5 * (lo + hi);
        if (next == lo || next == hi) {
            break;
        }
        mid = next;
        c = contrast_at(mid);
    }
    if (std::abs(c - target_contrast) > tolerance) {
        throw NumericalFailure("contrast bisection stalled before reaching the "
                               "requested tolerance");
    }

    const double ratio = std::exp(mid);
    GroundState g = ground_state(system, ratio);
    const double xi2 = wineland_xi2(g.state).xi2;
    return {std::move(g.state), ratio, c, xi2, g.energy};
}

} // namespace squeeze
