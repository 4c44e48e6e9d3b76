#pragma once

#include "squeeze/extreme.hpp"
#include "squeeze/pulse_sequence.hpp"

#include <cstdint>
#include <numbers>
#include <optional>
#include <vector>

namespace squeeze {

struct OptimizationConfig {
    int n_pulses = 4;
    int max_iterations = 3000;
    double gradient_tolerance = 1e-9;
    int n_starts = 20;
    std::uint64_t seed = 1;
    double q_max = 10.0;                      ///< |Q_k| bound
    double mu_max = 2.0 * std::numbers::pi;   ///< |mu_k| bound
    std::optional<double> fixed_q_tilde;
    /// Run restarts through the OpenMP loop; false uses the serial reference.
    bool parallel = true;
};

struct OptimizedSequence {
    PulseSequence sequence;
    double epsilon;
    double xi2_generated; ///< Wineland parameter of the generated state
    double q_tilde;       ///< sqrt(N) * sum |Q_k|
    int start_index;
    bool converged;
    int iterations;
};

/// Per-restart outcome, kept so callers can inspect the landscape.
struct RestartOutcome {
    int start_index;
    std::vector<double> parameters; ///< interleaved [Q_1, mu_2, ...]
    double epsilon;
    bool converged;
    int iterations;
};

/**
 * Stream seed for restart k: splitmix64(seed + (k + 1) * 0x9E3779B97F4A7C15).
 *
 * Each restart owns an independent std::mt19937_64 seeded this way, so a
 * restart's result does not depend on n_starts or on thread scheduling.
 */
std::uint64_t restart_seed(std::uint64_t seed, int start_index);

/// The initial CSS along +x that every sequence starts from.
SpinState sequence_initial_state(const SpinSystemPtr &system);

/**
 * Best-of-n_starts bounded quasi-Newton minimization of the infidelity to
 * `target`, with Q_k and mu_k free inside the configured box.
 *
 * Start 0 uses Q_k = mu_k = 0.01. Later starts draw Q_k uniformly from
 * [-2/sqrt(N), 2/sqrt(N)] and mu_k from [-pi, pi].
 */
OptimizedSequence optimize_free(const SpinSystemPtr &system,
                                const SpinState &target,
                                const OptimizationConfig &config);
OptimizedSequence optimize_free(const SpinSystemPtr &system,
                                const ExtremeSolution &target,
                                const OptimizationConfig &config);

/**
 * Same objective with sum_k |Q_k| pinned to fixed_q_tilde / sqrt(N).
 *
 * |Q_k| = w_k Q with softmax weights w_k of free logits, so the constraint
 * holds by construction. The signs of the Q_k are discrete; restart k uses
 * sign pattern (k mod 2^m), bit j negative, so every pattern is explored
 * once n_starts >= 2^m. Rotation angles stay free.
 */
OptimizedSequence optimize_fixed_shear(const SpinSystemPtr &system,
                                       const SpinState &target,
                                       const OptimizationConfig &config);
OptimizedSequence optimize_fixed_shear(const SpinSystemPtr &system,
                                       const ExtremeSolution &target,
                                       const OptimizationConfig &config);

/// All restarts, in start order, for either mode (fixed when fixed_q_tilde set).
std::vector<RestartOutcome> run_restarts(const SpinSystemPtr &system,
                                         const SpinState &target,
                                         const OptimizationConfig &config);

/// Lowest epsilon, ties to the lower start index.
const RestartOutcome &best_restart(const std::vector<RestartOutcome> &runs);

/// Re-propagates the parameters for xi^2; epsilon is the restart's own value.
OptimizedSequence summarize(const SpinSystemPtr &system, const RestartOutcome &run);

} // namespace squeeze
