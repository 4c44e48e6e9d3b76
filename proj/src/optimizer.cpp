#include "squeeze/optimizer.hpp"

#include "squeeze/lbfgsb.hpp"
#include "squeeze/metrology.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace squeeze {

namespace {

constexpr double kLogitBound = 30.0;

void validate(const SpinSystemPtr &system, const SpinState &target,
              const OptimizationConfig &config) {
    SQUEEZE_REQUIRE(system != nullptr, "optimizer requires a system");
    SQUEEZE_REQUIRE(target.dim() == system->dim(),
                    "target belongs to a different system");
    SQUEEZE_REQUIRE(config.n_pulses >= 2 && config.n_pulses % 2 == 0,
                    "n_pulses must be even and >= 2");
    SQUEEZE_REQUIRE(config.n_starts >= 1, "n_starts must be >= 1");
    SQUEEZE_REQUIRE(config.max_iterations >= 1, "max_iterations must be >= 1");
    SQUEEZE_REQUIRE(config.gradient_tolerance > 0.0,
                    "gradient tolerance must be positive");
    SQUEEZE_REQUIRE(config.q_max > 0.0 && config.mu_max > 0.0,
                    "parameter bounds must be positive");
    if (config.fixed_q_tilde) {
        SQUEEZE_REQUIRE(*config.fixed_q_tilde >= 0.0 &&
                            std::isfinite(*config.fixed_q_tilde),
                        "fixed normalized shear must be non-negative");
    }
}

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

void softmax(std::span<const double> z, std::vector<double> &w) {
    double zmax = -std::numeric_limits<double>::infinity();
    for (double v : z) {
        zmax = std::max(zmax, v);
    }
    double sum = 0.0;
    w.resize(z.size());
    for (std::size_t k = 0; k < z.size(); ++k) {
        w[k] = std::exp(z[k] - zmax);
        sum += w[k];
    }
    for (double &v : w) {
        v /= sum;
    }
}

RestartOutcome run_free(const SpinSystem &sys, const VectorXcd &initial,
                        const VectorXcd &target, const OptimizationConfig &cfg,
                        int k) {
    const auto m = static_cast<std::size_t>(cfg.n_pulses / 2);
    std::vector<double> x0(2 * m, 0.01);
    if (k > 0) {
        std::mt19937_64 rng(restart_seed(cfg.seed, k));
        const double q_scale =
            std::min(cfg.q_max, 2.0 / std::sqrt(static_cast<double>(sys.n_atoms())));
        std::uniform_real_distribution<double> uq(-q_scale, q_scale);
        std::uniform_real_distribution<double> um(-std::numbers::pi,
                                                  std::numbers::pi);
        for (std::size_t j = 0; j < m; ++j) {
            x0[2 * j] = uq(rng);
            x0[2 * j + 1] = um(rng);
        }
    }
    std::vector<double> lo(2 * m);
    std::vector<double> hi(2 * m);
    for (std::size_t j = 0; j < m; ++j) {
        lo[2 * j] = -cfg.q_max;
        hi[2 * j] = cfg.q_max;
        lo[2 * j + 1] = -cfg.mu_max;
        hi[2 * j + 1] = cfg.mu_max;
    }

    std::vector<double> q(m), mu(m), gq(m), gm(m);
    auto objective = [&](std::span<const double> x, std::span<double> g) {
        for (std::size_t j = 0; j < m; ++j) {
            q[j] = x[2 * j];
            mu[j] = x[2 * j + 1];
        }
        const double eps =
            infidelity_and_gradient(sys, initial, q, mu, target, gq, gm);
        for (std::size_t j = 0; j < m; ++j) {
            g[2 * j] = gq[j];
            g[2 * j + 1] = gm[j];
        }
        return eps;
    };
    LbfgsbOptions opt;
    opt.max_iterations = cfg.max_iterations;
    opt.gradient_tolerance = cfg.gradient_tolerance;
    const LbfgsbResult r = minimize_bounded(objective, x0, lo, hi, opt);
    return {k, r.x, r.f, r.converged(), r.iterations};
}

RestartOutcome run_fixed(const SpinSystem &sys, const VectorXcd &initial,
                         const VectorXcd &target, const OptimizationConfig &cfg,
                         int k) {
    const auto m = static_cast<std::size_t>(cfg.n_pulses / 2);
    const double q_total =
        *cfg.fixed_q_tilde / std::sqrt(static_cast<double>(sys.n_atoms()));
    std::vector<double> sign(m, 1.0);
    const std::size_t patterns = m < 63 ? (std::size_t{1} << m) : 0;
    const std::size_t pattern =
        patterns == 0 ? static_cast<std::size_t>(k) : static_cast<std::size_t>(k) % patterns;
    for (std::size_t j = 0; j < m; ++j) {
        if ((pattern >> j) & 1U) {
            sign[j] = -1.0;
        }
    }

    // x = [z_1, mu_1, z_2, mu_2, ...] with softmax logits z.
    std::vector<double> x0(2 * m);
    if (static_cast<std::size_t>(k) < patterns) {
        for (std::size_t j = 0; j < m; ++j) {
            x0[2 * j] = 0.0;
            x0[2 * j + 1] = 0.01;
        }
    } else {
        std::mt19937_64 rng(restart_seed(cfg.seed, k));
        std::normal_distribution<double> gz;
        std::uniform_real_distribution<double> um(-std::numbers::pi,
                                                  std::numbers::pi);
        for (std::size_t j = 0; j < m; ++j) {
            x0[2 * j] = gz(rng);
            x0[2 * j + 1] = um(rng);
        }
    }
    std::vector<double> lo(2 * m);
    std::vector<double> hi(2 * m);
    for (std::size_t j = 0; j < m; ++j) {
        lo[2 * j] = -kLogitBound;
        hi[2 * j] = kLogitBound;
        lo[2 * j + 1] = -cfg.mu_max;
        hi[2 * j + 1] = cfg.mu_max;
    }

    std::vector<double> z(m), w(m), q(m), mu(m), gq(m), gm(m);
    auto shears_from = [&](std::span<const double> x) {
        for (std::size_t j = 0; j < m; ++j) {
            z[j] = x[2 * j];
            mu[j] = x[2 * j + 1];
        }
        softmax(z, w);
        for (std::size_t j = 0; j < m; ++j) {
            q[j] = sign[j] * q_total * w[j];
        }
    };
    auto objective = [&](std::span<const double> x, std::span<double> g) {
        shears_from(x);
        const double eps =
            infidelity_and_gradient(sys, initial, q, mu, target, gq, gm);
        // dQ_k/dz_j = sign_k Q w_k (delta_kj - w_j)
        double weighted = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            weighted += sign[j] * gq[j] * w[j];
        }
        for (std::size_t j = 0; j < m; ++j) {
            g[2 * j] = q_total * w[j] * (sign[j] * gq[j] - weighted);
            g[2 * j + 1] = gm[j];
        }
        return eps;
    };
    LbfgsbOptions opt;
    opt.max_iterations = cfg.max_iterations;
    opt.gradient_tolerance = cfg.gradient_tolerance;
    const LbfgsbResult r = minimize_bounded(objective, x0, lo, hi, opt);

    shears_from(r.x);
    std::vector<double> params(2 * m);
    for (std::size_t j = 0; j < m; ++j) {
        params[2 * j] = q[j];
        params[2 * j + 1] = mu[j];
    }
    return {k, std::move(params), r.f, r.converged(), r.iterations};
}

} // namespace

std::uint64_t restart_seed(std::uint64_t seed, int start_index) {
    return splitmix64(seed + static_cast<std::uint64_t>(start_index + 1) *
                                 0x9E3779B97F4A7C15ULL);
}

SpinState sequence_initial_state(const SpinSystemPtr &system) {
    return coherent_state(system, 0.5 * std::numbers::pi, 0.0);
}

std::vector<RestartOutcome> run_restarts(const SpinSystemPtr &system,
                                         const SpinState &target,
                                         const OptimizationConfig &config) {
    validate(system, target, config);
    const SpinSystem &sys = *system;
    const VectorXcd initial = sequence_initial_state(system).amplitudes();
    const VectorXcd &tgt = target.amplitudes();
    std::vector<RestartOutcome> runs(static_cast<std::size_t>(config.n_starts));
    auto one = [&](int k) {
        return config.fixed_q_tilde ? run_fixed(sys, initial, tgt, config, k)
                                    : run_free(sys, initial, tgt, config, k);
    };
    if (config.parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (int k = 0; k < config.n_starts; ++k) {
            runs[static_cast<std::size_t>(k)] = one(k);
        }
    } else {
        for (int k = 0; k < config.n_starts; ++k) {
            runs[static_cast<std::size_t>(k)] = one(k);
        }
    }
    return runs;
}

const RestartOutcome &best_restart(const std::vector<RestartOutcome> &runs) {
    SQUEEZE_REQUIRE(!runs.empty(), "no restarts to reduce");
    const RestartOutcome *best = &runs.front();
    for (const auto &r : runs) {
        if (r.epsilon < best->epsilon ||
            (r.epsilon == best->epsilon && r.start_index < best->start_index)) {
            best = &r;
        }
    }
    return *best;
}

OptimizedSequence summarize(const SpinSystemPtr &system, const RestartOutcome &run) {
    PulseSequence seq = PulseSequence::from_parameters(run.parameters);
    const SpinState generated = propagate(sequence_initial_state(system), seq);
    double xi2 = std::numeric_limits<double>::quiet_NaN();
    try {
        xi2 = wineland_xi2(generated).xi2;
    } catch (const DegenerateMeanSpin &) {
    }
    // Report the objective value restarts were ranked by; a fresh propagation
    // agrees to rounding but could reorder near-ties.
    const double qt = seq.normalized_shear(system->n_atoms());
    return {std::move(seq), run.epsilon, xi2, qt, run.start_index, run.converged,
            run.iterations};
}

OptimizedSequence optimize_free(const SpinSystemPtr &system,
                                const SpinState &target,
                                const OptimizationConfig &config) {
    OptimizationConfig cfg = config;
    cfg.fixed_q_tilde.reset();
    const auto runs = run_restarts(system, target, cfg);
    return summarize(system, best_restart(runs));
}

OptimizedSequence optimize_free(const SpinSystemPtr &system,
                                const ExtremeSolution &target,
                                const OptimizationConfig &config) {
    return optimize_free(system, target.state, config);
}

OptimizedSequence optimize_fixed_shear(const SpinSystemPtr &system,
                                       const SpinState &target,
                                       const OptimizationConfig &config) {
    SQUEEZE_REQUIRE(config.fixed_q_tilde.has_value(),
                    "fixed-shear optimization needs fixed_q_tilde");
    const auto runs = run_restarts(system, target, config);
    return summarize(system, best_restart(runs));
}

OptimizedSequence optimize_fixed_shear(const SpinSystemPtr &system,
                                       const ExtremeSolution &target,
                                       const OptimizationConfig &config) {
    return optimize_fixed_shear(system, target.state, config);
}

} // namespace squeeze
