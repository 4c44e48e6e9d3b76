#include "squeeze/extreme.hpp"
#include "squeeze/metrology.hpp"
#include "squeeze/optimizer.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace squeeze;
using Catch::Matchers::WithinAbs;

TEST_CASE("restart seeds are distinct and reproducible") {
    CHECK(restart_seed(1, 0) == restart_seed(1, 0));
    CHECK(restart_seed(1, 0) != restart_seed(1, 1));
    CHECK(restart_seed(1, 1) != restart_seed(2, 1));
}

TEST_CASE("target equal to the initial state needs no pulses") {
    for (int n : {3, 20, 64}) {
        const auto sys = build_system(n);
        OptimizationConfig cfg;
        cfg.n_pulses = 2;
        cfg.n_starts = 3;
        const OptimizedSequence r = optimize_free(sys, sequence_initial_state(sys), cfg);
        CHECK(r.epsilon <= 1e-10);
        CHECK(r.converged);
    }
}

TEST_CASE("free optimization at N = 20") {
    const auto sys = build_system(20);
    const ExtremeSolution target = solve_extreme(sys, 0.9);
    OptimizationConfig cfg;
    cfg.n_pulses = 4;
    cfg.n_starts = 8;
    const OptimizedSequence r = optimize_free(sys, target, cfg);
    CHECK(r.epsilon < 1e-3);
    const double again = infidelity(propagate(sequence_initial_state(sys), r.sequence), target.state);
    CHECK_THAT(again, WithinAbs(r.epsilon, 1e-12));
    CHECK_THAT(r.q_tilde, WithinAbs(std::sqrt(20.0) * r.sequence.total_shear(), 1e-14));
    for (double q : r.sequence.shears()) {
        CHECK(std::abs(q) <= cfg.q_max);
    }
    for (double mu : r.sequence.angles()) {
        CHECK(std::abs(mu) <= cfg.mu_max);
    }
}

TEST_CASE("optimization is deterministic and thread independent") {
    const auto sys = build_system(24);
    const ExtremeSolution target = solve_extreme(sys, 0.7);
    OptimizationConfig cfg;
    cfg.n_pulses = 4;
    cfg.n_starts = 6;
    cfg.seed = 42;
    const auto a = run_restarts(sys, target.state, cfg);
    const auto b = run_restarts(sys, target.state, cfg);
    cfg.parallel = false;
    const auto c = run_restarts(sys, target.state, cfg);
    REQUIRE(a.size() == 6);
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(a[k].parameters == b[k].parameters);
        CHECK(a[k].parameters == c[k].parameters);
        CHECK(a[k].epsilon == c[k].epsilon);
        CHECK(a[k].start_index == static_cast<int>(k));
    }
}

TEST_CASE("best epsilon is non-increasing in the number of starts") {
    const auto sys = build_system(30);
    const ExtremeSolution target = solve_extreme(sys, 0.6);
    OptimizationConfig cfg;
    cfg.n_pulses = 4;
    cfg.seed = 9;
    double prev = 2.0;
    for (int starts : {1, 2, 4, 8}) {
        cfg.n_starts = starts;
        const OptimizedSequence r = optimize_free(sys, target, cfg);
        CHECK(r.epsilon <= prev);
        prev = r.epsilon;
    }
}

TEST_CASE("best restart breaks ties by index") {
    std::vector<RestartOutcome> runs{{0, {}, 0.5, true, 1},
                                     {1, {}, 0.1, true, 1},
                                     {2, {}, 0.1, true, 1}};
    CHECK(best_restart(runs).start_index == 1);
    CHECK_THROWS_AS(best_restart({}), InvalidArgument);
}

TEST_CASE("fixed shear holds the constraint exactly") {
    const auto sys = build_system(40);
    const ExtremeSolution target = solve_extreme(sys, 0.9);
    for (double qt : {0.2, 0.55, 1.3}) {
        OptimizationConfig cfg;
        cfg.n_pulses = 4;
        cfg.n_starts = 6;
        cfg.fixed_q_tilde = qt;
        const OptimizedSequence r = optimize_fixed_shear(sys, target, cfg);
        CHECK_THAT(r.q_tilde, WithinAbs(qt, 1e-10));
        CHECK(r.epsilon >= 0.0);
        CHECK(r.epsilon <= 1.0);
    }
}

TEST_CASE("fixed-shear fidelity improves with shear") {
    const auto sys = build_system(100);
    const ExtremeSolution target = solve_extreme(sys, 0.9);
    OptimizationConfig cfg;
    cfg.n_pulses = 4;
    cfg.n_starts = 8;
    double prev = 1.0;
    for (double qt : {0.1, 0.2, 0.3, 0.4}) {
        cfg.fixed_q_tilde = qt;
        const double eps = optimize_fixed_shear(sys, target, cfg).epsilon;
        CHECK(eps < prev);
        prev = eps;
    }
}

TEST_CASE("zero shear cannot squeeze") {
    const auto sys = build_system(16);
    const ExtremeSolution target = solve_extreme(sys, 0.9);
    OptimizationConfig cfg;
    cfg.n_pulses = 4;
    cfg.n_starts = 3;
    cfg.fixed_q_tilde = 0.0;
    const OptimizedSequence r = optimize_fixed_shear(sys, target, cfg);
    for (double q : r.sequence.shears()) {
        CHECK(q == 0.0);
    }
    CHECK(r.xi2_generated >= 1.0 - 1e-10);
}

TEST_CASE("configuration validation") {
    const auto sys = build_system(10);
    const SpinState t = sequence_initial_state(sys);
    OptimizationConfig cfg;
    cfg.n_pulses = 3;
    CHECK_THROWS_AS(optimize_free(sys, t, cfg), InvalidArgument);
    cfg.n_pulses = 4;
    cfg.n_starts = 0;
    CHECK_THROWS_AS(optimize_free(sys, t, cfg), InvalidArgument);
    cfg.n_starts = 2;
    CHECK_THROWS_AS(optimize_fixed_shear(sys, t, cfg), InvalidArgument);
    cfg.fixed_q_tilde = -1.0;
    CHECK_THROWS_AS(optimize_fixed_shear(sys, t, cfg), InvalidArgument);
    const auto other = build_system(11);
    CHECK_THROWS_AS(optimize_free(other, t, OptimizationConfig{}), InvalidArgument);
}
