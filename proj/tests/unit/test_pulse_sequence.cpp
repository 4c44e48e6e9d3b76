#include "oracle.hpp"
#include "squeeze/extreme.hpp"
#include "squeeze/optimizer.hpp"
#include "squeeze/pulse_sequence.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

using namespace squeeze;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const double kPi = std::numbers::pi;

PulseSequence random_sequence(int n_pulses, int n_atoms, std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> uq(-2.0 / std::sqrt(n_atoms), 2.0 / std::sqrt(n_atoms));
    std::uniform_real_distribution<double> um(-kPi, kPi);
    std::vector<double> q, mu;
    for (int k = 0; k < n_pulses / 2; ++k) {
        q.push_back(uq(rng));
        mu.push_back(um(rng));
    }
    return {q, mu};
}

VectorXcd dense_propagate(int n, const VectorXcd &v, const PulseSequence &seq) {
    const auto m = oracle::spin_matrices(n);
    VectorXcd psi = v;
    for (int k = 0; k < seq.n_pairs(); ++k) {
        psi = oracle::expm_i(m.sz * m.sz, seq.shears()[k]) * psi;
        psi = oracle::expm_i(m.sx, seq.angles()[k]) * psi;
    }
    return psi;
}

} // namespace

TEST_CASE("sequence construction") {
    const PulseSequence z = PulseSequence::zeros(6);
    CHECK(z.n_pulses() == 6);
    CHECK(z.n_pairs() == 3);
    CHECK_THROWS_AS(PulseSequence::zeros(3), InvalidArgument);
    CHECK_THROWS_AS(PulseSequence::zeros(0), InvalidArgument);
    CHECK_THROWS_AS(PulseSequence({0.1}, {}), InvalidArgument);
    const std::vector<double> p{0.1, 0.2, -0.3, 0.4};
    const PulseSequence s = PulseSequence::from_parameters(p);
    CHECK(s.parameters() == p);
    CHECK_THAT(s.total_shear(), WithinAbs(0.4, 1e-16));
    CHECK_THAT(s.normalized_shear(16), WithinAbs(1.6, 1e-15));
}

TEST_CASE("zero sequence is the identity") {
    const auto sys = build_system(13);
    const SpinState css = coherent_state(sys, 0.7, 0.2);
    const SpinState out = propagate(css, PulseSequence::zeros(4));
    CHECK((out.amplitudes() - css.amplitudes()).norm() < 1e-13);
}

TEST_CASE("single twist against the dense exponential") {
    const auto sys = build_system(20);
    const SpinState css = coherent_state(sys, kPi / 2, 0.0);
    const PulseSequence seq({0.17}, {0.0});
    const VectorXcd ref = dense_propagate(20, css.amplitudes(), seq);
    CHECK(1.0 - oracle::fidelity(ref, propagate(css, seq).amplitudes()) <= 1e-10);
}

TEST_CASE("random sequences against the dense propagator") {
    std::mt19937_64 rng(12);
    for (int n : {4, 17, 40}) {
        const auto sys = build_system(n);
        const SpinState css = sequence_initial_state(sys);
        for (int k = 0; k < 3; ++k) {
            const PulseSequence seq = random_sequence(6, n, rng);
            const SpinState out = propagate(css, seq);
            CHECK((out.amplitudes() - dense_propagate(n, css.amplitudes(), seq)).norm() < 1e-10);
            CHECK_THAT(out.amplitudes().norm(), WithinAbs(1.0, 1e-12));
        }
    }
}

TEST_CASE("propagation composes at the seam") {
    std::mt19937_64 rng(1);
    const auto sys = build_system(30);
    const SpinState css = sequence_initial_state(sys);
    const PulseSequence a = random_sequence(4, 30, rng);
    const PulseSequence b = random_sequence(2, 30, rng);
    const SpinState whole = propagate(css, a.then(b));
    const SpinState split = propagate(propagate(css, a), b);
    CHECK((whole.amplitudes() - split.amplitudes()).norm() < 1e-12);
    const auto snaps = propagate_snapshots(css, a.then(b));
    REQUIRE(snaps.size() == 6);
    CHECK((snaps.back().amplitudes() - whole.amplitudes()).norm() < 1e-14);
}

TEST_CASE("infidelity examples") {
    std::mt19937_64 rng(2);
    const auto sys = build_system(9);
    const SpinState psi(sys, oracle::random_state(10, rng));
    CHECK_THAT(infidelity(psi, psi), WithinAbs(0.0, 1e-15));
    const SpinState phased(sys, psi.amplitudes() * std::polar(1.0, 0.83));
    CHECK_THAT(infidelity(psi, phased), WithinAbs(0.0, 1e-15));
    CHECK_THAT(infidelity(SpinState::dicke(sys, 4.5), SpinState::dicke(sys, -4.5)),
               WithinAbs(1.0, 0.0));
    const auto other = build_system(8);
    CHECK_THROWS_AS(infidelity(psi, coherent_state(other, 0.0, 0.0)), InvalidArgument);
}

TEST_CASE("adjoint gradient matches central differences") {
    std::mt19937_64 rng(77);
    for (int n : {10, 60}) {
        const auto sys = build_system(n);
        const SpinState init = sequence_initial_state(sys);
        const SpinState target = solve_extreme(sys, 0.8).state;
        for (int pulses : {2, 4, 6}) {
            for (int rep = 0; rep < 3; ++rep) {
                const PulseSequence seq = random_sequence(pulses, n, rng);
                const InfidelityGradient g = infidelity_gradient(init, seq, target);
                CHECK_THAT(g.epsilon, WithinAbs(infidelity(propagate(init, seq), target), 1e-13));
                std::vector<double> p = seq.parameters();
                for (std::size_t i = 0; i < p.size(); ++i) {
                    const double h = 1e-6;
                    std::vector<double> up = p, dn = p;
                    up[i] += h;
                    dn[i] -= h;
                    const double fd =
                        (infidelity(propagate(init, PulseSequence::from_parameters(up)), target) -
                         infidelity(propagate(init, PulseSequence::from_parameters(dn)), target)) /
                        (2 * h);
                    CHECK_THAT(g.gradient[i], WithinAbs(fd, 1e-6 * std::max(1.0, std::abs(fd))));
                }
            }
        }
    }
}

TEST_CASE("gradient vanishes at the trivial optimum") {
    const auto sys = build_system(15);
    const SpinState init = sequence_initial_state(sys);
    const InfidelityGradient g = infidelity_gradient(init, PulseSequence::zeros(4), init);
    CHECK_THAT(g.epsilon, WithinAbs(0.0, 1e-15));
    for (double v : g.gradient) {
        CHECK_THAT(v, WithinAbs(0.0, 1e-13));
    }
}

TEST_CASE("spin echo leaves pure twisting") {
    SECTION("no linear term") {
        const auto sys = build_system(12);
        const EchoReport r = echo_oat(sys, {0.0, 0.3});
        CHECK(r.max_deviation <= 1e-10);
        CHECK(r.phase_deviation <= 1e-10);
    }
    SECTION("large linear term cancels") {
        const auto sys = build_system(30);
        const EchoReport r = echo_oat(sys, {7.3, 0.2});
        CHECK(r.max_deviation <= 1e-10);
        CHECK(r.phase_deviation <= 1e-10);
        CHECK(r.n_probes == 31 + 8);
    }
    SECTION("independent of alpha") {
        const auto sys = build_system(25);
        for (double a : {0.0, 1.0, 10.0, 100.0}) {
            const EchoReport r = echo_oat(sys, {a, 0.45});
            CHECK(r.max_deviation <= 1e-10);
            CHECK(r.phase_deviation <= 1e-9);
            CHECK_THAT(r.predicted_phase,
                       WithinAbs(std::remainder(-2 * a * 12.5, 2 * kPi), 1e-12));
        }
    }
    SECTION("no twist is a bare pi pulse") {
        const auto sys = build_system(7);
        const EchoReport r = echo_oat(sys, {2.2, 0.0});
        CHECK(r.max_deviation <= 1e-10);
    }
}

TEST_CASE("echo agrees with dense unitaries") {
    const int n = 10;
    const auto m = oracle::spin_matrices(n);
    const double alpha = 1.7, chit = 0.33, s = 5.0;
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n + 1, n + 1);
    const Eigen::MatrixXcd h = alpha * (m.sz + s * id) - chit * m.sz * m.sz;
    const Eigen::MatrixXcd u = oracle::expm_i(h, 1.0);
    const Eigen::MatrixXcd r = oracle::expm_i(m.sx, kPi);
    const Eigen::MatrixXcd lhs = u * r * u;
    const Eigen::MatrixXcd rhs = r * oracle::expm_i(m.sz * m.sz, -2.0 * chit);
    const cplx phase = std::polar(1.0, -2.0 * alpha * s);
    CHECK((lhs - phase * rhs).cwiseAbs().maxCoeff() < 1e-10);
}
