#include "oracle.hpp"
#include "squeeze/extreme.hpp"
#include "squeeze/metrology.hpp"
#include "squeeze/scaling.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

using namespace squeeze;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("power-law fit is exact on synthetic data") {
    std::vector<double> n, y, c;
    for (int k = 10; k <= 100; k += 10) {
        n.push_back(k);
        y.push_back(2.0 / k);
        c.push_back(5.0);
    }
    const PowerLawFit f = power_law_fit(n, y);
    CHECK_THAT(f.a, WithinRel(2.0, 1e-13));
    CHECK_THAT(f.b, WithinAbs(1.0, 1e-13));
    CHECK_THAT(f.r_squared, WithinAbs(1.0, 1e-13));
    const PowerLawFit g = power_law_fit(n, c);
    CHECK_THAT(g.b, WithinAbs(0.0, 1e-14));
    CHECK_THAT(g.a, WithinRel(5.0, 1e-14));

    std::vector<double> z{3.0, 0.0, 1.0};
    std::vector<double> nn{1.0, 2.0, 3.0};
    CHECK_THROWS_AS(power_law_fit(nn, z), InvalidArgument);
    CHECK_THROWS_AS(power_law_fit(std::vector<double>{1.0, 2.0}, std::vector<double>{1.0, 2.0}),
                    InvalidArgument);
}

TEST_CASE("fit r^2 drops for scattered data") {
    const std::vector<double> n{10, 20, 40, 80};
    const std::vector<double> y{1.0, 0.3, 0.4, 0.05};
    const PowerLawFit f = power_law_fit(n, y);
    CHECK(f.r_squared < 1.0);
    CHECK(f.r_squared > 0.0);
}

TEST_CASE("default atom grid") {
    CHECK(default_atom_grid() == std::vector<int>{20, 28, 38, 54, 74, 104, 144, 200});
    for (int n : default_atom_grid(20, 300, 8)) {
        CHECK(n % 2 == 0);
    }
}

TEST_CASE("extreme sweep agrees with a direct solve") {
    const std::vector<int> one{60};
    const SweepTable t = sweep_extreme_scaling(one, 0.9);
    REQUIRE(t.rows.size() == 1);
    const ExtremeSolution sol = solve_extreme(build_system(60), 0.9);
    CHECK(t.rows[0].xi2 == sol.xi2);
    CHECK(*t.rows[0].omega_over_chi == sol.omega_over_chi);
    CHECK(t.rows[0].n_atoms == 60);

    const std::vector<int> many{40, 10, 20};
    const SweepTable s = sweep_extreme_scaling(many, 0.5, 3);
    CHECK(s.rows[0].n_atoms == 10);
    CHECK(s.rows[2].n_atoms == 40);
    const SweepTable serial = sweep_extreme_scaling(many, 0.5, 1);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(s.rows[i].xi2 == serial.rows[i].xi2);
    }
    const std::vector<int> dup{10, 10};
    CHECK_THROWS_AS(sweep_extreme_scaling(dup, 0.5), InvalidArgument);
}

TEST_CASE("OAT scan at four atoms against a 10^4-point brute force") {
    const auto sys = build_system(4);
    const auto m = oracle::spin_matrices(4);
    VectorXcd css = coherent_state(sys, std::numbers::pi / 2, 0.0).amplitudes();
    double best = 1e9;
    const double qmax = 3.0 * std::pow(4.0, -2.0 / 3.0);
    for (int k = 1; k <= 10000; ++k) {
        const double q = qmax * k / 10000.0;
        const VectorXcd v = oracle::expm_i(m.sz * m.sz, q) * css;
        best = std::min(best, oracle::xi2_scan(v, 4, 2000));
    }
    const OatScan scan = oat_scan(sys);
    CHECK(scan.xi2 < 1.0);
    CHECK(scan.interior);
    CHECK(scan.xi2 <= best + 1e-6);
    CHECK_THAT(scan.xi2, WithinAbs(best, 1e-4));
}

TEST_CASE("OAT minima are interior") {
    const std::vector<int> ns{20, 50, 120, 300};
    const SweepTable t = sweep_oat_scaling(ns);
    for (const auto &r : t.rows) {
        CHECK(r.converged);
        CHECK(r.xi2 < 1.0);
    }
}

TEST_CASE("peak finder") {
    // Parabola with vertex at 0.47 sampled on a coarse grid.
    std::vector<double> q, g;
    for (int k = 1; k <= 15; ++k) {
        q.push_back(0.1 * k);
        g.push_back(10.0 - 3.0 * std::pow(0.1 * k - 0.47, 2));
    }
    const PeakEstimate p = find_peak(q, g);
    CHECK(p.interior);
    CHECK_THAT(p.q_tilde, WithinAbs(0.47, 1e-12));
    CHECK_THAT(p.gain_db, WithinAbs(10.0, 1e-12));
    std::vector<double> mono{1, 2, 3};
    std::vector<double> qq{0.1, 0.2, 0.3};
    const PeakEstimate e = find_peak(qq, mono);
    CHECK_FALSE(e.interior);
    CHECK(e.q_tilde == 0.3);
}

TEST_CASE("gain sweep is reproducible, resumable and re-evaluates") {
    const std::vector<int> ns{10, 14, 18};
    const std::vector<double> qs{0.3, 0.6};
    GainSweepOptions opt;
    opt.n_starts = 4;
    const SweepTable a = sweep_gain_vs_shear(ns, qs, opt);
    opt.jobs = 2;
    int seen = 0;
    const SweepTable b = sweep_gain_vs_shear(ns, qs, opt, {}, [&](const SweepRow &) { ++seen; });
    CHECK(seen == 6);
    REQUIRE(a.rows.size() == 6);
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].parameters == b.rows[i].parameters);
        CHECK(a.rows[i].gain_db == b.rows[i].gain_db);
    }

    // A partial table supplies rows that are not recomputed.
    std::vector<SweepRow> done{a.rows[0], a.rows[3]};
    done[0].gain_db = 123.0;
    int computed = 0;
    const SweepTable c =
        sweep_gain_vs_shear(ns, qs, opt, done, [&](const SweepRow &) { ++computed; });
    CHECK(computed == 4);
    CHECK(c.rows[0].gain_db == 123.0);
    CHECK(c.rows[1].gain_db == a.rows[1].gain_db);

    for (const auto &row : a.rows) {
        const auto sys = build_system(row.n_atoms);
        const SpinState target = solve_extreme(sys, 0.9).state;
        const SpinState gen = propagate(sequence_initial_state(sys),
                                        PulseSequence::from_parameters(row.parameters));
        CHECK_THAT(infidelity(gen, target), WithinAbs(*row.epsilon, 1e-12));
        CHECK_THAT(wineland_xi2(gen).xi2, WithinAbs(row.xi2, 1e-12));
        CHECK_THAT(row.xi2_corrected,
                   WithinRel(row.xi2 / std::pow(std::exp(-0.36 * *row.q_tilde), 2), 1e-14));
    }
    const auto peaks = gain_peaks(a);
    CHECK(peaks.size() == 3);
    const auto fits = column_fits(a);
    CHECK(fits.size() == 2);

    const std::vector<double> bad{0.5, 0.4};
    CHECK_THROWS_AS(sweep_gain_vs_shear(ns, bad, opt), InvalidArgument);
}
