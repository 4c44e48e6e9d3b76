#include "squeeze/io.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>

using namespace squeeze;

TEST_CASE("shortest round-trip formatting") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1e3, 1e3);
    for (int k = 0; k < 2000; ++k) {
        const double v = u(rng) * std::pow(10.0, (k % 40) - 20);
        CHECK(std::stod(io::format_double(v)) == v);
    }
    CHECK(io::format_double(0.1) == "0.1");
    CHECK(io::format_double(1.0) == "1");
    CHECK(io::format_double(std::nan("")) == "nan");
}

TEST_CASE("sweep CSV round trip") {
    SweepTable t;
    t.kind = "gain-vs-shear";
    SweepRow a;
    a.n_atoms = 50;
    a.contrast = 0.9;
    a.q_tilde = 0.30000000000000004;
    a.epsilon = 1.2345678901234567e-4;
    a.xi2 = 0.1;
    a.xi2_corrected = 0.2;
    a.gain_db = 6.98;
    a.parameters = {0.1, -2.5, 1e-17, 3.0};
    a.converged = false;
    SweepRow b;
    b.n_atoms = 20;
    b.xi2 = 0.5;
    b.xi2_corrected = 0.5;
    b.gain_db = 3.0;
    b.omega_over_chi = 0.25;
    t.rows = {a, b};
    const auto rows = io::parse_sweep_csv(io::sweep_csv(t));
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].q_tilde == a.q_tilde);
    CHECK(rows[0].epsilon == a.epsilon);
    CHECK(rows[0].parameters == a.parameters);
    CHECK_FALSE(rows[0].converged);
    CHECK_FALSE(rows[1].q_tilde.has_value());
    CHECK(rows[1].omega_over_chi == 0.25);
    CHECK_THROWS_AS(io::parse_sweep_csv("bad,header\n"), InvalidArgument);
    CHECK_THROWS_AS(io::parse_sweep_csv(io::sweep_csv_header() + "1,2\n"), InvalidArgument);
}

TEST_CASE("atomic write replaces the file") {
    const auto dir = std::filesystem::temp_directory_path() / "squeeze_io_test";
    std::filesystem::remove_all(dir);
    const auto path = dir / "sub" / "out.txt";
    io::write_file_atomic(path, "first");
    io::write_file_atomic(path, "second");
    CHECK(io::read_file(path) == "second");
    int files = 0;
    for (const auto &e : std::filesystem::directory_iterator(path.parent_path())) {
        (void)e;
        ++files;
    }
    CHECK(files == 1);
    CHECK_THROWS_AS(io::read_file(dir / "missing"), Error);
    std::filesystem::remove_all(dir);
}

TEST_CASE("Husimi CSV layout") {
    const auto sys = build_system(4);
    const HusimiGrid g = husimi_grid(coherent_state(sys, 0.3, 0.0), 3, 5);
    const std::string csv = io::husimi_csv(g);
    CHECK(csv.rfind("theta,phi,weight,value\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 15);
}
