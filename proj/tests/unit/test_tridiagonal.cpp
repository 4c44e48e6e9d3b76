#include "squeeze/errors.hpp"
#include "squeeze/tridiagonal.hpp"

#include <catch_amalgamated.hpp>

#include <Eigen/Dense>

#include <random>

using namespace squeeze;

namespace {

Eigen::MatrixXd assemble(const Eigen::VectorXd &d, const Eigen::VectorXd &e) {
    const Eigen::Index n = d.size();
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
    t.diagonal() = d;
    if (n > 1) {
        t.diagonal(1) = e;
        t.diagonal(-1) = e;
    }
    return t;
}

} // namespace

TEST_CASE("lowest eigenpair matches a dense solver") {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> g;
    for (int n : {1, 2, 3, 10, 57, 200}) {
        for (int rep = 0; rep < 5; ++rep) {
            Eigen::VectorXd d(n), e(std::max(n - 1, 0));
            for (int i = 0; i < n; ++i) {
                d[i] = 3.0 * g(rng);
            }
            for (int i = 0; i + 1 < n; ++i) {
                e[i] = g(rng);
            }
            const auto pair = lowest_eigenpair(d, e);
            const Eigen::MatrixXd t = assemble(d, e);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
            CHECK(std::abs(pair.value - es.eigenvalues()[0]) <
                  1e-12 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff()));
            CHECK((t * pair.vector - pair.value * pair.vector).norm() <
                  1e-10 * std::max(1.0, t.cwiseAbs().rowwise().sum().maxCoeff()));
            CHECK(std::abs(pair.vector.norm() - 1.0) < 1e-13);
        }
    }
}

TEST_CASE("Sturm count equals the number of eigenvalues below x") {
    Eigen::VectorXd d(4), e(3);
    d << 2.0, 2.0, 2.0, 2.0;
    e << -1.0, -1.0, -1.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(assemble(d, e));
    for (double x : {-1.0, 0.5, 1.5, 2.5, 3.5, 5.0}) {
        int below = 0;
        for (int i = 0; i < 4; ++i) {
            below += es.eigenvalues()[i] < x ? 1 : 0;
        }
        CHECK(sturm_count(d, e, x) == below);
    }
}

TEST_CASE("degenerate off-diagonal splits cleanly") {
    Eigen::VectorXd d(3), e(2);
    d << 5.0, -2.0, 1.0;
    e << 0.0, 0.0;
    const auto p = lowest_eigenpair(d, e);
    CHECK(p.value == Catch::Approx(-2.0).margin(1e-14));
    CHECK(std::abs(std::abs(p.vector[1]) - 1.0) < 1e-12);
}

TEST_CASE("mismatched sizes are rejected") {
    Eigen::VectorXd d(3), e(3);
    d.setZero();
    e.setZero();
    CHECK_THROWS_AS(lowest_eigenpair(d, e), InvalidArgument);
}
