#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ncdist/oracle.hpp"
#include "ncdist/ratexpr.hpp"
#include "ncdist/rmt.hpp"

using namespace ncdist;

namespace {
constexpr std::uint64_t SEED = 0x5eed2026u;

double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(1.0, std::abs(want));
}
} // namespace

TEST_CASE("sampling is deterministic in (name, seed) and varies across names") {
    Dist sc = Dist::semicircle(Scalar(1));
    Eigen::MatrixXcd a = sample_matrix(sc, "X", 40, SEED);
    Eigen::MatrixXcd b = sample_matrix(sc, "X", 40, SEED);
    Eigen::MatrixXcd c = sample_matrix(sc, "Y", 40, SEED);
    Eigen::MatrixXcd d = sample_matrix(sc, "X", 40, SEED + 1);
    CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a - c).cwiseAbs().maxCoeff() > 1e-3);
    CHECK((a - d).cwiseAbs().maxCoeff() > 1e-3);
}

TEST_CASE("single-matrix moments approach the law") {
    int N = 400;

    Eigen::MatrixXcd g = sample_matrix(Dist::semicircle(Scalar(1)), "g", N, SEED);
    std::vector<double> mg = trace_moments(g, 4);
    CHECK(std::abs(mg[0]) < 0.1);
    CHECK(rel_err(mg[1], 1.0) < 0.1);
    CHECK(rel_err(mg[3], 2.0) < 0.15);

    Eigen::MatrixXcd u2 = sample_matrix(Dist::arcsine(), "u", N, SEED);
    std::vector<double> ma = trace_moments(u2, 4);
    CHECK(std::abs(ma[0]) < 0.1);
    CHECK(rel_err(ma[1], 2.0) < 0.1);
    CHECK(rel_err(ma[3], 6.0) < 0.15);

    // the Bernoulli model squares to the identity exactly
    Eigen::MatrixXcd s = sample_matrix(Dist::bernoulli_symmetric(), "s", N, SEED);
    std::vector<double> mb = trace_moments(s, 4);
    CHECK(std::abs(mb[0]) < 1e-12);
    CHECK(std::abs(mb[1] - 1.0) < 1e-10);
    CHECK(std::abs(mb[3] - 1.0) < 1e-10);

    Eigen::MatrixXcd pm = sample_matrix(Dist::point_mass(Scalar::rational(1, 2)), "p", 30, SEED);
    std::vector<double> mp = trace_moments(pm, 3);
    CHECK(mp[0] == doctest::Approx(0.5));
    CHECK(mp[2] == doctest::Approx(0.125));

    CHECK_THROWS_AS(sample_matrix(Dist::moments({Scalar(1), Scalar(1)}), "m", 10, SEED),
                    std::invalid_argument);
}

TEST_CASE("independent samples behave freely in polynomials") {
    int N = 500;
    VarId x = var("X", "A"), y = var("Y", "B");
    std::map<VarId, Eigen::MatrixXcd> at{
        {x, sample_matrix(Dist::semicircle(Scalar(1)), "X", N, SEED)},
        {y, sample_matrix(Dist::semicircle(Scalar(1)), "Y", N, SEED)}};

    Embedding e;
    e.bind(x, Dist::semicircle(Scalar(1)));
    e.bind(y, Dist::semicircle(Scalar(1)));

    for (const char* expr : {"X + Y", "X*Y + Y*X"}) {
        NCPoly p = to_ncpoly(parse(expr));
        Eigen::MatrixXcd pm = evaluate_poly(p, at);
        std::vector<double> m = trace_moments(pm, 4);
        NCPoly pk = NCPoly::unit();
        for (int k = 1; k <= 4; ++k) {
            pk = pk * p;
            double want = free_moment(e, pk).re_d();
            CHECK(std::abs(m[k - 1] - want) <= 0.12 * std::max(1.0, std::abs(want)));
        }
    }
}

TEST_CASE("trace_moments rejects non-hermitian input") {
    int N = 60;
    std::mt19937_64 gen(7);
    Eigen::MatrixXcd u = haar_unitary(N, gen);
    CHECK_THROWS_AS(trace_moments(u, 2), std::domain_error);

    // haar unitary is unitary
    double dev = (u * u.adjoint() - Eigen::MatrixXcd::Identity(N, N)).cwiseAbs().maxCoeff();
    CHECK(dev < 1e-10);
}

TEST_CASE("polynomial evaluation is multiplicative") {
    int N = 50;
    VarId x = var("X", "A"), y = var("Y", "B");
    std::map<VarId, Eigen::MatrixXcd> at{
        {x, sample_matrix(Dist::semicircle(Scalar(1)), "X", N, SEED)},
        {y, sample_matrix(Dist::arcsine(), "Y", N, SEED)}};
    NCPoly p = to_ncpoly(parse("X + Y"));
    Eigen::MatrixXcd lhs = evaluate_poly(p * p, at);
    Eigen::MatrixXcd pe = evaluate_poly(p, at);
    CHECK((lhs - pe * pe).cwiseAbs().maxCoeff() < 1e-10);
}
