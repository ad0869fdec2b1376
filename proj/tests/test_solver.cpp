#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ncdist/solver.hpp"

#include <cmath>

using namespace ncdist;

namespace {

NCPoly P(const std::string& s) { return to_ncpoly(parse(s)); }

Embedding semi2() {
    Embedding e;
    e.bind(var("X"), Dist::semicircle(Scalar(1)));
    e.bind(var("Y"), Dist::semicircle(Scalar(1)));
    return e;
}

// recomputes the subordination sweep once at full order; zero residual means
// the returned F really is the fixed point
bool fixed_point_holds(const GradedPencil& pen, const Embedding& emb, const SolveResult& res) {
    int K = res.K, N = pen.dim;
    for (VarId x : pen.letters()) {
        MatSeries D(N, K);
        for (VarId y : pen.letters())
            if (y != x) D = D + MatSeries::from_poly(pen.mat(y), K) * res.F.at(y);
        MatSeries G = ((MatSeries::id(N, K) - D.shifted(1)).inverse() *
                       MatSeries::from_poly(pen.mat(x), K))
                          .shifted(1);
        MatSeries want = MatSeries::from_const(res.Q.at(x), K) * eta_apply(emb.dist_of(x), G);
        if (!(want == res.F.at(x))) return false;
    }
    return true;
}

} // namespace

TEST_CASE("free additive convolution of two semicircles") {
    GradedPencil pen = suffix_linearize(P("X + Y"));
    CHECK(pen.dim == 1);
    Embedding emb = semi2();
    SolveResult res = solve_pencil(pen, emb, 8);
    CHECK(res.M.coeff(0) == Scalar(1));
    CHECK(res.M.coeff(2) == Scalar(2));
    CHECK(res.M.coeff(4) == Scalar(8));
    CHECK(res.M.coeff(6) == Scalar(40));
    CHECK(res.M.coeff(8) == Scalar(224));
    CHECK(res.M.coeff(3) == Scalar(0));
    // moment series equals the centering-recursion oracle
    NCPoly p = P("X + Y"), pk = NCPoly::unit();
    for (int k = 1; k <= 6; ++k) {
        pk = pk * p;
        CHECK(res.M.coeff(k) == free_moment(emb, pk));
    }
    CHECK(fixed_point_holds(pen, emb, res));
    // eta of the sum splits into the two subordination functions
    MatSeries sum = res.F.at(var("X")) + res.F.at(var("Y"));
    Dist conv = Dist::semicircle(Scalar(2));
    for (int k = 0; k <= 7; ++k)
        CHECK(sum.coeff(k).at(0, 0) == conv.eta_coeffs(7)[k]);
}

TEST_CASE("each sweep gains at least one exact order") {
    GradedPencil pen = suffix_linearize(P("X*Y + Y*X"));
    SolveResult res = solve_pencil(pen, semi2(), 12);
    for (size_t i = 0; i < res.trace.size(); ++i)
        CHECK(res.trace[i] >= std::min((int)i + 1, 13));
    CHECK(res.trace.back() == 13);
}

TEST_CASE("anticommutator of free semicircles, exact moments and projections") {
    Embedding emb = semi2();
    GradedPencil pen = suffix_linearize(P("X*Y + Y*X"));
    REQUIRE(pen.dim == 3);
    SolveResult res = solve_pencil(pen, emb, 10);

    Mat qx = res.Q.at(var("X")), qy = res.Q.at(var("Y"));
    CHECK(qx == row_space_projector([] {
              Mat r(2, 3);
              r.at(0, 0) = Scalar(1);
              r.at(1, 2) = Scalar(1);
              return r;
          }()));
    CHECK(qx.at(0, 0) == Scalar(1));
    CHECK(qx.at(1, 1) == Scalar(0));
    CHECK(qx.at(2, 2) == Scalar(1));
    CHECK(qy.at(0, 0) == Scalar(1));
    CHECK(qy.at(1, 1) == Scalar(1));
    CHECK(qy.at(2, 2) == Scalar(0));

    // subordination matrices live on the off-corner entries only
    for (int k = 0; k <= 10; ++k) {
        Mat fx = res.F.at(var("X")).coeff(k), fy = res.F.at(var("Y")).coeff(k);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                bool okx = (i == 0 && j == 2) || (i == 2 && j == 0);
                bool oky = (i == 0 && j == 1) || (i == 1 && j == 0);
                if (!okx) CHECK(fx.at(i, j) == Scalar(0));
                if (!oky) CHECK(fy.at(i, j) == Scalar(0));
            }
    }

    NCPoly p = P("X*Y + Y*X"), pk = NCPoly::unit();
    for (int k = 1; k <= 5; ++k) {
        pk = pk * p;
        CHECK(res.M.coeff(2 * k) == free_moment(emb, pk));
        CHECK(res.M.coeff(2 * k - 1) == Scalar(0));
    }
    // grading carries phi(P^k) at z^{2k}; phi(P) = 0 for free centered factors
    CHECK(res.M.coeff(2) == Scalar(0));
    CHECK(res.M.coeff(4) == Scalar(2));
    CHECK(fixed_point_holds(pen, emb, res));
}

TEST_CASE("twisted anticommutator has the same moment series") {
    Embedding emb = semi2();
    int K = 12;
    ScalarSeries plain = solve_pencil(suffix_linearize(P("X*Y + Y*X")), emb, K).M;
    ScalarSeries twisted = solve_pencil(suffix_linearize(P("i*X*Y - i*Y*X")), emb, K).M;
    CHECK(plain == twisted);
    // and the occurrence construction agrees with the suffix construction
    ScalarSeries aut = solve_pencil(automaton_linearize(P("X*Y + Y*X")), emb, K).M;
    CHECK(plain == aut);
}

TEST_CASE("four-state occurrence pencil keeps block-diagonal subordination") {
    Embedding emb = semi2();
    GradedPencil pen = automaton_linearize(P("X*Y + Y*X"));
    REQUIRE(pen.dim == 4);
    SolveResult res = solve_pencil(pen, emb, 8);
    // Q_X = diag(1,1,0,0) pattern block, Q_Y complementary
    Mat qx = res.Q.at(var("X")), qy = res.Q.at(var("Y"));
    for (int k = 0; k <= 8; ++k) {
        Mat fx = res.F.at(var("X")).coeff(k), fy = res.F.at(var("Y")).coeff(k);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                if (qx.at(i, i) == Scalar(0) || qx.at(j, j) == Scalar(0))
                    CHECK(fx.at(i, j) == Scalar(0));
                if (qy.at(i, i) == Scalar(0) || qy.at(j, j) == Scalar(0))
                    CHECK(fy.at(i, j) == Scalar(0));
            }
    }
    NCPoly p = P("X*Y + Y*X"), pk = NCPoly::unit();
    for (int k = 1; k <= 4; ++k) {
        pk = pk * p;
        CHECK(res.M.coeff(2 * k) == free_moment(emb, pk));
    }
}

TEST_CASE("symmetrized three-letter product moment series") {
    Embedding emb;
    emb.bind(var("X"), Dist::semicircle(Scalar(1)));
    emb.bind(var("Y"), Dist::semicircle(Scalar(1)));
    emb.bind(var("Z"), Dist::semicircle(Scalar(1)));
    NCPoly t3 = P("X*Y*Z + X*Z*Y + Y*X*Z + Y*Z*X + Z*X*Y + Z*Y*X");
    GradedPencil pen = suffix_linearize(t3);
    REQUIRE(pen.dim == 7);
    SolveResult res = solve_pencil(pen, emb, 12);
    CHECK(res.M.coeff(0) == Scalar(1));
    CHECK(res.M.coeff(3) == Scalar(0));   // odd powers of T3 vanish
    CHECK(res.M.coeff(6) == Scalar(6));
    CHECK(res.M.coeff(9) == Scalar(0));
    CHECK(res.M.coeff(12) == Scalar(96));
    CHECK(res.M.coeff(1) == Scalar(0));
    CHECK(res.M.coeff(2) == Scalar(0));
    CHECK(res.M.coeff(4) == Scalar(0));
    // against the oracle, which knows nothing about pencils
    CHECK(res.M.coeff(3) == free_moment(emb, t3));
    CHECK(res.M.coeff(6) == free_moment(emb, t3 * t3));
    CHECK(fixed_point_holds(pen, emb, res));
}

TEST_CASE("mixed spectra: semicircle times arcsine, and an atom summand") {
    Embedding emb;
    emb.bind(var("X"), Dist::semicircle(Scalar(1)));
    emb.bind(var("Y"), Dist::arcsine());
    GradedPencil pen = suffix_linearize(P("X*Y + Y*X"));
    SolveResult res = solve_pencil(pen, emb, 10);
    NCPoly p = P("X*Y + Y*X"), pk = NCPoly::unit();
    for (int k = 1; k <= 4; ++k) {
        pk = pk * p;
        CHECK(res.M.coeff(2 * k) == free_moment(emb, pk));
    }
    CHECK(fixed_point_holds(pen, emb, res));

    Embedding emb2;
    emb2.bind(var("X"), Dist::semicircle(Scalar(1)));
    emb2.bind(var("Y"), Dist::point_mass(Scalar(2)));
    GradedPencil sum = suffix_linearize(P("X + Y"));
    SolveResult res2 = solve_pencil(sum, emb2, 8);
    NCPoly q = P("X + Y");
    pk = NCPoly::unit();
    for (int k = 1; k <= 6; ++k) {
        pk = pk * q;
        CHECK(res2.M.coeff(k) == free_moment(emb2, pk));
    }
}

TEST_CASE("ungraded solve matches the closed form for the rational word") {
    // X (1 - X/8 - Y/8)^{-1} X over two symmetric Bernoulli variables:
    // M(z) = 1 + z ((1-z)^2 - 1/16)^{-1/2}
    Embedding emb;
    emb.bind(var("X"), Dist::bernoulli_symmetric());
    emb.bind(var("Y"), Dist::bernoulli_symmetric());
    GradedPencil pen = resolvent_pencil(rationalize(parse("X*inv(1 - (1/8)*X - (1/8)*Y)*X")));
    REQUIRE(pen.m == 0);
    int K = 8;
    SSolveResult res = solve_pencil_s(pen, emb, K);
    CHECK(res.S >= 48);

    // reference coefficients by a double-precision binomial expansion of
    // (15/16)^{-1/2} (1 + u)^{-1/2}, u = (16/15)(z^2 - 2z)
    std::vector<double> ref(K + 1), upow(K + 1), acc(K + 1);
    upow[0] = 1;
    double binom = 1;                    // binom(-1/2, n) at n = 0
    for (int k = 0; k <= K; ++k) acc[k] = upow[k];
    for (int n = 1; n <= K; ++n) {
        // multiply upow by u once
        std::vector<double> nu(K + 1);
        for (int k = 0; k + 1 <= K; ++k) {
            nu[k + 1] += upow[k] * (-2.0 * 16.0 / 15.0);
            if (k + 2 <= K) nu[k + 2] += upow[k] * (16.0 / 15.0);
        }
        upow = nu;
        binom *= (-0.5 - (n - 1)) / n;
        for (int k = 0; k <= K; ++k) acc[k] += binom * upow[k];
    }
    double scale = 1.0 / std::sqrt(15.0 / 16.0);
    ref[0] = 1;
    for (int k = 1; k <= K; ++k) ref[k] = scale * acc[k - 1];

    for (int k = 0; k <= K; ++k) {
        CHECK(std::abs(res.M[k].imag()) < 1e-10);
        CHECK(std::abs(res.M[k].real() - ref[k]) <= 1e-8 * std::max(1.0, std::abs(ref[k])));
    }
    CHECK(res.stabilization >= K);
    CHECK(res.stabilization <= res.S);
    // first moment is positive, fixing the square-root branch
    CHECK(res.M[1].real() > 0);
}

TEST_CASE("solver input validation") {
    Embedding emb = semi2();
    GradedPencil graded = suffix_linearize(P("X + Y"));
    CHECK_THROWS_AS(solve_pencil_s(graded, emb, 8), std::invalid_argument);
    GradedPencil s0 = resolvent_pencil(rationalize(parse("X*Y")));
    CHECK_THROWS_AS(solve_pencil(s0, emb, 8), std::invalid_argument);
    Embedding empty;
    CHECK_THROWS_AS(solve_pencil(graded, empty, 8), std::invalid_argument);
}
