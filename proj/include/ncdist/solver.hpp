#pragma once
// Fixed-point solver for the subordination matrices of a linearized
// resolvent.  Graded pencils (m >= 1) run in exact arithmetic: starting from
// F_x = beta_1(x) Q_x, each sweep of
//     F_x <- Q_x eta_x( z (I - z sum_{y != x} C_y F_y)^{-1} C_x )
// gains at least one exact z-order, so K orders cost about K sweeps with
// growing working truncation.  Ungraded pencils (m == 0) run the same sweep
// over the auxiliary edge parameter s with double-precision z-polynomial
// coefficients; the moment series is the s -> 1 limit and is reported with
// the s-order past which the partial sums stop moving.

#include "ncdist/linrep.hpp"
#include "ncdist/mseries.hpp"
#include "ncdist/oracle.hpp"

#include <complex>
#include <map>
#include <vector>

namespace ncdist {

// hermitian projection onto the joint row space of the z-coefficients of c;
// satisfies c * Q = c coefficientwise
Mat cokernel_projection(const PolyMat& c);

struct SolveResult {
    int K = 0;
    std::map<VarId, MatSeries> F;    // subordination matrices, exact to order K
    std::map<VarId, Mat> Q;          // cokernel projections
    ScalarSeries M;                  // u^t (I - z sum C_x F_x)^{-1} v
    std::vector<int> trace;          // agreement order after each sweep
};

SolveResult solve_pencil(const GradedPencil& pen, const Embedding& emb, int K);

// Same fixed point as solve_pencil, computed in one pass: the order-k
// coefficient of F_x only involves orders < k of the other subordination
// matrices, so no sweeping is needed.  Distributions whose cumulant series
// satisfies eta = a z + b z eta^2 (semicircle, arcsine, Bernoulli; detected
// and verified against the cumulant data up to the cutoff) get an O(K^2)
// update per variable; anything else uses explicit powers of the resolvent
// argument.  trace is left empty.  Preferred for large K.
SolveResult solve_pencil_forward(const GradedPencil& pen, const Embedding& emb, int K);

struct NSolveResult {
    int K = 0;
    std::vector<std::complex<double>> M;   // size K+1
};

// forward recursion in double precision (path classification still runs on
// the exact cumulants); for orders where mpq growth is prohibitive
NSolveResult solve_pencil_numeric(const GradedPencil& pen, const Embedding& emb, int K);

struct SSolveResult {
    int K = 0;                       // z cutoff of the reported series
    int S = 0;                       // s cutoff used internally
    std::vector<std::complex<double>> M;   // size K+1, s summed at 1
    int stabilization = 0;           // 1 + last s-order moving any coefficient
    std::vector<int> trace;          // s-agreement order after each sweep
};

// pen.m must be 0.  S < 0 picks max(3K, 48).
SSolveResult solve_pencil_s(const GradedPencil& pen, const Embedding& emb, int K, int S = -1);

} // namespace ncdist
