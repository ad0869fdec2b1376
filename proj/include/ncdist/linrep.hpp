#pragma once
// Linear representations of noncommutative rational series and the pencil
// forms the fixed-point solver consumes.
//
// LinRep: <S,w> = u^t M_{x1}...M_{xn} v.  Scalar entries only; z never
// appears inside a LinRep.
//
// GradedPencil: m >= 1 encodes Psi = (1 - z^m P)^{-1} = u^t (I - z L)^{-1} v
// with L = sum_x C_x x and every C_x entry a z-polynomial of degree < m.
// m == 0 encodes Psi = (1 - z S)^{-1} = u^t (I - L)^{-1} v for a proper
// rational series S; entries have z-degree <= 1 and the edge grading is
// carried by the solver's auxiliary parameter instead of z.

#include "ncdist/ncpoly.hpp"
#include "ncdist/ratexpr.hpp"
#include "ncdist/zpoly.hpp"

#include <map>
#include <string>
#include <vector>

namespace ncdist {

struct LinRep {
    int dim = 0;
    std::vector<Scalar> u, v;
    std::map<VarId, Mat> mats;       // absent variable == zero matrix

    const Mat& mat(VarId x) const;   // shared zero when x is absent
    Scalar coeff(const Word& w) const;
    std::vector<VarId> letters() const;
};

struct GradedPencil {
    int dim = 0;
    int m = 0;                       // z-step per edge; 0 = ungraded (s-mode)
    std::vector<Scalar> u, v;
    std::map<VarId, PolyMat> mats;

    const PolyMat& mat(VarId x) const;
    std::vector<VarId> letters() const;
};

// --- construction --------------------------------------------------------

// stable-subspace linearization of Psi = (1 - z^m P)^{-1}, m = deg P.
// requires eps(P) == 0, P != 0.  State basis: Psi first, then the closure
// of P under one-sided derivatives, split into homogeneous components and
// kept in reduced echelon form (monic leading words), ordered by degree
// descending then leading word.
GradedPencil suffix_linearize(const NCPoly& p);

// one state per labeled letter occurrence of the (homogeneous) polynomial;
// consecutive letters chain, last letters close back to every monomial start
// and carry that monomial's coefficient.  u: last letter of the first
// monomial; v: all last letters.
GradedPencil automaton_linearize(const NCPoly& p);

// rational-series calculus
LinRep rep_const(const Scalar& c);
LinRep rep_var(VarId x);
LinRep rep_poly(const NCPoly& p);
LinRep rep_scale(const LinRep& a, const Scalar& c);
LinRep rep_sum(const LinRep& a, const LinRep& b);
LinRep rep_prod(const LinRep& a, const LinRep& b);
LinRep rep_quasi_inverse(const LinRep& a);   // S -> S + S^2 + ...; needs u^t v == 0
LinRep rep_reduce(const LinRep& a);          // forward then backward restriction

// evaluate a rational expression into a reduced LinRep.  inv(Q) with
// eps(Q) = c goes through (1/c)(1 + T + T^2 + ...), T = 1 - Q/c.
LinRep rationalize(const RatExprPtr& e);

// ungraded pencil for (1 - z S)^{-1} from a rep of the proper series S.
// States: Psi plus the right-multiplicative closure of the rows u^t M_x,
// taken modulo rows whose series is constant (those fold into Psi).
GradedPencil resolvent_pencil(const LinRep& rep);

// --- verification --------------------------------------------------------

struct VerifyReport {
    bool ok = true;
    std::string message;             // empty on success
};

// expands the rep by word length against the series of e, lengths 0..maxlen
VerifyReport verify_rep(const LinRep& rep, const RatExprPtr& e, int maxlen);
// expands u^t (I - zL)^{-1} v by z-order against (1 - z^m P)^{-1}
// (m >= 1), or against (1 - z S)^{-1} for S = series of e (m == 0)
VerifyReport verify_pencil(const GradedPencil& pen, const RatExprPtr& e, int zorder);

// --- serialization -------------------------------------------------------

std::string pencil_json(const GradedPencil& pen);
GradedPencil pencil_from_json(const std::string& text);

} // namespace ncdist
