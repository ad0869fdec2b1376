#pragma once
// Conditional expectations onto the algebra generated by a retained set of
// variables.  Two computation paths:
//   * cond_exp_poly works on a polynomial directly, by the block-splitting
//     recursion; output is a polynomial in the retained letters.
//   * integrate_out works on a solved pencil: the fixed-point matrices of the
//     integrated letters are absorbed into the pencil, the retained letters
//     stay symbolic.  expand_in_retained then reads off the coefficient
//     series of each retained word.
//
// Graded pencils put z^m on every occurrence of the represented polynomial P,
// so the raw sandwich series carries phi(P^k) at z^{mk}; moment_series is the
// decimated form with phi(P^k) at z^k.

#include "ncdist/linrep.hpp"
#include "ncdist/oracle.hpp"
#include "ncdist/solver.hpp"

#include <map>
#include <set>
#include <string>

namespace ncdist {

// E[p | algebra spanned by variables whose tag is in `retain`].  Every
// variable of p must be bound in e.  The result is a polynomial in retained
// letters whose coefficients are exact moments of the integrated ones.
NCPoly cond_exp_poly(const NCPoly& p, const std::set<std::string>& retain, const Embedding& e);
NCPoly cond_exp_poly(const NCPoly& p, const std::string& retain, const Embedding& e);

// Same functional, evaluated on a single word by the closed interval-sum
// formula instead of the recursion; used to cross-check cond_exp_poly.
NCPoly cond_exp_word_direct(const Word& w, const std::set<std::string>& retain,
                            const Embedding& e);

// A pencil with some letters integrated out against a fixed-point solution:
//   E[u^t (I - z sum_i C_i X_i)^{-1} v] = u^t (I - z(sum_R C_i X_i + A))^{-1} v
// where R runs over retained letters and A = sum_{j not in R} C_j F_j.
struct SubordinatedPencil {
    int N = 0;
    int m = 1;                       // grading inherited from the source pencil
    std::vector<Scalar> u, v;
    std::map<VarId, PolyMat> retained;
    MatSeries absorbed;              // truncated at the solve order
};

SubordinatedPencil integrate_out(const GradedPencil& pen, const SolveResult& sol,
                                 const std::set<VarId>& retain);

// Coefficient series of each word in the retained letters, up to words of
// length maxLen:  E = sum_w <w>(z) * w.  Retaining nothing reproduces the
// moment sandwich as the lone unit-word entry.
std::map<Word, ScalarSeries, WordLess> expand_in_retained(const SubordinatedPencil& sp,
                                                          int maxLen);

// Decimation of sol.M: coefficient of z^{mk} reported as the moment of P^k.
// Throws std::domain_error if a non-multiple-of-m coefficient is nonzero.
ScalarSeries moment_series(const GradedPencil& pen, const SolveResult& sol);

// Named-series equation checker.  Grammar (explicit '*', integer exponents):
//   expr   := term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := primary ('^' uint)?
//   primary:= uint | uint '/' uint | 'z' | 'i' | name | '(' expr ')' | '-' factor
// Names resolve in `bindings`; all series are truncated to the shortest one.
// Returns the valuation of the residual: K+1 means zero through order K.
int check_equation(const std::string& eq,
                   const std::map<std::string, ScalarSeries>& bindings);
// The residual series itself, for diagnostics.
ScalarSeries equation_residual(const std::string& eq,
                               const std::map<std::string, ScalarSeries>& bindings);

// Additive subordination data for P = X + Y via the 1x1 pencil.  F_X, F_Y are
// the scalar fixed-point series, M the moment series of X + Y, and
// omega = z * (1 - z F_Y)^{-1}.  In this normalization
//   E_X[(1 - z(X+Y))^{-1}] = (1 - z F_Y - z X)^{-1} = (omega/z) (1 - omega X)^{-1}
// and therefore M(z) = (omega(z)/z) * M_X(omega(z)).
struct AdditiveSubordination {
    ScalarSeries FX, FY, omega, M;
};
AdditiveSubordination subordination_additive(const Dist& dX, const Dist& dY, int K);

} // namespace ncdist
