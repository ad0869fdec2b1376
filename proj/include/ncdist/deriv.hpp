#pragma once
// Free difference quotients and the deconcatenation-style coproducts built
// from them.  Conventions, on a monomial w:
//   free_derivative(w, x)   = sum over occurrences w = u x v of u (x) v
//   rdelta(w, x)            = sum of u (x) x v   (the x stays right)
//   ldelta(w, x)            = sum of u x (x) v   (the x stays left)
//   rnabla = rdelta - ldelta
// block_delta_right splits at left boundaries of maximal runs of letters whose
// algebra tag lies in `algs`; a leading run contributes the 1 (x) w term.

#include "ncdist/ncpoly.hpp"

#include <set>
#include <string>

namespace ncdist {

TensorElem free_derivative(const NCPoly& p, VarId x);
TensorElem rdelta(const NCPoly& p, VarId x);
TensorElem ldelta(const NCPoly& p, VarId x);
TensorElem rnabla(const NCPoly& p, VarId x);
TensorElem block_delta_right(const NCPoly& p, const std::set<std::string>& algs);

enum class BlockType { AA, AB, BA, BB };

// Maximal runs of constant algebra-membership: letters with tag in `algA`
// versus the rest.  Empty word -> empty list, type AA by convention.
struct AltFactorization {
    std::vector<std::pair<Word, bool>> blocks;  // (subword, in algA?)
    BlockType type = BlockType::AA;
};
AltFactorization alternating_factorization(const Word& w, const std::set<std::string>& algA);

} // namespace ncdist
