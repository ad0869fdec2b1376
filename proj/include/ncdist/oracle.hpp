#pragma once
// The moment functional on words in mutually free variables, and the Boolean
// cumulant functionals built on top of it.
//
// free_moment is the reference evaluator for everything downstream: it never
// touches transfer-operator or fixed-point machinery.  It reduces a word by
// writing the first uncentered factor as (mean + centered) and using that an
// alternating product of centered factors from distinct variables vanishes.

#include "ncdist/dist.hpp"
#include "ncdist/ncpoly.hpp"

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace ncdist {

struct Embedding {
    // every bound variable is free from every other one; algebra tags on the
    // VarIds only group variables for conditional-expectation purposes
    std::map<VarId, Dist> dists;

    void bind(VarId v, Dist d) { dists.insert_or_assign(v, std::move(d)); }
    const Dist& dist_of(VarId v) const;
    std::set<std::string> algebras() const;

    // caches live here so results follow the embedding, not the process
    struct Cache;
    Cache& get_cache() const;

  private:
    mutable std::shared_ptr<Cache> cache;
};

// phi(w), exact
Scalar free_moment(const Embedding& e, const Word& w);
// linear extension to polynomials
Scalar free_moment(const Embedding& e, const NCPoly& p);

// beta_n(w_1, ..., w_n) for arbitrary argument words (n >= 1)
Scalar mixed_boolean_cumulant(const Embedding& e, const std::vector<Word>& args);

// ordered interval partitions of {1..n} as part-size lists; 2^(n-1) entries
std::vector<std::vector<int>> interval_partitions(int n);
// product of mixed cumulants over the groups of `parts`
Scalar beta_pi(const Embedding& e, const std::vector<int>& parts, const std::vector<Word>& args);

// beta_{2n-1}(a_1, b_1, ..., a_n) computed by the grouping expansion: outer
// cumulant over a selection of a's times pocket cumulants between selections.
// Requires bs.size() + 1 == as.size().
Scalar alternating_cumulant_bocu2(const Embedding& e, const std::vector<Word>& as,
                                  const std::vector<Word>& bs);

// Block cumulant functional for the subalgebra spanned by the tags in `algA`:
// 1 on the unit, beta of the alternating block factorization on words that
// start and end in algA, 0 otherwise; extended linearly.
Scalar bbeta(const Embedding& e, const NCPoly& p, const std::set<std::string>& algA);
Scalar bbeta(const Embedding& e, const NCPoly& p, const std::string& algA);
// Letterwise cumulant functional: beta over the full letter split when the
// word starts and ends in algA, 0 otherwise; 1 on the unit.
Scalar fbeta(const Embedding& e, const NCPoly& p, const std::set<std::string>& algA);
Scalar fbeta(const Embedding& e, const NCPoly& p, const std::string& algA);

} // namespace ncdist
