#pragma once
// Non-commutative polynomials: finitely supported maps word -> scalar.
// Canonical form never stores zero coefficients; the unit is the empty word.

#include "ncdist/scalar.hpp"
#include "ncdist/word.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace ncdist {

struct NCPoly {
    std::map<Word, Scalar, WordLess> t;

    NCPoly() = default;
    static NCPoly zero() { return NCPoly(); }
    static NCPoly unit() { return constant(Scalar(1)); }
    static NCPoly constant(const Scalar& c);
    static NCPoly variable(VarId v);
    static NCPoly monomial(const Word& w, const Scalar& c = Scalar(1));

    bool is_zero() const { return t.empty(); }
    int degree() const;                       // -1 for the zero polynomial
    Scalar eps() const;                       // coefficient of the empty word
    Scalar coeff(const Word& w) const;
    void add_term(const Word& w, const Scalar& c);   // accumulates, drops zeros

    NCPoly& operator+=(const NCPoly& o);
    NCPoly& operator-=(const NCPoly& o);
    friend NCPoly operator+(NCPoly a, const NCPoly& b) { a += b; return a; }
    friend NCPoly operator-(NCPoly a, const NCPoly& b) { a -= b; return a; }
    friend NCPoly operator*(const NCPoly& a, const NCPoly& b);
    NCPoly& operator*=(const NCPoly& o) { *this = *this * o; return *this; }
    friend bool operator==(const NCPoly& a, const NCPoly& b) { return a.t == b.t; }
    friend bool operator!=(const NCPoly& a, const NCPoly& b) { return !(a == b); }

    NCPoly scaled(const Scalar& c) const;
    NCPoly truncated(int maxlen) const;       // drop words longer than maxlen
    std::set<VarId> support_vars() const;
    std::string str() const;                  // parseable; "0" for zero
};

// Simple tensors with scalar weights, kept merged and sorted; the value of a
// free difference quotient.  (left, right, coeff) encodes coeff * left (x) right.
struct TensorElem {
    struct Term {
        Word left, right;
        Scalar c;
    };
    std::vector<Term> terms;                  // canonical: sorted, no zeros

    void add(const Word& l, const Word& r, const Scalar& c);
    void normalize();
    TensorElem& operator+=(const TensorElem& o);
    friend TensorElem operator+(TensorElem a, const TensorElem& b) { a += b; return a; }
    friend bool operator==(const TensorElem& a, const TensorElem& b);
    bool is_zero() const { return terms.empty(); }
    std::string str() const;

    // multiply through: left*a (x) b*right termwise
    TensorElem lmul(const NCPoly& a) const;   // a * left (x) right
    TensorElem rmul(const NCPoly& b) const;   // left (x) right * b
    // collapse the tensor sign: sum of coeff * left * mid * right
    NCPoly contract(const NCPoly& mid) const;
};

// Evaluation of a polynomial in any unital ring presented by callbacks.
// Ring must provide: V zero(), V one(), void axpy(V&, const Scalar&, const V&),
// V mul(const V&, const V&).
template <typename Ring, typename V = decltype(std::declval<Ring>().zero())>
V evaluate_poly(const NCPoly& p, Ring& ring, const std::vector<std::pair<VarId, V>>& vals) {
    auto find = [&](VarId v) -> const V& {
        for (auto& kv : vals)
            if (kv.first == v) return kv.second;
        throw std::invalid_argument("evaluate_poly: unbound variable " + var_name(v));
    };
    V acc = ring.zero();
    for (auto& [w, c] : p.t) {
        V m = ring.one();
        for (VarId x : w) m = ring.mul(m, find(x));
        ring.axpy(acc, c, m);
    }
    return acc;
}

} // namespace ncdist
