#pragma once
// Rational expressions: the closure of polynomials under inv().  The AST keeps
// inverses unexpanded; everything else is folded into NCPoly leaves.

#include "ncdist/ncpoly.hpp"

#include <memory>
#include <string>

namespace ncdist {

struct RatExpr;
using RatExprPtr = std::shared_ptr<const RatExpr>;

struct RatExpr {
    enum Kind { Poly, Sum, Prod, Inv } kind;
    NCPoly poly;                   // Kind::Poly payload
    std::vector<RatExprPtr> kids;  // Sum/Prod: >=2 operands; Inv: exactly 1

    static RatExprPtr make_poly(NCPoly p);
    static RatExprPtr make_sum(std::vector<RatExprPtr> ks);
    static RatExprPtr make_prod(std::vector<RatExprPtr> ks);
    // throws std::domain_error when the operand's constant term vanishes
    static RatExprPtr make_inv(RatExprPtr k);

    bool is_poly() const { return kind == Poly; }
    Scalar eps() const;            // constant term, defined for every node
    std::set<VarId> support_vars() const;
    std::string str() const;
};

struct ParseError : std::runtime_error {
    size_t pos;
    ParseError(const std::string& msg, size_t p);
};

// Grammar: expr := term (('+'|'-') term)* ; term := factor ('*' factor)* ;
// factor := '-' factor | number | 'i' | ident | '(' expr ')' | 'inv' '(' expr ')'
// number := digits('/'digits)? as one token.  '/' outside a literal and
// implicit multiplication are rejected.  Scalar subtrees are folded.
RatExprPtr parse(const std::string& text);

// Polynomial expressions only (no inv with variables under it).
NCPoly to_ncpoly(const RatExprPtr& e);
bool is_polynomial(const RatExprPtr& e);

// Power-series expansion by word length: inv nodes expand geometrically.
NCPoly expr_series(const RatExprPtr& e, int maxlen);

} // namespace ncdist
