#include "ncdist/ratexpr.hpp"

namespace ncdist {

ParseError::ParseError(const std::string& msg, size_t p)
    : std::runtime_error(msg + " (at offset " + std::to_string(p) + ")"), pos(p) {}

RatExprPtr RatExpr::make_poly(NCPoly p) {
    auto e = std::make_shared<RatExpr>();
    e->kind = Poly;
    e->poly = std::move(p);
    return e;
}

RatExprPtr RatExpr::make_sum(std::vector<RatExprPtr> ks) {
    NCPoly folded;
    std::vector<RatExprPtr> rest;
    for (auto& k : ks) {
        if (k->is_poly())
            folded += k->poly;
        else
            rest.push_back(k);
    }
    if (rest.empty()) return make_poly(std::move(folded));
    if (!folded.is_zero()) rest.push_back(make_poly(std::move(folded)));
    if (rest.size() == 1) return rest[0];
    auto e = std::make_shared<RatExpr>();
    e->kind = Sum;
    e->kids = std::move(rest);
    return e;
}

RatExprPtr RatExpr::make_prod(std::vector<RatExprPtr> ks) {
    // fold adjacent polynomial factors; a zero factor kills the product
    std::vector<RatExprPtr> out;
    for (auto& k : ks) {
        if (k->is_poly() && k->poly.is_zero()) return make_poly(NCPoly::zero());
        if (k->is_poly() && !out.empty() && out.back()->is_poly()) {
            out.back() = make_poly(out.back()->poly * k->poly);
        } else {
            out.push_back(k);
        }
    }
    // drop unit factors
    std::vector<RatExprPtr> out2;
    for (auto& k : out) {
        if (k->is_poly() && k->poly == NCPoly::unit() && out.size() > 1) continue;
        out2.push_back(k);
    }
    if (out2.empty()) return make_poly(NCPoly::unit());
    if (out2.size() == 1) return out2[0];
    auto e = std::make_shared<RatExpr>();
    e->kind = Prod;
    e->kids = std::move(out2);
    return e;
}

RatExprPtr RatExpr::make_inv(RatExprPtr k) {
    Scalar c = k->eps();
    if (c.is_zero())
        throw std::domain_error("inv: operand has vanishing constant term, not invertible as a series");
    if (k->is_poly() && k->poly.degree() <= 0)
        return make_poly(NCPoly::constant(c.inv()));
    auto e = std::make_shared<RatExpr>();
    e->kind = Inv;
    e->kids = {std::move(k)};
    return e;
}

Scalar RatExpr::eps() const {
    switch (kind) {
        case Poly: return poly.eps();
        case Sum: {
            Scalar s;
            for (auto& k : kids) s += k->eps();
            return s;
        }
        case Prod: {
            Scalar s(1);
            for (auto& k : kids) s *= k->eps();
            return s;
        }
        case Inv: return kids[0]->eps().inv();
    }
    return Scalar();
}

std::set<VarId> RatExpr::support_vars() const {
    if (kind == Poly) return poly.support_vars();
    std::set<VarId> vs;
    for (auto& k : kids) {
        auto sub = k->support_vars();
        vs.insert(sub.begin(), sub.end());
    }
    return vs;
}

std::string RatExpr::str() const {
    switch (kind) {
        case Poly: return poly.str();
        case Sum: {
            std::string out;
            for (size_t k = 0; k < kids.size(); ++k) {
                if (k) out += " + ";
                bool par = kids[k]->kind == Sum;
                out += par ? "(" + kids[k]->str() + ")" : kids[k]->str();
            }
            return out;
        }
        case Prod: {
            std::string out;
            for (size_t k = 0; k < kids.size(); ++k) {
                if (k) out += "*";
                auto& kid = kids[k];
                bool par = kid->kind == Sum || kid->kind == Prod ||
                           (kid->is_poly() && kid->poly.t.size() > 1);
                out += par ? "(" + kid->str() + ")" : kid->str();
            }
            return out;
        }
        case Inv: return "inv(" + kids[0]->str() + ")";
    }
    return "";
}

namespace {

enum class Tok { Num, Ident, Imag, InvKw, Plus, Minus, Star, LParen, RParen, End };

struct Lexer {
    const std::string& s;
    size_t p = 0;
    Tok tok = Tok::End;
    size_t tok_pos = 0;
    mpq_class num;
    std::string ident;

    explicit Lexer(const std::string& text) : s(text) { next(); }

    void next() {
        while (p < s.size() && isspace((unsigned char)s[p])) ++p;
        tok_pos = p;
        if (p >= s.size()) {
            tok = Tok::End;
            return;
        }
        char c = s[p];
        if (isdigit((unsigned char)c)) {
            size_t start = p;
            while (p < s.size() && isdigit((unsigned char)s[p])) ++p;
            std::string lit = s.substr(start, p - start);
            if (p < s.size() && s[p] == '/') {
                if (p + 1 >= s.size() || !isdigit((unsigned char)s[p + 1]))
                    throw ParseError("division is not supported; use inv(...) or a rational literal p/q", p);
                ++p;
                size_t ds = p;
                while (p < s.size() && isdigit((unsigned char)s[p])) ++p;
                std::string den = s.substr(ds, p - ds);
                if (mpz_class(den) == 0) throw ParseError("zero denominator", ds);
                lit += "/" + den;
            }
            num = mpq_class(lit);
            num.canonicalize();
            tok = Tok::Num;
            return;
        }
        if (isalpha((unsigned char)c) || c == '_') {
            size_t start = p;
            while (p < s.size() && (isalnum((unsigned char)s[p]) || s[p] == '_')) ++p;
            ident = s.substr(start, p - start);
            if (ident == "i")
                tok = Tok::Imag;
            else if (ident == "inv")
                tok = Tok::InvKw;
            else
                tok = Tok::Ident;
            return;
        }
        ++p;
        switch (c) {
            case '+': tok = Tok::Plus; return;
            case '-': tok = Tok::Minus; return;
            case '*': tok = Tok::Star; return;
            case '(': tok = Tok::LParen; return;
            case ')': tok = Tok::RParen; return;
            case '/': throw ParseError("division is not supported; use inv(...) or a rational literal p/q", tok_pos);
            default: throw ParseError(std::string("unexpected character '") + c + "'", tok_pos);
        }
    }
};

struct Parser {
    Lexer lx;
    explicit Parser(const std::string& text) : lx(text) {}

    bool starts_factor() const {
        switch (lx.tok) {
            case Tok::Num:
            case Tok::Ident:
            case Tok::Imag:
            case Tok::InvKw:
            case Tok::LParen:
                return true;
            default:
                return false;
        }
    }

    RatExprPtr expr() {
        std::vector<RatExprPtr> parts;
        parts.push_back(term());
        while (lx.tok == Tok::Plus || lx.tok == Tok::Minus) {
            bool neg = lx.tok == Tok::Minus;
            lx.next();
            RatExprPtr t = term();
            if (neg) t = RatExpr::make_prod({RatExpr::make_poly(NCPoly::constant(Scalar(-1))), t});
            parts.push_back(t);
        }
        return RatExpr::make_sum(std::move(parts));
    }

    RatExprPtr term() {
        std::vector<RatExprPtr> parts;
        parts.push_back(factor());
        for (;;) {
            if (lx.tok == Tok::Star) {
                lx.next();
                parts.push_back(factor());
                continue;
            }
            if (starts_factor())
                throw ParseError("implicit multiplication is not allowed; insert '*'", lx.tok_pos);
            break;
        }
        return RatExpr::make_prod(std::move(parts));
    }

    RatExprPtr factor() {
        if (lx.tok == Tok::Minus) {
            lx.next();
            return RatExpr::make_prod({RatExpr::make_poly(NCPoly::constant(Scalar(-1))), factor()});
        }
        return primary();
    }

    RatExprPtr primary() {
        switch (lx.tok) {
            case Tok::Num: {
                Scalar c(lx.num);
                lx.next();
                return RatExpr::make_poly(NCPoly::constant(c));
            }
            case Tok::Imag:
                lx.next();
                return RatExpr::make_poly(NCPoly::constant(Scalar::I()));
            case Tok::Ident: {
                VarId v = var(lx.ident);
                lx.next();
                return RatExpr::make_poly(NCPoly::variable(v));
            }
            case Tok::LParen: {
                lx.next();
                RatExprPtr e = expr();
                if (lx.tok != Tok::RParen) throw ParseError("expected ')'", lx.tok_pos);
                lx.next();
                return e;
            }
            case Tok::InvKw: {
                size_t at = lx.tok_pos;
                lx.next();
                if (lx.tok != Tok::LParen) throw ParseError("expected '(' after inv", lx.tok_pos);
                lx.next();
                RatExprPtr e = expr();
                if (lx.tok != Tok::RParen) throw ParseError("expected ')'", lx.tok_pos);
                lx.next();
                try {
                    return RatExpr::make_inv(e);
                } catch (const std::domain_error& err) {
                    throw ParseError(err.what(), at);
                }
            }
            default:
                throw ParseError("expected a number, variable, '(' or inv(...)", lx.tok_pos);
        }
    }
};

} // namespace

RatExprPtr parse(const std::string& text) {
    Parser p(text);
    RatExprPtr e = p.expr();
    if (p.lx.tok != Tok::End) throw ParseError("unexpected trailing input", p.lx.tok_pos);
    return e;
}

NCPoly to_ncpoly(const RatExprPtr& e) {
    switch (e->kind) {
        case RatExpr::Poly: return e->poly;
        case RatExpr::Sum: {
            NCPoly acc;
            for (auto& k : e->kids) acc += to_ncpoly(k);
            return acc;
        }
        case RatExpr::Prod: {
            NCPoly acc = NCPoly::unit();
            for (auto& k : e->kids) acc *= to_ncpoly(k);
            return acc;
        }
        case RatExpr::Inv:
            throw std::invalid_argument("to_ncpoly: expression contains inv() over variables");
    }
    return NCPoly();
}

bool is_polynomial(const RatExprPtr& e) {
    if (e->kind == RatExpr::Inv) return false;
    for (auto& k : e->kids)
        if (!is_polynomial(k)) return false;
    return true;
}

NCPoly expr_series(const RatExprPtr& e, int maxlen) {
    switch (e->kind) {
        case RatExpr::Poly: return e->poly.truncated(maxlen);
        case RatExpr::Sum: {
            NCPoly acc;
            for (auto& k : e->kids) acc += expr_series(k, maxlen);
            return acc;
        }
        case RatExpr::Prod: {
            NCPoly acc = NCPoly::unit();
            for (auto& k : e->kids) acc = (acc * expr_series(k, maxlen)).truncated(maxlen);
            return acc;
        }
        case RatExpr::Inv: {
            NCPoly kp = expr_series(e->kids[0], maxlen);
            Scalar c = kp.eps();   // nonzero by construction
            NCPoly prop = NCPoly::unit() - kp.scaled(c.inv());   // no constant term
            NCPoly acc = NCPoly::unit(), pw = NCPoly::unit();
            for (int k = 1; k <= maxlen; ++k) {
                pw = (pw * prop).truncated(maxlen);
                if (pw.is_zero()) break;
                acc += pw;
            }
            return acc.scaled(c.inv());
        }
    }
    return NCPoly();
}

} // namespace ncdist
