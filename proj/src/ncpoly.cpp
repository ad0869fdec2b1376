#include "ncdist/ncpoly.hpp"

#include <algorithm>

namespace ncdist {

NCPoly NCPoly::constant(const Scalar& c) {
    NCPoly p;
    if (!c.is_zero()) p.t.emplace(Word{}, c);
    return p;
}

NCPoly NCPoly::variable(VarId v) {
    NCPoly p;
    p.t.emplace(Word{v}, Scalar(1));
    return p;
}

NCPoly NCPoly::monomial(const Word& w, const Scalar& c) {
    NCPoly p;
    if (!c.is_zero()) p.t.emplace(w, c);
    return p;
}

int NCPoly::degree() const {
    if (t.empty()) return -1;
    return (int)t.rbegin()->first.size();
}

Scalar NCPoly::eps() const { return coeff(Word{}); }

Scalar NCPoly::coeff(const Word& w) const {
    auto it = t.find(w);
    return it == t.end() ? Scalar() : it->second;
}

void NCPoly::add_term(const Word& w, const Scalar& c) {
    if (c.is_zero()) return;
    auto [it, fresh] = t.emplace(w, c);
    if (!fresh) {
        it->second += c;
        if (it->second.is_zero()) t.erase(it);
    }
}

NCPoly& NCPoly::operator+=(const NCPoly& o) {
    for (auto& [w, c] : o.t) add_term(w, c);
    return *this;
}

NCPoly& NCPoly::operator-=(const NCPoly& o) {
    for (auto& [w, c] : o.t) add_term(w, -c);
    return *this;
}

NCPoly operator*(const NCPoly& a, const NCPoly& b) {
    NCPoly out;
    for (auto& [wa, ca] : a.t)
        for (auto& [wb, cb] : b.t)
            out.add_term(word_concat(wa, wb), ca * cb);
    return out;
}

NCPoly NCPoly::scaled(const Scalar& c) const {
    NCPoly out;
    if (c.is_zero()) return out;
    for (auto& [w, k] : t) out.t.emplace(w, k * c);
    return out;
}

NCPoly NCPoly::truncated(int maxlen) const {
    NCPoly out;
    for (auto& [w, c] : t) {
        if ((int)w.size() > maxlen) break;   // map is graded by length
        out.t.emplace(w, c);
    }
    return out;
}

std::set<VarId> NCPoly::support_vars() const {
    std::set<VarId> vs;
    for (auto& [w, c] : t)
        for (VarId x : w) vs.insert(x);
    return vs;
}

namespace {

// coefficient * word, printed so that parse() round-trips
std::string term_str(const Word& w, const Scalar& c) {
    std::string ws = word_str(w);
    if (ws.empty()) {
        std::string cs = scalar_str(c);
        // mixed re+im needs parens only inside larger sums; standalone is fine
        return cs;
    }
    if (c.is_one()) return ws;
    if (c == Scalar(-1)) return "-" + ws;
    std::string cs = scalar_str(c);
    bool mixed = (c.re != 0 && c.im != 0);
    if (mixed) cs = "(" + cs + ")";
    return cs + "*" + ws;
}

} // namespace

std::string NCPoly::str() const {
    if (t.empty()) return "0";
    std::string out;
    bool first = true;
    for (auto& [w, c] : t) {
        std::string ts = term_str(w, c);
        if (first) {
            out = ts;
            first = false;
            continue;
        }
        if (!ts.empty() && ts[0] == '-')
            out += " - " + ts.substr(1);
        else
            out += " + " + ts;
    }
    return out;
}

void TensorElem::add(const Word& l, const Word& r, const Scalar& c) {
    if (c.is_zero()) return;
    terms.push_back(Term{l, r, c});
}

void TensorElem::normalize() {
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) {
        if (word_less(a.left, b.left)) return true;
        if (word_less(b.left, a.left)) return false;
        return word_less(a.right, b.right);
    });
    std::vector<Term> merged;
    for (auto& t : terms) {
        if (!merged.empty() && merged.back().left == t.left && merged.back().right == t.right) {
            merged.back().c += t.c;
        } else {
            merged.push_back(t);
        }
    }
    merged.erase(std::remove_if(merged.begin(), merged.end(),
                                [](const Term& t) { return t.c.is_zero(); }),
                 merged.end());
    terms = std::move(merged);
}

TensorElem& TensorElem::operator+=(const TensorElem& o) {
    terms.insert(terms.end(), o.terms.begin(), o.terms.end());
    normalize();
    return *this;
}

bool operator==(const TensorElem& a, const TensorElem& b) {
    TensorElem x = a, y = b;
    x.normalize();
    y.normalize();
    if (x.terms.size() != y.terms.size()) return false;
    for (size_t k = 0; k < x.terms.size(); ++k) {
        if (!(x.terms[k].left == y.terms[k].left)) return false;
        if (!(x.terms[k].right == y.terms[k].right)) return false;
        if (x.terms[k].c != y.terms[k].c) return false;
    }
    return true;
}

std::string TensorElem::str() const {
    if (terms.empty()) return "0";
    std::string out;
    for (size_t k = 0; k < terms.size(); ++k) {
        auto& t = terms[k];
        if (k) out += " + ";
        if (!t.c.is_one()) out += scalar_str(t.c) + "*";
        std::string l = t.left.empty() ? "1" : word_str(t.left);
        std::string r = t.right.empty() ? "1" : word_str(t.right);
        out += "[" + l + " (x) " + r + "]";
    }
    return out;
}

TensorElem TensorElem::lmul(const NCPoly& a) const {
    TensorElem out;
    for (auto& t : terms)
        for (auto& [w, c] : a.t)
            out.add(word_concat(w, t.left), t.right, c * t.c);
    out.normalize();
    return out;
}

TensorElem TensorElem::rmul(const NCPoly& b) const {
    TensorElem out;
    for (auto& t : terms)
        for (auto& [w, c] : b.t)
            out.add(t.left, word_concat(t.right, w), t.c * c);
    out.normalize();
    return out;
}

NCPoly TensorElem::contract(const NCPoly& mid) const {
    NCPoly out;
    for (auto& t : terms)
        for (auto& [w, c] : mid.t)
            out.add_term(word_concat(word_concat(t.left, w), t.right), t.c * c);
    return out;
}

} // namespace ncdist
