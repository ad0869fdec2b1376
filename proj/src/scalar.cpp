#include "ncdist/scalar.hpp"

namespace ncdist {

std::string rat_str(const mpq_class& q) { return q.get_str(); }

static std::string imag_part_str(const mpq_class& im) {
    if (im == 1) return "i";
    if (im == -1) return "-i";
    return rat_str(im) + "*i";
}

std::string scalar_str(const Scalar& s) {
    if (s.im == 0) return rat_str(s.re);
    if (s.re == 0) return imag_part_str(s.im);
    std::string out = rat_str(s.re);
    if (s.im > 0)
        out += "+" + imag_part_str(s.im);
    else
        out += "-" + imag_part_str(mpq_class(-s.im));
    return out;
}

namespace {

struct ScalCursor {
    const std::string& s;
    size_t p = 0;
    void skip() { while (p < s.size() && isspace((unsigned char)s[p])) ++p; }
    bool done() { skip(); return p >= s.size(); }
    char peek() { skip(); return p < s.size() ? s[p] : '\0'; }
};

mpq_class parse_rat(ScalCursor& c) {
    c.skip();
    size_t start = c.p;
    while (c.p < c.s.size() && isdigit((unsigned char)c.s[c.p])) ++c.p;
    if (c.p == start) throw std::invalid_argument("scalar: expected digits in '" + c.s + "'");
    std::string num = c.s.substr(start, c.p - start);
    if (c.p < c.s.size() && c.s[c.p] == '/') {
        ++c.p;
        size_t ds = c.p;
        while (c.p < c.s.size() && isdigit((unsigned char)c.s[c.p])) ++c.p;
        if (c.p == ds) throw std::invalid_argument("scalar: bad denominator in '" + c.s + "'");
        num += "/" + c.s.substr(ds, c.p - ds);
    }
    mpq_class q(num);
    q.canonicalize();
    return q;
}

// term := ['-'|'+'] ( 'i' | rat ['*' 'i'] )
void parse_term(ScalCursor& c, Scalar& acc) {
    int sign = 1;
    char ch = c.peek();
    if (ch == '+' || ch == '-') {
        if (ch == '-') sign = -1;
        ++c.p;
        ch = c.peek();
    }
    if (ch == 'i') {
        ++c.p;
        acc.im += sign;
        return;
    }
    mpq_class q = parse_rat(c);
    if (c.peek() == '*') {
        ++c.p;
        if (c.peek() != 'i') throw std::invalid_argument("scalar: expected i after * in '" + c.s + "'");
        ++c.p;
        acc.im += sign * q;
    } else {
        acc.re += sign * q;
    }
}

} // namespace

Scalar scalar_from_string(const std::string& s) {
    ScalCursor c{s};
    Scalar acc;
    parse_term(c, acc);
    if (!c.done()) {
        char ch = c.peek();
        if (ch != '+' && ch != '-')
            throw std::invalid_argument("scalar: trailing junk in '" + s + "'");
        parse_term(c, acc);
    }
    if (!c.done()) throw std::invalid_argument("scalar: trailing junk in '" + s + "'");
    return acc;
}

} // namespace ncdist
