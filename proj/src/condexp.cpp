#include "ncdist/condexp.hpp"

#include "ncdist/deriv.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace ncdist {

namespace {

bool retained_letter(VarId v, const std::set<std::string>& retain) {
    return retain.count(var_algebra(v)) != 0;
}

// leading / trailing maximal retained runs; core is what remains
struct Stripped {
    Word pre, core, suf;
};

Stripped strip_retained(const Word& w, const std::set<std::string>& retain) {
    Stripped s;
    size_t a = 0, b = w.size();
    while (a < b && retained_letter(w[a], retain)) ++a;
    while (b > a && retained_letter(w[b - 1], retain)) --b;
    s.pre.assign(w.begin(), w.begin() + a);
    s.core.assign(w.begin() + a, w.begin() + b);
    s.suf.assign(w.begin() + b, w.end());
    return s;
}

struct CondExpCtx {
    const Embedding& e;
    const std::set<std::string>& retain;
    std::set<std::string> integ;     // every bound algebra that is not retained
    std::map<Word, NCPoly, WordLess> memo;

    CondExpCtx(const Embedding& emb, const std::set<std::string>& r) : e(emb), retain(r) {
        for (const std::string& t : emb.algebras())
            if (!r.count(t)) integ.insert(t);
    }

    // E[w]; w arbitrary
    const NCPoly& eval(const Word& w) {
        auto it = memo.find(w);
        if (it != memo.end()) return it->second;
        NCPoly r = compute(w);
        return memo.emplace(w, std::move(r)).first->second;
    }

    NCPoly compute(const Word& w) {
        if (w.empty()) return NCPoly::unit();
        Stripped s = strip_retained(w, retain);
        if (s.core.empty()) return NCPoly::monomial(word_concat(s.pre, s.suf), Scalar(1));
        // core starts and ends in the integrated side; peel off one retained
        // run at a time: E[core] = beta.(core) + sum_splits beta.(l) * E[r],
        // where r starts with a retained run and is strictly shorter.
        NCPoly mid = NCPoly::constant(bbeta(e, NCPoly::monomial(s.core, Scalar(1)), integ));
        TensorElem splits = block_delta_right(NCPoly::monomial(s.core, Scalar(1)), retain);
        for (const auto& t : splits.terms) {
            Scalar c = bbeta(e, NCPoly::monomial(t.left, Scalar(1)), integ) * t.c;
            if (c.is_zero()) continue;
            mid = mid + eval(t.right).scaled(c);
        }
        NCPoly out;
        for (const auto& [mw, mc] : mid.t)
            out.add_term(word_concat(s.pre, word_concat(mw, s.suf)), mc);
        return out;
    }
};

} // namespace

NCPoly cond_exp_poly(const NCPoly& p, const std::set<std::string>& retain, const Embedding& e) {
    for (VarId x : p.support_vars()) e.dist_of(x);   // throws on unbound letters
    CondExpCtx ctx(e, retain);
    NCPoly out;
    for (const auto& [w, c] : p.t) out = out + ctx.eval(w).scaled(c);
    return out;
}

NCPoly cond_exp_poly(const NCPoly& p, const std::string& retain, const Embedding& e) {
    return cond_exp_poly(p, std::set<std::string>{retain}, e);
}

NCPoly cond_exp_word_direct(const Word& w, const std::set<std::string>& retain,
                            const Embedding& e) {
    std::set<std::string> integ;
    for (const std::string& t : e.algebras())
        if (!retain.count(t)) integ.insert(t);
    Stripped s = strip_retained(w, retain);
    if (s.core.empty()) return NCPoly::monomial(word_concat(s.pre, s.suf), Scalar(1));

    AltFactorization f = alternating_factorization(s.core, integ);
    // blocks: a_1 b_1 a_2 ... b_{n-1} a_n with the a's on the integrated side
    std::vector<Word> as, bs;
    for (const auto& [blk, inA] : f.blocks) (inA ? as : bs).push_back(blk);
    int n = (int)as.size();

    // sum over the retained blocks that survive: for a selection
    // i_1 < ... < i_k the output word is b_{i_1}...b_{i_k} and the weight is
    // the product of one alternating cumulant per gap between selections.
    NCPoly mid;
    int nsel = n - 1;
    for (uint32_t mask = 0; mask < (1u << nsel); ++mask) {
        std::vector<int> sel;
        for (int i = 0; i < nsel; ++i)
            if (mask & (1u << i)) sel.push_back(i + 1);   // 1-based block index
        Scalar coeff(1);
        int lo = 0;   // i_0 = 0, i_{k+1} = n
        Word outw;
        for (size_t j = 0; j <= sel.size() && !coeff.is_zero(); ++j) {
            int hi = j < sel.size() ? sel[j] : n;
            std::vector<Word> args;
            for (int t = lo + 1; t <= hi; ++t) {
                args.push_back(as[t - 1]);
                if (t < hi) args.push_back(bs[t - 1]);
            }
            coeff *= mixed_boolean_cumulant(e, args);
            if (j < sel.size()) {
                outw = word_concat(outw, bs[sel[j] - 1]);
                lo = sel[j];
            }
        }
        if (!coeff.is_zero()) mid.add_term(outw, coeff);
    }

    NCPoly out;
    for (const auto& [mw, mc] : mid.t)
        out.add_term(word_concat(s.pre, word_concat(mw, s.suf)), mc);
    return out;
}

// --- pencil-side integration -------------------------------------------------

SubordinatedPencil integrate_out(const GradedPencil& pen, const SolveResult& sol,
                                 const std::set<VarId>& retain) {
    if (pen.m < 1) throw std::invalid_argument("integrate_out: graded pencils only");
    SubordinatedPencil sp;
    sp.N = pen.dim;
    sp.m = pen.m;
    sp.u = pen.u;
    sp.v = pen.v;
    sp.absorbed = MatSeries(pen.dim, sol.K);
    for (VarId x : pen.letters()) {
        if (retain.count(x)) {
            sp.retained.emplace(x, pen.mat(x));
            continue;
        }
        auto it = sol.F.find(x);
        if (it == sol.F.end())
            throw std::invalid_argument("integrate_out: no fixed-point series for letter " +
                                        var_name(x));
        if (it->second.N != pen.dim)
            throw std::invalid_argument("integrate_out: solution dimension mismatch");
        sp.absorbed = sp.absorbed + MatSeries::from_poly(pen.mat(x), sol.K) * it->second;
    }
    return sp;
}

namespace {

// row-vector valued series; r[k] has length N
using VecSeries = std::vector<std::vector<Scalar>>;

VecSeries row_times_series(const VecSeries& r, const MatSeries& S) {
    int K = (int)r.size() - 1, N = S.N;
    VecSeries out(K + 1, std::vector<Scalar>(N));
    for (int a = 0; a <= K; ++a)
        for (int b = S.lead; a + b <= K; ++b) {
            const Mat& M = S.c[b];
            if (M.is_zero()) continue;
            for (int i = 0; i < N; ++i) {
                const Scalar& ri = r[a][i];
                if (ri.is_zero()) continue;
                for (int j = 0; j < N; ++j) out[a + b][j] += ri * M.at(i, j);
            }
        }
    return out;
}

// r * C(z) * z  (one pencil edge for a retained letter)
VecSeries row_times_edge(const VecSeries& r, const PolyMat& C) {
    int K = (int)r.size() - 1, N = C.m;
    VecSeries out(K + 1, std::vector<Scalar>(N));
    for (int d = 0; d <= C.zdeg(); ++d) {
        Mat Cd = C.coeff(d);
        if (Cd.is_zero()) continue;
        for (int a = 0; a + d + 1 <= K; ++a)
            for (int i = 0; i < N; ++i) {
                const Scalar& ri = r[a][i];
                if (ri.is_zero()) continue;
                for (int j = 0; j < N; ++j) out[a + d + 1][j] += ri * Cd.at(i, j);
            }
    }
    return out;
}

ScalarSeries row_dot(const VecSeries& r, const std::vector<Scalar>& v) {
    ScalarSeries s((int)r.size() - 1);
    for (int k = 0; k <= s.K; ++k)
        for (size_t i = 0; i < v.size(); ++i) s.c[k] += r[k][i] * v[i];
    return s;
}

void expand_rec(const VecSeries& row, const Word& w, int maxLen, const SubordinatedPencil& sp,
                const MatSeries& R, std::map<Word, ScalarSeries, WordLess>& out) {
    out.emplace(w, row_dot(row, sp.v));
    if ((int)w.size() >= maxLen) return;
    for (const auto& [x, C] : sp.retained) {
        Word wx = w;
        wx.push_back(x);
        expand_rec(row_times_series(row_times_edge(row, C), R), wx, maxLen, sp, R, out);
    }
}

} // namespace

std::map<Word, ScalarSeries, WordLess> expand_in_retained(const SubordinatedPencil& sp,
                                                          int maxLen) {
    if (maxLen < 0) throw std::invalid_argument("expand_in_retained: negative word length");
    int K = sp.absorbed.K, N = sp.N;
    MatSeries R = (MatSeries::id(N, K) - sp.absorbed.shifted(1)).inverse();
    VecSeries row(K + 1, std::vector<Scalar>(N));
    row[0] = sp.u;
    row = row_times_series(row, R);
    std::map<Word, ScalarSeries, WordLess> out;
    expand_rec(row, Word(), maxLen, sp, R, out);
    return out;
}

ScalarSeries moment_series(const GradedPencil& pen, const SolveResult& sol) {
    if (pen.m <= 1) return sol.M;
    int K2 = sol.M.K / pen.m;
    ScalarSeries r(K2);
    for (int k = 0; k <= sol.M.K; ++k) {
        if (k % pen.m == 0 && k / pen.m <= K2) {
            r.c[k / pen.m] = sol.M.c[k];
        } else if (!sol.M.c[k].is_zero()) {
            throw std::domain_error("moment_series: coefficient off the grading lattice");
        }
    }
    return r;
}

// --- equation checker --------------------------------------------------------

namespace {

struct EqParser {
    const std::string& s;
    size_t pos = 0;
    int K;
    const std::map<std::string, ScalarSeries>& env;

    EqParser(const std::string& text, int order,
             const std::map<std::string, ScalarSeries>& bindings)
        : s(text), K(order), env(bindings) {}

    void ws() {
        while (pos < s.size() && std::isspace((unsigned char)s[pos])) ++pos;
    }
    bool eat(char c) {
        ws();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& what) {
        throw std::invalid_argument("check_equation: " + what + " at offset " +
                                    std::to_string(pos));
    }

    ScalarSeries expr() {
        ScalarSeries r = term();
        for (;;) {
            if (eat('+'))
                r = r + term();
            else if (eat('-'))
                r = r - term();
            else
                return r;
        }
    }

    ScalarSeries term() {
        ScalarSeries r = factor();
        while (eat('*')) r = r * factor();
        return r;
    }

    ScalarSeries factor() {
        ScalarSeries r = primary();
        ws();
        if (eat('^')) {
            ws();
            size_t start = pos;
            while (pos < s.size() && std::isdigit((unsigned char)s[pos])) ++pos;
            if (pos == start) fail("exponent expected");
            r = r.pow(std::stoi(s.substr(start, pos - start)));
        }
        return r;
    }

    ScalarSeries primary() {
        ws();
        if (pos >= s.size()) fail("unexpected end");
        char c = s[pos];
        if (c == '(') {
            ++pos;
            ScalarSeries r = expr();
            if (!eat(')')) fail("')' expected");
            return r;
        }
        if (c == '-') {
            ++pos;
            return ScalarSeries(K) - factor();
        }
        if (std::isdigit((unsigned char)c)) {
            long num = integer();
            if (eat('/')) {
                ws();
                if (pos >= s.size() || !std::isdigit((unsigned char)s[pos]))
                    fail("denominator expected");
                long den = integer();
                return ScalarSeries::one(K).scaled(Scalar::rational(num, den));
            }
            return ScalarSeries::one(K).scaled(Scalar(num));
        }
        if (std::isalpha((unsigned char)c) || c == '_') {
            size_t start = pos;
            while (pos < s.size() &&
                   (std::isalnum((unsigned char)s[pos]) || s[pos] == '_'))
                ++pos;
            std::string name = s.substr(start, pos - start);
            if (name == "z") return ScalarSeries::z(K);
            if (name == "i") return ScalarSeries::one(K).scaled(Scalar::I());
            auto it = env.find(name);
            if (it == env.end()) fail("unbound name '" + name + "'");
            ScalarSeries r(K);
            for (int k = 0; k <= K; ++k) r.c[k] = it->second.coeff(k);
            return r;
        }
        fail("unexpected character");
    }

    long integer() {
        size_t start = pos;
        while (pos < s.size() && std::isdigit((unsigned char)s[pos])) ++pos;
        return std::stol(s.substr(start, pos - start));
    }
};

} // namespace

ScalarSeries equation_residual(const std::string& eq,
                               const std::map<std::string, ScalarSeries>& bindings) {
    if (bindings.empty())
        throw std::invalid_argument("check_equation: no series bound");
    int K = bindings.begin()->second.K;
    for (const auto& [_, s] : bindings) K = std::min(K, s.K);
    EqParser p(eq, K, bindings);
    ScalarSeries r = p.expr();
    p.ws();
    if (p.pos != eq.size()) p.fail("trailing input");
    return r;
}

int check_equation(const std::string& eq,
                   const std::map<std::string, ScalarSeries>& bindings) {
    return equation_residual(eq, bindings).valuation();
}

// --- additive subordination --------------------------------------------------

AdditiveSubordination subordination_additive(const Dist& dX, const Dist& dY, int K) {
    VarId x = var("X"), y = var("Y");
    GradedPencil pen;
    pen.dim = 1;
    pen.m = 1;
    pen.u = {Scalar(1)};
    pen.v = {Scalar(1)};
    PolyMat one(1, 1);
    one.at(0, 0) = ZPoly(Scalar(1));
    pen.mats.emplace(x, one);
    pen.mats.emplace(y, one);

    Embedding emb;
    emb.bind(x, dX);
    emb.bind(y, dY);
    SolveResult sol = solve_pencil(pen, emb, K);

    AdditiveSubordination r;
    r.M = sol.M;
    r.FX = ScalarSeries(K);
    r.FY = ScalarSeries(K);
    for (int k = 0; k <= K; ++k) {
        r.FX.c[k] = sol.F.at(x).coeff(k).at(0, 0);
        r.FY.c[k] = sol.F.at(y).coeff(k).at(0, 0);
    }
    r.omega = ScalarSeries::z(K) * (ScalarSeries::one(K) - ScalarSeries::z(K) * r.FY).inverse();
    return r;
}

} // namespace ncdist
