#include "ncdist/linrep.hpp"

#include "ncdist/matq.hpp"

#include "json.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <numeric>
#include <set>
#include <stdexcept>

namespace ncdist {

namespace {

std::vector<VarId> by_name(const std::set<VarId>& s) {
    std::vector<VarId> v(s.begin(), s.end());
    std::sort(v.begin(), v.end(),
              [](VarId a, VarId b) { return var_name(a) < var_name(b); });
    return v;
}

std::vector<Scalar> unit_vec(int n, int k) {
    std::vector<Scalar> e(n);
    e[k] = Scalar(1);
    return e;
}

// left quotient x^{-1} p: strip a leading x from every word that has one
NCPoly left_quot(const NCPoly& p, VarId x) {
    NCPoly q;
    for (const auto& [w, c] : p.t)
        if (!w.empty() && w[0] == x) q.add_term(Word(w.begin() + 1, w.end()), c);
    return q;
}

// Reduced echelon basis of polynomials, pivoted on leading (graded-lex
// smallest) words.  No element contains another element's pivot word, so a
// single subtraction pass decomposes exactly.
struct PolyBasis {
    std::vector<NCPoly> elems;
    std::vector<Word> pivots;

    std::vector<Scalar> reduce(NCPoly& p) const {
        std::vector<Scalar> c(elems.size());
        for (size_t i = 0; i < elems.size(); ++i) {
            Scalar a = p.coeff(pivots[i]);
            if (!a.is_zero()) {
                p -= elems[i].scaled(a);
                c[i] = a;
            }
        }
        return c;
    }

    int add(NCPoly p) {
        reduce(p);
        if (p.t.empty()) return -1;
        Word piv = p.t.begin()->first;
        NCPoly monic = p.scaled(p.t.begin()->second.inv());
        for (auto& e : elems) {
            Scalar a = e.coeff(piv);
            if (!a.is_zero()) e -= monic.scaled(a);
        }
        elems.push_back(std::move(monic));
        pivots.push_back(std::move(piv));
        return (int)elems.size() - 1;
    }
};

// Reduced echelon basis of coordinate vectors; same invariants as PolyBasis.
struct VecBasis {
    std::vector<std::vector<Scalar>> rows;
    std::vector<int> pivots;

    std::vector<Scalar> reduce(std::vector<Scalar>& r) const {
        std::vector<Scalar> c(rows.size());
        for (size_t i = 0; i < rows.size(); ++i) {
            Scalar a = r[pivots[i]];
            if (!a.is_zero()) {
                for (size_t k = 0; k < r.size(); ++k) r[k] -= a * rows[i][k];
                c[i] = a;
            }
        }
        return c;
    }

    int add(std::vector<Scalar> r) {
        reduce(r);
        int piv = -1;
        for (size_t k = 0; k < r.size(); ++k)
            if (!r[k].is_zero()) { piv = (int)k; break; }
        if (piv < 0) return -1;
        Scalar lead = r[piv].inv();
        for (auto& x : r) x *= lead;
        for (auto& e : rows) {
            Scalar a = e[piv];
            if (!a.is_zero())
                for (size_t k = 0; k < e.size(); ++k) e[k] -= a * r[k];
        }
        rows.push_back(std::move(r));
        pivots.push_back(piv);
        return (int)rows.size() - 1;
    }

    // exact decomposition; the argument must lie in the span
    std::vector<Scalar> coords(std::vector<Scalar> r) const {
        auto c = reduce(r);
        for (const auto& x : r)
            if (!x.is_zero()) throw std::logic_error("VecBasis: vector outside span");
        return c;
    }
};

} // namespace

// --- LinRep / GradedPencil basics ----------------------------------------

const Mat& LinRep::mat(VarId x) const {
    auto it = mats.find(x);
    if (it != mats.end()) return it->second;
    static std::map<int, Mat> zeros;
    auto z = zeros.find(dim);
    if (z == zeros.end()) z = zeros.emplace(dim, Mat(dim, dim)).first;
    return z->second;
}

Scalar LinRep::coeff(const Word& w) const {
    std::vector<Scalar> row = u;
    for (VarId x : w) row = vec_mat(row, mat(x));
    return dot(row, v);
}

std::vector<VarId> LinRep::letters() const {
    std::set<VarId> s;
    for (const auto& [x, mx] : mats)
        if (!mx.is_zero()) s.insert(x);
    return by_name(s);
}

const PolyMat& GradedPencil::mat(VarId x) const {
    auto it = mats.find(x);
    if (it != mats.end()) return it->second;
    static std::map<int, PolyMat> zeros;
    auto z = zeros.find(dim);
    if (z == zeros.end()) z = zeros.emplace(dim, PolyMat(dim, dim)).first;
    return z->second;
}

std::vector<VarId> GradedPencil::letters() const {
    std::set<VarId> s;
    for (const auto& [x, mx] : mats)
        if (!mx.is_zero()) s.insert(x);
    return by_name(s);
}

// --- suffix linearization --------------------------------------------------

GradedPencil suffix_linearize(const NCPoly& p) {
    if (p.t.empty()) throw std::domain_error("suffix_linearize: zero polynomial");
    if (!p.eps().is_zero())
        throw std::domain_error("suffix_linearize: nonzero constant term");
    int m = p.degree();
    std::vector<VarId> vars = by_name(p.support_vars());

    // close the span of P's one-letter left quotients, splitting every new
    // element into homogeneous components (unit parts route through the
    // resolvent state and never enter the basis)
    PolyBasis basis;
    std::deque<NCPoly> queue;
    queue.push_back(p);
    while (!queue.empty()) {
        NCPoly s = queue.front();
        queue.pop_front();
        for (VarId x : vars) {
            NCPoly t = left_quot(s, x);
            std::map<int, NCPoly> comps;
            for (const auto& [w, c] : t.t)
                if (!w.empty()) comps[(int)w.size()].add_term(w, c);
            for (auto& [d, q] : comps) {
                int idx = basis.add(q);
                if (idx >= 0) queue.push_back(basis.elems[idx]);
            }
        }
    }

    // state order: Psi, then degree descending, then pivot word
    std::vector<int> order(basis.elems.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        int da = (int)basis.pivots[a].size(), db = (int)basis.pivots[b].size();
        if (da != db) return da > db;
        return word_less(basis.pivots[a], basis.pivots[b]);
    });
    std::vector<int> row_of(basis.elems.size());
    for (size_t k = 0; k < order.size(); ++k) row_of[order[k]] = 1 + (int)k;

    int N = 1 + (int)basis.elems.size();
    GradedPencil pen;
    pen.dim = N;
    pen.m = m;
    pen.u = unit_vec(N, 0);
    pen.v = unit_vec(N, 0);
    for (VarId x : vars) pen.mats.emplace(x, PolyMat(N, N));

    // state row `i` holds z^{d_i} S_i Psi (d_0 = m, S_0 = P feeding Psi);
    // an edge into the basis element of degree d_j carries z^{d_i - d_j},
    // one factor of which the pencil convention absorbs
    auto emit = [&](int fromRow, int fromDeg, const NCPoly& state) {
        for (VarId x : vars) {
            NCPoly t = left_quot(state, x);
            if (t.t.empty()) continue;
            PolyMat& cx = pen.mats.at(x);
            Scalar un = t.eps();
            if (!un.is_zero())
                cx.at(fromRow, 0) = cx.at(fromRow, 0) + ZPoly::zmono(fromDeg - 1, un);
            NCPoly proper = t;
            if (!un.is_zero()) proper -= NCPoly::constant(un);
            auto coeffs = basis.reduce(proper);
            if (!proper.t.empty())
                throw std::logic_error("suffix_linearize: span not closed");
            for (size_t j = 0; j < coeffs.size(); ++j) {
                if (coeffs[j].is_zero()) continue;
                int dj = (int)basis.pivots[j].size();
                cx.at(fromRow, row_of[j]) =
                    cx.at(fromRow, row_of[j]) + ZPoly::zmono(fromDeg - 1 - dj, coeffs[j]);
            }
        }
    };
    emit(0, m, p);
    for (size_t j = 0; j < basis.elems.size(); ++j)
        emit(row_of[j], (int)basis.pivots[j].size(), basis.elems[j]);
    return pen;
}

// --- automaton linearization ------------------------------------------------

GradedPencil automaton_linearize(const NCPoly& p) {
    if (p.t.empty()) throw std::domain_error("automaton_linearize: zero polynomial");
    if (!p.eps().is_zero())
        throw std::domain_error("automaton_linearize: nonzero constant term");
    int m = p.degree();
    std::vector<std::pair<Word, Scalar>> mons(p.t.begin(), p.t.end());
    for (const auto& [w, c] : mons)
        if ((int)w.size() != m)
            throw std::domain_error("automaton_linearize: polynomial is not homogeneous");

    int T = (int)mons.size();
    int N = T * m;
    GradedPencil pen;
    pen.dim = N;
    pen.m = m;
    pen.u = unit_vec(N, m - 1);               // last letter of the first monomial
    pen.v = std::vector<Scalar>(N);
    for (VarId x : by_name(p.support_vars())) pen.mats.emplace(x, PolyMat(N, N));

    // state (t,pos) = z^{m-1-pos} * (suffix after pos) * Psi; rows read the
    // entered occurrence's letter, monomial coefficients ride the closing edges
    for (int t = 0; t < T; ++t) {
        const Word& w = mons[t].first;
        for (int pos = 0; pos + 1 < m; ++pos) {
            PolyMat& cx = pen.mats.at(w[pos + 1]);
            int r = t * m + pos;
            cx.at(r, r + 1) = cx.at(r, r + 1) + ZPoly(Scalar(1));
        }
        int last = t * m + (m - 1);
        pen.v[last] = Scalar(1);
        for (int s = 0; s < T; ++s) {
            PolyMat& cx = pen.mats.at(mons[s].first[0]);
            cx.at(last, s * m) = cx.at(last, s * m) + ZPoly(mons[s].second);
        }
    }
    return pen;
}

// --- rational series calculus ------------------------------------------------

LinRep rep_const(const Scalar& c) {
    LinRep r;
    r.dim = 1;
    r.u = {Scalar(1)};
    r.v = {c};
    return r;
}

LinRep rep_var(VarId x) {
    LinRep r;
    r.dim = 2;
    r.u = unit_vec(2, 0);
    r.v = unit_vec(2, 1);
    Mat mx(2, 2);
    mx.at(0, 1) = Scalar(1);
    r.mats.emplace(x, std::move(mx));
    return r;
}

LinRep rep_poly(const NCPoly& p) {
    // one chain per monomial off a shared start state
    int dim = 1;
    for (const auto& [w, c] : p.t) dim += (int)w.size();
    LinRep r;
    r.dim = dim;
    r.u = unit_vec(dim, 0);
    r.v = std::vector<Scalar>(dim);
    r.v[0] = p.eps();
    for (VarId x : p.support_vars()) r.mats.emplace(x, Mat(dim, dim));
    int next = 1;
    for (const auto& [w, c] : p.t) {
        if (w.empty()) continue;
        int prev = 0;
        for (VarId x : w) {
            r.mats.at(x).at(prev, next) = Scalar(1);
            prev = next++;
        }
        r.v[prev] = c;
    }
    return r;
}

LinRep rep_scale(const LinRep& a, const Scalar& c) {
    LinRep r = a;
    for (auto& x : r.v) x *= c;
    return r;
}

LinRep rep_sum(const LinRep& a, const LinRep& b) {
    LinRep r;
    r.dim = a.dim + b.dim;
    r.u = a.u;
    r.u.insert(r.u.end(), b.u.begin(), b.u.end());
    r.v = a.v;
    r.v.insert(r.v.end(), b.v.begin(), b.v.end());
    std::set<VarId> keys;
    for (const auto& [x, mx] : a.mats) keys.insert(x);
    for (const auto& [x, mx] : b.mats) keys.insert(x);
    for (VarId x : keys) {
        Mat mx(r.dim, r.dim);
        const Mat& ax = a.mat(x);
        const Mat& bx = b.mat(x);
        for (int i = 0; i < a.dim; ++i)
            for (int j = 0; j < a.dim; ++j) mx.at(i, j) = ax.at(i, j);
        for (int i = 0; i < b.dim; ++i)
            for (int j = 0; j < b.dim; ++j) mx.at(a.dim + i, a.dim + j) = bx.at(i, j);
        r.mats.emplace(x, std::move(mx));
    }
    return r;
}

LinRep rep_prod(const LinRep& a, const LinRep& b) {
    // (S - s0) T  via the switch block  A_x v_a u_b^t,  plus  s0 T
    Scalar s0 = dot(a.u, a.v);
    LinRep p;
    p.dim = a.dim + b.dim;
    p.u = a.u;
    p.u.resize(p.dim);
    p.v = std::vector<Scalar>(p.dim);
    for (int i = 0; i < b.dim; ++i) p.v[a.dim + i] = b.v[i];
    std::set<VarId> keys;
    for (const auto& [x, mx] : a.mats) keys.insert(x);
    for (const auto& [x, mx] : b.mats) keys.insert(x);
    for (VarId x : keys) {
        Mat mx(p.dim, p.dim);
        const Mat& ax = a.mat(x);
        const Mat& bx = b.mat(x);
        for (int i = 0; i < a.dim; ++i)
            for (int j = 0; j < a.dim; ++j) mx.at(i, j) = ax.at(i, j);
        for (int i = 0; i < b.dim; ++i)
            for (int j = 0; j < b.dim; ++j) mx.at(a.dim + i, a.dim + j) = bx.at(i, j);
        std::vector<Scalar> av = mat_vec(ax, a.v);
        for (int i = 0; i < a.dim; ++i)
            for (int j = 0; j < b.dim; ++j) mx.at(i, a.dim + j) = av[i] * b.u[j];
        p.mats.emplace(x, std::move(mx));
    }
    if (s0.is_zero()) return p;
    return rep_sum(p, rep_scale(b, s0));
}

LinRep rep_quasi_inverse(const LinRep& a) {
    if (!dot(a.u, a.v).is_zero())
        throw std::domain_error("quasi_inverse: series has a constant term");
    LinRep r = a;
    for (auto& [x, mx] : r.mats) {
        std::vector<Scalar> col = mat_vec(mx, a.v);   // M_x (I + v u^t)
        for (int i = 0; i < a.dim; ++i)
            for (int j = 0; j < a.dim; ++j) mx.at(i, j) += col[i] * a.u[j];
    }
    return r;
}

namespace {

LinRep forward_restrict(const LinRep& a) {
    VecBasis B;
    std::deque<std::vector<Scalar>> queue;
    if (B.add(a.v) >= 0) queue.push_back(B.rows.back());
    std::vector<VarId> ls = a.letters();
    while (!queue.empty()) {
        std::vector<Scalar> y = queue.front();
        queue.pop_front();
        for (VarId x : ls) {
            int idx = B.add(mat_vec(a.mat(x), y));
            if (idx >= 0) queue.push_back(B.rows[idx]);
        }
    }
    int r = (int)B.rows.size();
    LinRep out;
    out.dim = r;
    out.v = B.coords(a.v);
    out.u = std::vector<Scalar>(r);
    for (int j = 0; j < r; ++j) out.u[j] = dot(a.u, B.rows[j]);
    for (VarId x : ls) {
        Mat ax(r, r);
        for (int j = 0; j < r; ++j) {
            auto c = B.coords(mat_vec(a.mat(x), B.rows[j]));
            for (int i = 0; i < r; ++i) ax.at(i, j) = c[i];
        }
        if (!ax.is_zero()) out.mats.emplace(x, std::move(ax));
    }
    return out;
}

LinRep backward_restrict(const LinRep& a) {
    VecBasis B;
    std::deque<std::vector<Scalar>> queue;
    if (B.add(a.u) >= 0) queue.push_back(B.rows.back());
    std::vector<VarId> ls = a.letters();
    while (!queue.empty()) {
        std::vector<Scalar> y = queue.front();
        queue.pop_front();
        for (VarId x : ls) {
            int idx = B.add(vec_mat(y, a.mat(x)));
            if (idx >= 0) queue.push_back(B.rows[idx]);
        }
    }
    int r = (int)B.rows.size();
    LinRep out;
    out.dim = r;
    out.u = B.coords(a.u);
    out.v = std::vector<Scalar>(r);
    for (int j = 0; j < r; ++j) out.v[j] = dot(B.rows[j], a.v);
    for (VarId x : ls) {
        Mat ax(r, r);
        for (int j = 0; j < r; ++j) {
            auto c = B.coords(vec_mat(B.rows[j], a.mat(x)));
            for (int i = 0; i < r; ++i) ax.at(j, i) = c[i];
        }
        if (!ax.is_zero()) out.mats.emplace(x, std::move(ax));
    }
    return out;
}

LinRep build_rep(const RatExprPtr& e) {
    switch (e->kind) {
    case RatExpr::Kind::Poly:
        return rep_poly(e->poly);
    case RatExpr::Kind::Sum: {
        LinRep acc = build_rep(e->kids[0]);
        for (size_t i = 1; i < e->kids.size(); ++i)
            acc = rep_sum(acc, build_rep(e->kids[i]));
        return acc;
    }
    case RatExpr::Kind::Prod: {
        LinRep acc = build_rep(e->kids[0]);
        for (size_t i = 1; i < e->kids.size(); ++i)
            acc = rep_reduce(rep_prod(acc, build_rep(e->kids[i])));
        return acc;
    }
    case RatExpr::Kind::Inv: {
        Scalar c = e->kids[0]->eps();
        if (c.is_zero())
            throw std::domain_error("rationalize: inv of a series without constant term");
        Scalar ci = c.inv();
        // 1/Q = (1/c)(1 + T + T^2 + ...) with T = 1 - Q/c proper
        LinRep t = rep_reduce(
            rep_sum(rep_const(Scalar(1)), rep_scale(build_rep(e->kids[0]), -ci)));
        return rep_scale(rep_sum(rep_const(Scalar(1)), rep_quasi_inverse(t)), ci);
    }
    }
    throw std::logic_error("build_rep: unreachable");
}

} // namespace

LinRep rep_reduce(const LinRep& a) { return backward_restrict(forward_restrict(a)); }

LinRep rationalize(const RatExprPtr& e) { return rep_reduce(build_rep(e)); }

// --- resolvent pencil ---------------------------------------------------------

GradedPencil resolvent_pencil(const LinRep& rep0) {
    LinRep rep = rep_reduce(rep0);
    if (rep.dim > 0 && !dot(rep.u, rep.v).is_zero())
        throw std::domain_error("resolvent_pencil: series must be proper");
    std::vector<VarId> ls = rep.letters();
    int n = rep.dim;

    GradedPencil pen;
    pen.m = 0;
    if (n == 0 || ls.empty()) {               // zero series: Psi = 1
        pen.dim = 1;
        pen.u = pen.v = unit_vec(1, 0);
        return pen;
    }

    // U = span{ M_w v : |w| >= 1 }; rows annihilating U carry constant
    // series and fold into the resolvent state
    VecBasis U;
    std::deque<std::vector<Scalar>> queue;
    for (VarId x : ls) {
        int idx = U.add(mat_vec(rep.mat(x), rep.v));
        if (idx >= 0) queue.push_back(U.rows[idx]);
    }
    while (!queue.empty()) {
        std::vector<Scalar> y = queue.front();
        queue.pop_front();
        for (VarId x : ls) {
            int idx = U.add(mat_vec(rep.mat(x), y));
            if (idx >= 0) queue.push_back(U.rows[idx]);
        }
    }
    Mat K((int)U.rows.size(), n);
    for (size_t i = 0; i < U.rows.size(); ++i)
        for (int j = 0; j < n; ++j) K.at((int)i, j) = U.rows[i][j];
    int rank = rref(K);
    VecBasis ann;
    {
        std::vector<int> pivcol(rank);
        std::vector<bool> ispiv(n, false);
        for (int i = 0; i < rank; ++i) {
            int j = 0;
            while (K.at(i, j).is_zero()) ++j;
            pivcol[i] = j;
            ispiv[j] = true;
        }
        for (int f = 0; f < n; ++f) {
            if (ispiv[f]) continue;
            std::vector<Scalar> h(n);
            h[f] = Scalar(1);
            for (int i = 0; i < rank; ++i) h[pivcol[i]] = -K.at(i, f);
            ann.add(std::move(h));
        }
    }

    // row closure of u^t M_x modulo ann
    VecBasis H;
    auto mod_ann = [&](std::vector<Scalar>& r) { ann.reduce(r); };
    std::deque<std::vector<Scalar>> hq;
    for (VarId x : ls) {
        std::vector<Scalar> r = vec_mat(rep.u, rep.mat(x));
        mod_ann(r);
        int idx = H.add(std::move(r));
        if (idx >= 0) hq.push_back(H.rows[idx]);
    }
    while (!hq.empty()) {
        std::vector<Scalar> h = hq.front();
        hq.pop_front();
        for (VarId x : ls) {
            std::vector<Scalar> r = vec_mat(h, rep.mat(x));
            mod_ann(r);
            int idx = H.add(std::move(r));
            if (idx >= 0) hq.push_back(H.rows[idx]);
        }
    }

    int N = 1 + (int)H.rows.size();
    pen.dim = N;
    pen.u = unit_vec(N, 0);
    pen.v = std::vector<Scalar>(N);
    pen.v[0] = Scalar(1);
    for (size_t i = 0; i < H.rows.size(); ++i) pen.v[1 + i] = dot(H.rows[i], rep.v);
    for (VarId x : ls) pen.mats.emplace(x, PolyMat(N, N));

    // decompose a row into (constant absorbed into Psi, coefficients over H)
    struct Dec {
        Scalar cunit;
        std::vector<Scalar> c;
    };
    auto decomp = [&](std::vector<Scalar> r) {
        Dec d;
        auto ac = ann.reduce(r);
        for (size_t k = 0; k < ac.size(); ++k)
            if (!ac[k].is_zero()) d.cunit += ac[k] * dot(ann.rows[k], rep.v);
        d.c = H.coords(std::move(r));
        return d;
    };

    for (VarId x : ls) {
        PolyMat& cx = pen.mats.at(x);
        Dec dz = decomp(vec_mat(rep.u, rep.mat(x)));   // the z-carrying seed
        if (!dz.cunit.is_zero()) cx.at(0, 0) = cx.at(0, 0) + ZPoly::zmono(1, dz.cunit);
        for (size_t j = 0; j < dz.c.size(); ++j)
            if (!dz.c[j].is_zero())
                cx.at(0, 1 + (int)j) = cx.at(0, 1 + (int)j) + ZPoly::zmono(1, dz.c[j]);
        for (size_t i = 0; i < H.rows.size(); ++i) {
            Dec di = decomp(vec_mat(H.rows[i], rep.mat(x)));
            Scalar hv = dot(H.rows[i], rep.v);
            ZPoly e00 = ZPoly(di.cunit);
            if (!hv.is_zero() && !dz.cunit.is_zero())
                e00 = e00 + ZPoly::zmono(1, hv * dz.cunit);
            if (!e00.is_zero()) cx.at(1 + (int)i, 0) = cx.at(1 + (int)i, 0) + e00;
            for (size_t j = 0; j < dz.c.size(); ++j) {
                ZPoly eij = ZPoly(di.c[j]);
                if (!hv.is_zero() && !dz.c[j].is_zero())
                    eij = eij + ZPoly::zmono(1, hv * dz.c[j]);
                if (!eij.is_zero())
                    cx.at(1 + (int)i, 1 + (int)j) = cx.at(1 + (int)i, 1 + (int)j) + eij;
            }
        }
    }
    return pen;
}

// --- verification ---------------------------------------------------------------

VerifyReport verify_rep(const LinRep& rep, const RatExprPtr& e, int maxlen) {
    NCPoly expect = expr_series(e, maxlen);
    // state polynomials V_i = sum_w w * (M_w v)_i, grown one letter at a time
    std::vector<NCPoly> cur(rep.dim);
    for (int i = 0; i < rep.dim; ++i)
        if (!rep.v[i].is_zero()) cur[i] = NCPoly::constant(rep.v[i]);
    NCPoly got;
    std::vector<VarId> ls = rep.letters();
    for (int len = 0; len <= maxlen; ++len) {
        for (int i = 0; i < rep.dim; ++i)
            if (!rep.u[i].is_zero()) got += cur[i].scaled(rep.u[i]);
        if (len == maxlen) break;
        std::vector<NCPoly> nxt(rep.dim);
        for (VarId x : ls) {
            const Mat& mx = rep.mat(x);
            Word xw{x};
            for (int i = 0; i < rep.dim; ++i)
                for (int j = 0; j < rep.dim; ++j) {
                    if (mx.at(i, j).is_zero() || cur[j].t.empty()) continue;
                    for (const auto& [w, c] : cur[j].t)
                        nxt[i].add_term(word_concat(xw, w), c * mx.at(i, j));
                }
        }
        cur = std::move(nxt);
    }
    NCPoly diff = got - expect;
    VerifyReport rep_out;
    if (!diff.t.empty()) {
        const auto& [w, c] = *diff.t.begin();
        rep_out.ok = false;
        rep_out.message = "first mismatch at word \"" + word_str(w) + "\": rep gives " +
                          scalar_str(got.coeff(w)) + ", series gives " +
                          scalar_str(expect.coeff(w));
    }
    return rep_out;
}

namespace {

VerifyReport pencil_mismatch(int k, const NCPoly& got, const NCPoly& want) {
    VerifyReport r;
    NCPoly diff = got - want;
    if (diff.t.empty()) return r;
    const Word& w = diff.t.begin()->first;
    r.ok = false;
    r.message = "first mismatch at z^" + std::to_string(k) + ", word \"" + word_str(w) +
                "\": pencil gives " + scalar_str(got.coeff(w)) + ", target gives " +
                scalar_str(want.coeff(w));
    return r;
}

} // namespace

VerifyReport verify_pencil(const GradedPencil& pen, const RatExprPtr& e, int zorder) {
    std::vector<VarId> ls = pen.letters();
    if (pen.m >= 1) {
        NCPoly p = to_ncpoly(e);
        // A[k]_i = sum over edges of x * A[k-1-d]_j;  u^t A[k] = P^{k/m} or 0
        std::vector<std::vector<NCPoly>> A(zorder + 1,
                                           std::vector<NCPoly>(pen.dim));
        for (int i = 0; i < pen.dim; ++i)
            if (!pen.v[i].is_zero()) A[0][i] = NCPoly::constant(pen.v[i]);
        NCPoly power = NCPoly::unit();
        for (int k = 0; k <= zorder; ++k) {
            if (k > 0) {
                for (VarId x : ls) {
                    const PolyMat& cx = pen.mat(x);
                    Word xw{x};
                    for (int i = 0; i < pen.dim; ++i)
                        for (int j = 0; j < pen.dim; ++j) {
                            const ZPoly& entry = cx.at(i, j);
                            for (int d = 0; d <= entry.degree(); ++d) {
                                Scalar cd = entry.coeff(d);
                                if (cd.is_zero() || k - 1 - d < 0) continue;
                                for (const auto& [w, c] : A[k - 1 - d][j].t)
                                    A[k][i].add_term(word_concat(xw, w), c * cd);
                            }
                        }
                }
            }
            NCPoly got;
            for (int i = 0; i < pen.dim; ++i)
                if (!pen.u[i].is_zero()) got += A[k][i].scaled(pen.u[i]);
            NCPoly want;
            if (k % pen.m == 0) {
                if (k > 0) power = power * p;
                want = power;
            }
            auto r = pencil_mismatch(k, got, want);
            if (!r.ok) return r;
        }
        return {};
    }

    // ungraded: track z-degree alongside word length against (1 - zS)^{-1}
    NCPoly s = expr_series(e, zorder);
    int maxlen = zorder;
    std::vector<std::vector<NCPoly>> cur(pen.dim, std::vector<NCPoly>(zorder + 1));
    std::vector<NCPoly> total(zorder + 1);
    for (int i = 0; i < pen.dim; ++i)
        if (!pen.v[i].is_zero()) cur[i][0] = NCPoly::constant(pen.v[i]);
    for (int len = 0; len <= maxlen; ++len) {
        for (int i = 0; i < pen.dim; ++i)
            if (!pen.u[i].is_zero())
                for (int zd = 0; zd <= zorder; ++zd) total[zd] += cur[i][zd].scaled(pen.u[i]);
        if (len == maxlen) break;
        std::vector<std::vector<NCPoly>> nxt(pen.dim, std::vector<NCPoly>(zorder + 1));
        for (VarId x : ls) {
            const PolyMat& cx = pen.mat(x);
            Word xw{x};
            for (int i = 0; i < pen.dim; ++i)
                for (int j = 0; j < pen.dim; ++j) {
                    const ZPoly& entry = cx.at(i, j);
                    for (int d = 0; d <= entry.degree(); ++d) {
                        Scalar cd = entry.coeff(d);
                        if (cd.is_zero()) continue;
                        for (int zd = 0; zd + d <= zorder; ++zd)
                            for (const auto& [w, c] : cur[j][zd].t)
                                nxt[i][zd + d].add_term(word_concat(xw, w), c * cd);
                    }
                }
        }
        cur = std::move(nxt);
    }
    NCPoly powk = NCPoly::unit();
    for (int k = 0; k <= zorder; ++k) {
        if (k > 0) powk = (powk * s).truncated(maxlen);
        auto r = pencil_mismatch(k, total[k].truncated(maxlen), powk);
        if (!r.ok) return r;
    }
    return {};
}

// --- serialization -----------------------------------------------------------------

std::string pencil_json(const GradedPencil& pen) {
    nlohmann::json j;
    j["N"] = pen.dim;
    j["m"] = pen.m;
    nlohmann::json u = nlohmann::json::array(), v = nlohmann::json::array();
    for (const auto& s : pen.u) u.push_back(scalar_str(s));
    for (const auto& s : pen.v) v.push_back(scalar_str(s));
    j["u"] = u;
    j["v"] = v;
    nlohmann::json cs = nlohmann::json::object();
    for (VarId x : pen.letters()) {
        const PolyMat& cx = pen.mat(x);
        nlohmann::json rows = nlohmann::json::array();
        for (int i = 0; i < pen.dim; ++i) {
            nlohmann::json row = nlohmann::json::array();
            for (int jj = 0; jj < pen.dim; ++jj) {
                nlohmann::json entry = nlohmann::json::array();
                const ZPoly& zp = cx.at(i, jj);
                for (int d = 0; d <= zp.degree(); ++d) entry.push_back(scalar_str(zp.coeff(d)));
                row.push_back(entry);
            }
            rows.push_back(row);
        }
        cs[var_name(x)] = rows;
    }
    j["C"] = cs;
    return j.dump(2);
}

GradedPencil pencil_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    GradedPencil pen;
    pen.dim = j.at("N").get<int>();
    pen.m = j.at("m").get<int>();
    for (const auto& s : j.at("u")) pen.u.push_back(scalar_from_string(s.get<std::string>()));
    for (const auto& s : j.at("v")) pen.v.push_back(scalar_from_string(s.get<std::string>()));
    if ((int)pen.u.size() != pen.dim || (int)pen.v.size() != pen.dim)
        throw std::invalid_argument("pencil_from_json: u/v size mismatch");
    for (const auto& [name, rows] : j.at("C").items()) {
        PolyMat cx(pen.dim, pen.dim);
        if ((int)rows.size() != pen.dim)
            throw std::invalid_argument("pencil_from_json: row count mismatch");
        for (int i = 0; i < pen.dim; ++i) {
            const auto& row = rows.at(i);
            if ((int)row.size() != pen.dim)
                throw std::invalid_argument("pencil_from_json: column count mismatch");
            for (int jj = 0; jj < pen.dim; ++jj) {
                ZPoly zp;
                for (const auto& cs : row.at(jj))
                    zp.c.push_back(scalar_from_string(cs.get<std::string>()));
                zp.trim();
                cx.at(i, jj) = zp;
            }
        }
        pen.mats.emplace(var(name), std::move(cx));
    }
    return pen;
}

} // namespace ncdist
