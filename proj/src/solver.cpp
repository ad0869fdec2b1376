#include "ncdist/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ncdist {

Mat cokernel_projection(const PolyMat& c) {
    int zd = c.zdeg();
    if (zd < 0) return Mat(c.m, c.m);
    Mat stack((zd + 1) * c.n, c.m);
    for (int d = 0; d <= zd; ++d) {
        Mat cd = c.coeff(d);
        for (int i = 0; i < c.n; ++i)
            for (int j = 0; j < c.m; ++j) stack.at(d * c.n + i, j) = cd.at(i, j);
    }
    return row_space_projector(stack);
}

namespace {

// length-t working copy; keeps sweeps at truncation t from paying for the
// full reporting order
MatSeries cut(const MatSeries& s, int t) {
    MatSeries r(s.N, t);
    r.lead = std::min(s.lead, t + 1);
    for (int k = r.lead; k <= t; ++k) r.c[k] = s.coeff(k);
    return r;
}

MatSeries extend(const MatSeries& s, int K) {
    if (s.K >= K) return cut(s, K);
    MatSeries r(s.N, K);
    r.lead = s.lead;
    for (int k = 0; k <= s.K; ++k) r.c[k] = s.c[k];
    return r;
}

int first_diff(const MatSeries& a, const MatSeries& b) {
    int K = std::min(a.K, b.K);
    for (int k = 0; k <= K; ++k)
        if (!(a.coeff(k) == b.coeff(k))) return k;
    return K + 1;
}

} // namespace

SolveResult solve_pencil(const GradedPencil& pen, const Embedding& emb, int K) {
    if (pen.m < 1)
        throw std::invalid_argument("solve_pencil: ungraded pencil, use solve_pencil_s");
    std::vector<VarId> ls = pen.letters();
    if (ls.empty()) throw std::invalid_argument("solve_pencil: pencil has no letters");
    int N = pen.dim;

    SolveResult res;
    res.K = K;
    std::map<VarId, MatSeries> C;
    for (VarId x : ls) {
        C.emplace(x, MatSeries::from_poly(pen.mat(x), K));
        Mat q = cokernel_projection(pen.mat(x));
        res.F.emplace(x, MatSeries::from_const(q.scaled(emb.dist_of(x).bcum(1)), K));
        res.Q.emplace(x, std::move(q));
    }

    int maxSweep = 2 * K + 8;
    for (int r = 1; r <= maxSweep; ++r) {
        int t = std::min(r + 2, K);
        MatSeries idT = MatSeries::id(N, t);
        std::map<VarId, MatSeries> Fn;
        int agree = K + 1;
        for (VarId x : ls) {
            MatSeries D(N, t);
            for (VarId y : ls)
                if (y != x) D = D + cut(C.at(y), t) * cut(res.F.at(y), t);
            MatSeries G = ((idT - D.shifted(1)).inverse() * cut(C.at(x), t)).shifted(1);
            MatSeries fx =
                extend(MatSeries::from_const(res.Q.at(x), t) * eta_apply(emb.dist_of(x), G), K);
            agree = std::min(agree, std::min(first_diff(fx, res.F.at(x)), t + 1));
            Fn.emplace(x, std::move(fx));
        }
        res.trace.push_back(agree);
        res.F = std::move(Fn);
        if (t == K && agree == K + 1) break;
        if (r == maxSweep) throw std::runtime_error("solve_pencil: no stabilization");
    }

    MatSeries D(N, K);
    for (VarId x : ls) D = D + C.at(x) * res.F.at(x);
    res.M = sandwich(pen.u, (MatSeries::id(N, K) - D.shifted(1)).inverse(), pen.v);
    return res;
}

// --- ungraded pencils: double precision over the edge parameter -------------

namespace {

using CD = std::complex<double>;

// matrix of z-polynomials, z-truncated at a fixed order
struct CMat {
    int N = 0, K = 0;
    std::vector<CD> a;
    CMat() = default;
    CMat(int n, int k) : N(n), K(k), a((size_t)(k + 1) * n * n) {}
    CD& at(int k, int i, int j) { return a[((size_t)k * N + i) * N + j]; }
    const CD& at(int k, int i, int j) const { return a[((size_t)k * N + i) * N + j]; }
};

CMat cmat_from_poly(const PolyMat& p, int K) {
    CMat r(p.n, K);
    for (int i = 0; i < p.n; ++i)
        for (int j = 0; j < p.m; ++j) {
            const ZPoly& e = p.at(i, j);
            for (int d = 0; d <= e.degree() && d <= K; ++d) {
                Scalar c = e.coeff(d);
                r.at(d, i, j) = CD(c.re_d(), c.im_d());
            }
        }
    return r;
}

CMat cmat_from_mat(const Mat& m, int K) {
    CMat r(m.n, K);
    for (int i = 0; i < m.n; ++i)
        for (int j = 0; j < m.m; ++j) r.at(0, i, j) = CD(m.at(i, j).re_d(), m.at(i, j).im_d());
    return r;
}

void cmat_axpy(CMat& acc, const CMat& a, const CMat& b) {   // acc += a * b
    int N = acc.N, K = acc.K;
    for (int ka = 0; ka <= K; ++ka)
        for (int kb = 0; ka + kb <= K; ++kb)
            for (int i = 0; i < N; ++i)
                for (int l = 0; l < N; ++l) {
                    CD av = a.at(ka, i, l);
                    if (av == CD()) continue;
                    for (int j = 0; j < N; ++j) acc.at(ka + kb, i, j) += av * b.at(kb, l, j);
                }
}

double cmat_maxabs(const CMat& a, const CMat& b) {
    double m = 0;
    for (size_t i = 0; i < a.a.size(); ++i) m = std::max(m, std::abs(a.a[i] - b.a[i]));
    return m;
}

// series in the edge parameter s with CMat coefficients; hi bounds support
struct SSer {
    std::vector<CMat> c;
    int hi = -1;
    SSer() = default;
    SSer(int S, int N, int K) : c(S + 1, CMat(N, K)) {}
};

// r += a * b up to s-order cap
void s_axpy(SSer& r, const SSer& a, const SSer& b, int cap) {
    for (int s = 0; s <= std::min(cap, (int)r.c.size() - 1); ++s) {
        int lo = std::max(0, s - (b.hi < 0 ? s + 1 : b.hi));
        int hi = std::min(s, a.hi);
        for (int al = lo; al <= hi; ++al) {
            if (s - al > b.hi) continue;
            cmat_axpy(r.c[s], a.c[al], b.c[s - al]);
            r.hi = std::max(r.hi, s);
        }
    }
}

} // namespace

SSolveResult solve_pencil_s(const GradedPencil& pen, const Embedding& emb, int K, int S) {
    if (pen.m != 0)
        throw std::invalid_argument("solve_pencil_s: graded pencil, use solve_pencil");
    if (S < 0) S = std::max(3 * K, 48);
    std::vector<VarId> ls = pen.letters();
    if (ls.empty()) throw std::invalid_argument("solve_pencil_s: pencil has no letters");
    int N = pen.dim;

    SSolveResult res;
    res.K = K;
    res.S = S;

    std::map<VarId, CMat> C;
    std::map<VarId, CMat> Q;
    std::map<VarId, std::vector<CD>> beta;   // beta_k, k = 1..S+1
    std::map<VarId, SSer> F;
    for (VarId x : ls) {
        C.emplace(x, cmat_from_poly(pen.mat(x), K));
        Q.emplace(x, cmat_from_mat(cokernel_projection(pen.mat(x)), K));
        const Dist& d = emb.dist_of(x);
        std::vector<CD> bs(S + 2);
        for (int k = 1; k <= S + 1; ++k) {
            Scalar b = d.bcum(k);
            bs[k] = CD(b.re_d(), b.im_d());
        }
        SSer f(S, N, K);
        CMat b1(N, K);
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) b1.at(0, i, j) = bs[1] * Q.at(x).at(0, i, j);
        f.c[0] = b1;
        f.hi = 0;
        beta.emplace(x, std::move(bs));
        F.emplace(x, std::move(f));
    }

    CMat idc(N, K);
    for (int i = 0; i < N; ++i) idc.at(0, i, i) = CD(1);

    auto s_inverse = [&](const SSer& X, int cap) {   // (I - sX)^{-1}, shift applied here
        SSer r(S, N, K);
        r.c[0] = idc;
        r.hi = 0;
        for (int s = 1; s <= cap; ++s) {
            for (int al = 0; al <= std::min(X.hi, s - 1); ++al)
                cmat_axpy(r.c[s], X.c[al], r.c[s - 1 - al]);
            r.hi = s;
        }
        return r;
    };

    int maxSweep = 2 * S + 8;
    for (int r = 1; r <= maxSweep; ++r) {
        int t = std::min(r + 2, S);
        std::map<VarId, SSer> Fn;
        int agree = S + 1;
        for (VarId x : ls) {
            SSer D(S, N, K);
            for (VarId y : ls) {
                if (y == x) continue;
                for (int s = 0; s <= std::min(F.at(y).hi, t - 1); ++s) {
                    cmat_axpy(D.c[s], C.at(y), F.at(y).c[s]);
                    D.hi = std::max(D.hi, s);
                }
            }
            SSer A = s_inverse(D, t);
            SSer G(S, N, K);                       // s A C_x
            for (int s = 1; s <= std::min(t, A.hi + 1); ++s) {
                cmat_axpy(G.c[s], A.c[s - 1], C.at(x));
                G.hi = s;
            }
            // Horner for eta with per-depth s-truncation
            SSer R(S, N, K);
            const auto& bs = beta.at(x);
            for (int k = t + 1; k >= 1; --k) {
                int capk = t - k + 1;
                SSer nr(S, N, K);
                s_axpy(nr, G, R, capk);
                if (bs[k] != CD()) {
                    for (int i = 0; i < N; ++i) nr.c[0].at(0, i, i) += bs[k];
                    nr.hi = std::max(nr.hi, 0);
                }
                R = std::move(nr);
            }
            SSer fx(S, N, K);
            for (int s = 0; s <= std::max(R.hi, 0); ++s) {
                cmat_axpy(fx.c[s], Q.at(x), R.c[s]);
                fx.hi = std::max(fx.hi, s);
            }
            int fd = S + 1;
            const SSer& fo = F.at(x);
            for (int s = 0; s <= t; ++s)
                if (cmat_maxabs(fx.c[s], fo.c[s]) > 1e-13) { fd = s; break; }
            agree = std::min(agree, std::min(fd, t + 1));
            Fn.emplace(x, std::move(fx));
        }
        res.trace.push_back(agree);
        F = std::move(Fn);
        if (t == S && agree == S + 1) break;
        if (r == maxSweep) break;                  // float dither; report as is
    }

    SSer D(S, N, K);
    for (VarId x : ls)
        for (int s = 0; s <= F.at(x).hi; ++s) {
            cmat_axpy(D.c[s], C.at(x), F.at(x).c[s]);
            D.hi = std::max(D.hi, s);
        }
    SSer R = s_inverse(D, S);

    res.M.assign(K + 1, CD());
    std::vector<std::vector<CD>> contrib(S + 1, std::vector<CD>(K + 1));
    for (int s = 0; s <= S; ++s)
        for (int k = 0; k <= K; ++k) {
            CD acc;
            for (int i = 0; i < N; ++i)
                for (int j = 0; j < N; ++j) {
                    CD ui(pen.u[i].re_d(), pen.u[i].im_d());
                    CD vj(pen.v[j].re_d(), pen.v[j].im_d());
                    acc += ui * R.c[s].at(k, i, j) * vj;
                }
            contrib[s][k] = acc;
            res.M[k] += acc;
        }
    res.stabilization = 0;
    for (int s = S; s >= 1; --s) {
        bool moved = false;
        for (int k = 0; k <= K && !moved; ++k)
            if (std::abs(contrib[s][k]) > 1e-12 * std::max(1.0, std::abs(res.M[k]))) moved = true;
        if (moved) { res.stabilization = s + 1; break; }
    }
    return res;
}

// --- single forward pass, order by order ------------------------------------

namespace {

// eta(G) = a G + b G eta(G)^2 exactly reproduces the cumulant data iff
// beta_1 = 0, all odd cumulants vanish and beta_{2n} = b sum beta_{2i} beta_{2j}
// over i + j = n; everything commutes here since only powers of G appear
struct EtaPath {
    bool quadratic = false;
    Scalar a, b;
    std::vector<Scalar> beta;   // beta[j] multiplies G^j
    int jmax = 0;
};

EtaPath classify_eta(const Dist& d, int K) {
    EtaPath p;
    p.beta = d.eta_coeffs(K);   // beta_1 .. beta_{K+1}
    for (int j = 0; j < (int)p.beta.size(); ++j)
        if (!p.beta[j].is_zero()) p.jmax = j;
    const std::vector<Scalar>& bs = p.beta;
    if (!bs[0].is_zero()) return p;
    for (int i = 2; i < (int)bs.size(); i += 2)
        if (!bs[i].is_zero()) return p;
    Scalar a = bs.size() > 1 ? bs[1] : Scalar();
    Scalar b;
    if (bs.size() > 3 && !bs[3].is_zero()) {
        if (a.is_zero()) return p;
        b = bs[3] / (a * a);
    }
    for (int idx = 5; idx < (int)bs.size(); idx += 2) {
        int n = (idx + 1) / 2;  // bs[idx] = beta_{2n}
        Scalar expect;
        for (int i = 1; i < n; ++i) expect += bs[2 * i - 1] * bs[2 * (n - i) - 1];
        if (bs[idx] != b * expect) return p;
    }
    p.quadratic = true;
    p.a = a;
    p.b = b;
    return p;
}

template <class Elem> Elem elem_from(const Scalar& s);
template <> Scalar elem_from<Scalar>(const Scalar& s) { return s; }
template <> std::complex<double> elem_from<std::complex<double>>(const Scalar& s) {
    return {s.re_d(), s.im_d()};
}

// flat row-major n x n blocks; sizes are pencil dimensions, so plain loops
template <class Elem> using FMat = std::vector<Elem>;

template <class Elem> FMat<Elem> fconv(const Mat& m) {
    FMat<Elem> r(m.a.size());
    for (size_t i = 0; i < m.a.size(); ++i) r[i] = elem_from<Elem>(m.a[i]);
    return r;
}

template <class Elem>
void fmul_add(FMat<Elem>& acc, const FMat<Elem>& a, const FMat<Elem>& b, int n) {
    for (int i = 0; i < n; ++i)
        for (int l = 0; l < n; ++l) {
            const Elem& ail = a[(size_t)i * n + l];
            if (ail == Elem()) continue;
            const Elem* brow = &b[(size_t)l * n];
            Elem* out = &acc[(size_t)i * n];
            for (int j = 0; j < n; ++j) out[j] += ail * brow[j];
        }
}

template <class Elem> void fadd_scaled(FMat<Elem>& acc, const FMat<Elem>& a, const Elem& c) {
    if (c == Elem()) return;
    for (size_t i = 0; i < acc.size(); ++i) acc[i] += c * a[i];
}

template <class Elem> struct ForwardOut {
    std::map<VarId, std::vector<FMat<Elem>>> F;
    std::vector<Elem> M;
    std::map<VarId, Mat> Q;
};

template <class Elem>
ForwardOut<Elem> run_forward(const GradedPencil& pen, const Embedding& emb, int K) {
    if (pen.m < 1)
        throw std::invalid_argument("solve_pencil_forward: ungraded pencil, use solve_pencil_s");
    std::vector<VarId> ls = pen.letters();
    if (ls.empty()) throw std::invalid_argument("solve_pencil_forward: pencil has no letters");
    const int n = pen.dim;
    const size_t nn = (size_t)n * n;

    FMat<Elem> idm(nn);
    for (int i = 0; i < n; ++i) idm[(size_t)i * n + i] = Elem(1);

    struct VS {
        std::vector<FMat<Elem>> Cz;             // z-degree -> coefficient block
        FMat<Elem> Q;
        EtaPath eta;
        std::vector<Elem> betaE;                // eta.beta converted
        Elem a{}, b{};
        std::vector<FMat<Elem>> A, G, E, F, D, S, CF;
        std::vector<std::vector<FMat<Elem>>> P; // powers path
    };
    std::map<VarId, VS> st;
    ForwardOut<Elem> out;
    for (VarId x : ls) {
        VS v;
        const PolyMat& c = pen.mat(x);
        for (int d = 0; d <= std::max(c.zdeg(), 0); ++d) v.Cz.push_back(fconv<Elem>(c.coeff(d)));
        Mat q = cokernel_projection(c);
        v.Q = fconv<Elem>(q);
        out.Q.emplace(x, std::move(q));
        v.eta = classify_eta(emb.dist_of(x), K);
        for (const Scalar& s : v.eta.beta) v.betaE.push_back(elem_from<Elem>(s));
        v.a = elem_from<Elem>(v.eta.a);
        v.b = elem_from<Elem>(v.eta.b);
        auto zs = [&] { return std::vector<FMat<Elem>>(K + 1, FMat<Elem>(nn)); };
        v.A = zs(); v.G = zs(); v.E = zs(); v.F = zs(); v.D = zs(); v.CF = zs();
        if (v.eta.quadratic) v.S = zs();
        else v.P.assign(v.eta.jmax + 1, zs());
        st.emplace(x, std::move(v));
    }

    std::vector<FMat<Elem>> T(K + 1, FMat<Elem>(nn));
    for (int k = 0; k <= K; ++k) {
        for (VarId x : ls) {
            VS& v = st.at(x);
            if (k == 0) v.A[0] = idm;
            else
                for (int d = 0; d < k; ++d) fmul_add(v.A[k], v.D[d], v.A[k - 1 - d], n);
            for (int e = 0; e < (int)v.Cz.size() && e < k; ++e)
                fmul_add(v.G[k], v.A[k - 1 - e], v.Cz[e], n);
            if (v.eta.quadratic) {
                fadd_scaled(v.E[k], v.G[k], v.a);
                if (v.b != Elem()) {
                    FMat<Elem> gs(nn);
                    for (int d = 1; d <= k; ++d) fmul_add(gs, v.G[d], v.S[k - d], n);
                    fadd_scaled(v.E[k], gs, v.b);
                    for (int j = 0; j <= k; ++j) fmul_add(v.S[k], v.E[j], v.E[k - j], n);
                }
            } else {
                if (!v.P.empty()) v.P[0][k] = k == 0 ? idm : FMat<Elem>(nn);
                for (int j = 1; j <= v.eta.jmax; ++j)
                    if (k >= j)
                        for (int d = 1; d <= k - j + 1; ++d)
                            fmul_add(v.P[j][k], v.G[d], v.P[j - 1][k - d], n);
                for (int j = 0; j <= v.eta.jmax; ++j)
                    fadd_scaled(v.E[k], v.P[j][k], v.betaE[j]);
            }
            fmul_add(v.F[k], v.Q, v.E[k], n);
        }
        for (VarId y : ls) {
            VS& w = st.at(y);
            for (int e = 0; e < (int)w.Cz.size() && e <= k; ++e)
                fmul_add(w.CF[k], w.Cz[e], w.F[k - e], n);
            for (size_t i = 0; i < nn; ++i) T[k][i] += w.CF[k][i];
        }
        for (VarId x : ls) {
            VS& v = st.at(x);
            v.D[k] = T[k];
            for (size_t i = 0; i < nn; ++i) v.D[k][i] -= v.CF[k][i];
        }
    }

    std::vector<Elem> u(n), w(n);
    for (int i = 0; i < n; ++i) {
        u[i] = elem_from<Elem>(pen.u[i]);
        w[i] = elem_from<Elem>(pen.v[i]);
    }
    std::vector<FMat<Elem>> R(K + 1, FMat<Elem>(nn));
    out.M.assign(K + 1, Elem());
    for (int k = 0; k <= K; ++k) {
        if (k == 0) R[0] = idm;
        else
            for (int d = 0; d < k; ++d) fmul_add(R[k], T[d], R[k - 1 - d], n);
        Elem acc{};
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) acc += u[i] * R[k][(size_t)i * n + j] * w[j];
        out.M[k] = acc;
    }
    for (VarId x : ls) out.F.emplace(x, std::move(st.at(x).F));
    return out;
}

} // namespace

SolveResult solve_pencil_forward(const GradedPencil& pen, const Embedding& emb, int K) {
    ForwardOut<Scalar> fo = run_forward<Scalar>(pen, emb, K);
    SolveResult res;
    res.K = K;
    res.Q = std::move(fo.Q);
    int n = pen.dim;
    for (auto& [x, fs] : fo.F) {
        MatSeries s(n, K);
        for (int k = 0; k <= K; ++k) {
            Mat& mk = s.c[k];
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) mk.at(i, j) = fs[k][(size_t)i * n + j];
        }
        s.lead = 0;
        while (s.lead <= K && s.c[s.lead].is_zero()) ++s.lead;
        res.F.emplace(x, std::move(s));
    }
    ScalarSeries M(K);
    M.c = std::move(fo.M);
    res.M = std::move(M);
    return res;
}

NSolveResult solve_pencil_numeric(const GradedPencil& pen, const Embedding& emb, int K) {
    ForwardOut<std::complex<double>> fo = run_forward<std::complex<double>>(pen, emb, K);
    NSolveResult res;
    res.K = K;
    res.M = std::move(fo.M);
    return res;
}

} // namespace ncdist
