#include "ncdist/mseries.hpp"

#include "json.hpp"

#include <stdexcept>

namespace ncdist {

ScalarSeries ScalarSeries::one(int K) {
    ScalarSeries s(K);
    s.c[0] = Scalar(1);
    return s;
}

ScalarSeries ScalarSeries::z(int K) {
    ScalarSeries s(K);
    if (K >= 1) s.c[1] = Scalar(1);
    return s;
}

ScalarSeries ScalarSeries::operator+(const ScalarSeries& o) const {
    ScalarSeries r(std::min(K, o.K));
    for (int k = 0; k <= r.K; ++k) r.c[k] = c[k] + o.c[k];
    return r;
}

ScalarSeries ScalarSeries::operator-(const ScalarSeries& o) const {
    ScalarSeries r(std::min(K, o.K));
    for (int k = 0; k <= r.K; ++k) r.c[k] = c[k] - o.c[k];
    return r;
}

ScalarSeries ScalarSeries::operator*(const ScalarSeries& o) const {
    ScalarSeries r(std::min(K, o.K));
    for (int i = 0; i <= r.K; ++i) {
        if (c[i].is_zero()) continue;
        for (int j = 0; i + j <= r.K; ++j)
            if (!o.c[j].is_zero()) r.c[i + j] += c[i] * o.c[j];
    }
    return r;
}

ScalarSeries ScalarSeries::scaled(const Scalar& s) const {
    ScalarSeries r(K);
    for (int k = 0; k <= K; ++k) r.c[k] = c[k] * s;
    return r;
}

ScalarSeries ScalarSeries::inverse() const {
    if (c[0].is_zero()) throw std::domain_error("ScalarSeries::inverse: zero constant term");
    ScalarSeries r(K);
    Scalar d = c[0].inv();
    r.c[0] = d;
    for (int k = 1; k <= K; ++k) {
        Scalar acc;
        for (int j = 1; j <= k; ++j) acc += c[j] * r.c[k - j];
        r.c[k] = -d * acc;
    }
    return r;
}

ScalarSeries ScalarSeries::pow(int e) const {
    ScalarSeries r = one(K);
    for (int k = 0; k < e; ++k) r = r * *this;
    return r;
}

int ScalarSeries::valuation() const {
    for (int k = 0; k <= K; ++k)
        if (!c[k].is_zero()) return k;
    return K + 1;
}

std::string ScalarSeries::str() const {
    std::string out;
    bool any = false;
    for (int k = 0; k <= K; ++k) {
        if (c[k].is_zero()) continue;
        if (any) out += " + ";
        out += scalar_str(c[k]);
        if (k == 1) out += "*z";
        if (k > 1) out += "*z^" + std::to_string(k);
        any = true;
    }
    if (!any) out = "0";
    return out + " + O(z^" + std::to_string(K + 1) + ")";
}

MatSeries::MatSeries(int dim, int order) : N(dim), K(order), lead(order + 1) {
    c.assign(order + 1, Mat(dim, dim));
}

MatSeries MatSeries::id(int dim, int order) {
    MatSeries s(dim, order);
    s.c[0] = Mat::id(dim);
    s.lead = 0;
    return s;
}

MatSeries MatSeries::from_const(const Mat& m, int order) {
    if (m.n != m.m) throw std::invalid_argument("MatSeries: square matrices only");
    MatSeries s(m.n, order);
    s.c[0] = m;
    s.lead = m.is_zero() ? order + 1 : 0;
    return s;
}

MatSeries MatSeries::from_poly(const PolyMat& p, int order) {
    if (p.n != p.m) throw std::invalid_argument("MatSeries: square matrices only");
    MatSeries s(p.n, order);
    int top = std::min(order, p.zdeg());
    s.lead = order + 1;
    for (int d = 0; d <= top; ++d) {
        s.c[d] = p.coeff(d);
        if (s.lead > order && !s.c[d].is_zero()) s.lead = d;
    }
    return s;
}

Mat MatSeries::coeff(int k) const { return k >= 0 && k <= K ? c[k] : Mat(N, N); }

bool MatSeries::is_zero() const {
    for (auto& m : c)
        if (!m.is_zero()) return false;
    return true;
}

MatSeries MatSeries::operator+(const MatSeries& o) const {
    if (N != o.N) throw std::invalid_argument("MatSeries: dimension mismatch");
    MatSeries r(N, std::min(K, o.K));
    r.lead = std::min(lead, o.lead);
    for (int k = r.lead; k <= r.K; ++k) r.c[k] = coeff(k) + o.coeff(k);
    return r;
}

MatSeries MatSeries::operator-(const MatSeries& o) const {
    if (N != o.N) throw std::invalid_argument("MatSeries: dimension mismatch");
    MatSeries r(N, std::min(K, o.K));
    r.lead = std::min(lead, o.lead);
    for (int k = r.lead; k <= r.K; ++k) r.c[k] = coeff(k) - o.coeff(k);
    return r;
}

MatSeries MatSeries::operator*(const MatSeries& o) const {
    if (N != o.N) throw std::invalid_argument("MatSeries: dimension mismatch");
    MatSeries r(N, std::min(K, o.K));
    r.lead = std::min(lead + o.lead, r.K + 1);
    for (int k = r.lead; k <= r.K; ++k) {
        Mat acc(N, N);
        for (int i = lead; i + o.lead <= k && i <= K; ++i) {
            if (c[i].is_zero()) continue;
            const Mat& b = o.coeff(k - i);
            if (!b.is_zero()) acc = acc + c[i] * b;
        }
        r.c[k] = std::move(acc);
    }
    return r;
}

MatSeries MatSeries::scaled(const Scalar& s) const {
    MatSeries r(N, K);
    r.lead = s.is_zero() ? K + 1 : lead;
    for (int k = r.lead; k <= K; ++k) r.c[k] = c[k].scaled(s);
    return r;
}

MatSeries MatSeries::shifted(int p) const {
    MatSeries r(N, K);
    r.lead = std::min(lead + p, K + 1);
    for (int k = 0; k + p <= K; ++k)
        if (!c[k].is_zero()) r.c[k + p] = c[k];
    return r;
}

MatSeries MatSeries::truncated(int order) const {
    MatSeries r(N, order);
    r.lead = std::min(lead, order + 1);
    for (int k = 0; k <= std::min(order, K); ++k) r.c[k] = c[k];
    return r;
}

MatSeries MatSeries::inverse() const {
    MatSeries r(N, K);
    Mat d = mat_inverse(c[0]);
    r.lead = 0;
    r.c[0] = d;
    for (int k = 1; k <= K; ++k) {
        Mat acc(N, N);
        for (int j = 1; j <= k; ++j)
            if (!c[j].is_zero() && !r.c[k - j].is_zero()) acc = acc + c[j] * r.c[k - j];
        r.c[k] = d.scaled(Scalar(-1)) * acc;
    }
    return r;
}

bool operator==(const MatSeries& a, const MatSeries& b) {
    if (a.N != b.N || a.K != b.K) return false;
    for (int k = 0; k <= a.K; ++k)
        if (a.coeff(k) != b.coeff(k)) return false;
    return true;
}

MatSeries eta_apply(const Dist& d, const MatSeries& S) {
    int N = S.N, K = S.K;
    Mat I = Mat::id(N);
    if (S.lead >= 1) {
        // Horner, R_k = beta_k I + S R_{k+1}; the depth-k iterate is later
        // multiplied by S^{k-1} (lead k-1), so it only matters to z^(K-k+1)
        MatSeries R(N, 0);
        Scalar btop = d.bcum(K + 1);
        if (!btop.is_zero()) {
            R.c[0] = I.scaled(btop);
            R.lead = 0;
        }
        for (int k = K; k >= 1; --k) {
            int order = K - k + 1;
            R = S.truncated(order) * R.truncated(order);
            Scalar b = d.bcum(k);
            if (!b.is_zero()) {
                R.c[0] = R.c[0] + I.scaled(b);
                R.lead = 0;
            }
        }
        return R;
    }
    // constant coefficient must be nilpotent; find its index
    Mat a0 = S.coeff(0);
    int nu = -1;
    Mat p = a0;
    for (int k = 1; k <= N; ++k) {
        if (p.is_zero()) {
            nu = k;
            break;
        }
        p = p * a0;
    }
    if (nu < 0)
        throw std::domain_error(
            "eta_apply: argument has a non-nilpotent constant term and no leading-z marker");
    // a z^j coefficient of S^k dies once some gap holds nu consecutive
    // constant factors: k >= j + nu*(j+1)
    int top = K + nu * (K + 1);
    MatSeries R(N, K);
    Scalar btop = d.bcum(top);
    if (!btop.is_zero()) {
        R.c[0] = I.scaled(btop);
        R.lead = 0;
    }
    for (int k = top - 1; k >= 1; --k) {
        R = S * R;
        Scalar b = d.bcum(k);
        if (!b.is_zero()) {
            R.c[0] = R.c[0] + I.scaled(b);
            R.lead = 0;
        }
    }
    return R;
}

ScalarSeries sandwich(const std::vector<Scalar>& u, const MatSeries& S,
                      const std::vector<Scalar>& v) {
    ScalarSeries r(S.K);
    for (int k = 0; k <= S.K; ++k) r.c[k] = dot(u, mat_vec(S.coeff(k), v));
    return r;
}

std::string mseries_json(const MatSeries& s) {
    nlohmann::json j;
    j["N"] = s.N;
    j["K"] = s.K;
    nlohmann::json coeffs = nlohmann::json::array();
    for (int k = 0; k <= s.K; ++k) {
        nlohmann::json mat = nlohmann::json::array();
        Mat m = s.coeff(k);
        for (int i = 0; i < s.N; ++i) {
            nlohmann::json row = nlohmann::json::array();
            for (int jj = 0; jj < s.N; ++jj) row.push_back(scalar_str(m.at(i, jj)));
            mat.push_back(row);
        }
        coeffs.push_back(mat);
    }
    j["coeffs"] = coeffs;
    return j.dump();
}

MatSeries mseries_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    int N = j.at("N").get<int>(), K = j.at("K").get<int>();
    MatSeries s(N, K);
    auto& coeffs = j.at("coeffs");
    for (int k = 0; k <= K && k < (int)coeffs.size(); ++k) {
        for (int i = 0; i < N; ++i)
            for (int jj = 0; jj < N; ++jj)
                s.c[k].at(i, jj) = scalar_from_string(coeffs[k][i][jj].get<std::string>());
        if (!s.c[k].is_zero()) s.lead = std::min(s.lead == K + 1 ? k : s.lead, k);
    }
    // recompute the marker honestly
    s.lead = K + 1;
    for (int k = 0; k <= K; ++k)
        if (!s.c[k].is_zero()) {
            s.lead = k;
            break;
        }
    return s;
}

std::string sseries_json(const ScalarSeries& s) {
    nlohmann::json arr = nlohmann::json::array();
    for (int k = 0; k <= s.K; ++k) arr.push_back(scalar_str(s.c[k]));
    return arr.dump();
}

} // namespace ncdist
