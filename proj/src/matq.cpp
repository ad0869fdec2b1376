#include "ncdist/matq.hpp"

#include <stdexcept>

namespace ncdist {

Mat Mat::id(int n) {
    Mat r(n, n);
    for (int k = 0; k < n; ++k) r.at(k, k) = Scalar(1);
    return r;
}

bool Mat::is_zero() const {
    for (auto& s : a)
        if (!s.is_zero()) return false;
    return true;
}

Mat Mat::operator+(const Mat& o) const {
    if (n != o.n || m != o.m) throw std::invalid_argument("Mat: shape mismatch in +");
    Mat r(n, m);
    for (size_t k = 0; k < a.size(); ++k) r.a[k] = a[k] + o.a[k];
    return r;
}

Mat Mat::operator-(const Mat& o) const {
    if (n != o.n || m != o.m) throw std::invalid_argument("Mat: shape mismatch in -");
    Mat r(n, m);
    for (size_t k = 0; k < a.size(); ++k) r.a[k] = a[k] - o.a[k];
    return r;
}

Mat Mat::operator*(const Mat& o) const {
    if (m != o.n) throw std::invalid_argument("Mat: shape mismatch in *");
    Mat r(n, o.m);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < m; ++k) {
            const Scalar& aik = at(i, k);
            if (aik.is_zero()) continue;
            for (int j = 0; j < o.m; ++j) {
                const Scalar& b = o.at(k, j);
                if (!b.is_zero()) r.at(i, j) += aik * b;
            }
        }
    return r;
}

Mat Mat::scaled(const Scalar& c) const {
    Mat r(n, m);
    for (size_t k = 0; k < a.size(); ++k) r.a[k] = a[k] * c;
    return r;
}

Mat Mat::conj_transpose() const {
    Mat r(m, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) r.at(j, i) = at(i, j).conj();
    return r;
}

Mat mat_inverse(const Mat& m) {
    if (m.n != m.m) throw std::invalid_argument("mat_inverse: not square");
    int n = m.n;
    Mat a = m, inv = Mat::id(n);
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n; ++r)
            if (!a.at(r, col).is_zero()) {
                piv = r;
                break;
            }
        if (piv < 0) throw std::domain_error("mat_inverse: singular matrix");
        if (piv != col)
            for (int j = 0; j < n; ++j) {
                std::swap(a.at(piv, j), a.at(col, j));
                std::swap(inv.at(piv, j), inv.at(col, j));
            }
        Scalar d = a.at(col, col).inv();
        for (int j = 0; j < n; ++j) {
            a.at(col, j) *= d;
            inv.at(col, j) *= d;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col || a.at(r, col).is_zero()) continue;
            Scalar f = a.at(r, col);
            for (int j = 0; j < n; ++j) {
                a.at(r, j) -= f * a.at(col, j);
                inv.at(r, j) -= f * inv.at(col, j);
            }
        }
    }
    return inv;
}

int rref(Mat& m) {
    int rank = 0;
    for (int col = 0; col < m.m && rank < m.n; ++col) {
        int piv = -1;
        for (int r = rank; r < m.n; ++r)
            if (!m.at(r, col).is_zero()) {
                piv = r;
                break;
            }
        if (piv < 0) continue;
        if (piv != rank)
            for (int j = 0; j < m.m; ++j) std::swap(m.at(piv, j), m.at(rank, j));
        Scalar d = m.at(rank, col).inv();
        for (int j = 0; j < m.m; ++j) m.at(rank, j) *= d;
        for (int r = 0; r < m.n; ++r) {
            if (r == rank || m.at(r, col).is_zero()) continue;
            Scalar f = m.at(r, col);
            for (int j = 0; j < m.m; ++j) m.at(r, j) -= f * m.at(rank, j);
        }
        ++rank;
    }
    return rank;
}

Mat row_space_projector(const Mat& rows) {
    Mat r = rows;
    int rank = rref(r);
    if (rank == 0) return Mat(rows.m, rows.m);
    Mat b(rank, rows.m);
    for (int i = 0; i < rank; ++i)
        for (int j = 0; j < rows.m; ++j) b.at(i, j) = r.at(i, j);
    Mat bh = b.conj_transpose();
    Mat gram = b * bh;                       // positive definite on a full-rank basis
    return bh * mat_inverse(gram) * b;
}

std::vector<Scalar> mat_vec(const Mat& m, const std::vector<Scalar>& x) {
    if ((int)x.size() != m.m) throw std::invalid_argument("mat_vec: shape mismatch");
    std::vector<Scalar> r(m.n);
    for (int i = 0; i < m.n; ++i)
        for (int j = 0; j < m.m; ++j)
            if (!m.at(i, j).is_zero()) r[i] += m.at(i, j) * x[j];
    return r;
}

std::vector<Scalar> vec_mat(const std::vector<Scalar>& x, const Mat& m) {
    if ((int)x.size() != m.n) throw std::invalid_argument("vec_mat: shape mismatch");
    std::vector<Scalar> r(m.m);
    for (int i = 0; i < m.n; ++i) {
        if (x[i].is_zero()) continue;
        for (int j = 0; j < m.m; ++j)
            if (!m.at(i, j).is_zero()) r[j] += x[i] * m.at(i, j);
    }
    return r;
}

Scalar dot(const std::vector<Scalar>& a, const std::vector<Scalar>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
    Scalar s;
    for (size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

} // namespace ncdist
