#pragma once
// Dense matrices over the exact scalar field.  Sizes stay tiny (pencil
// dimensions), so everything is straightforward Gauss-Jordan.

#include "ncdist/scalar.hpp"

#include <vector>

namespace ncdist {

struct Mat {
    int n = 0, m = 0;
    std::vector<Scalar> a;   // row-major

    Mat() = default;
    Mat(int rows, int cols) : n(rows), m(cols), a((size_t)rows * cols) {}
    static Mat id(int n);

    Scalar& at(int i, int j) { return a[(size_t)i * m + j]; }
    const Scalar& at(int i, int j) const { return a[(size_t)i * m + j]; }

    bool is_zero() const;
    Mat operator+(const Mat& o) const;
    Mat operator-(const Mat& o) const;
    Mat operator*(const Mat& o) const;
    Mat scaled(const Scalar& c) const;
    Mat conj_transpose() const;
    friend bool operator==(const Mat& a, const Mat& b) { return a.n == b.n && a.m == b.m && a.a == b.a; }
    friend bool operator!=(const Mat& a, const Mat& b) { return !(a == b); }
};

Mat mat_inverse(const Mat& m);            // throws std::domain_error when singular
int rref(Mat& m);                         // in place, returns rank
// hermitian projector onto the span of the rows of `rows`: r*Q = r on that span
Mat row_space_projector(const Mat& rows);

std::vector<Scalar> mat_vec(const Mat& m, const std::vector<Scalar>& x);
std::vector<Scalar> vec_mat(const std::vector<Scalar>& x, const Mat& m);
Scalar dot(const std::vector<Scalar>& a, const std::vector<Scalar>& b);

} // namespace ncdist
