#pragma once
// Polynomials in the formal marker z, and matrices of them (pencil
// coefficient blocks).

#include "ncdist/matq.hpp"

#include <string>
#include <vector>

namespace ncdist {

struct ZPoly {
    std::vector<Scalar> c;   // c[d] = coefficient of z^d; trailing zeros trimmed

    ZPoly() = default;
    explicit ZPoly(Scalar s) { c.push_back(std::move(s)); trim(); }
    static ZPoly zmono(int d, const Scalar& s);   // s * z^d
    void trim();
    int degree() const { return (int)c.size() - 1; }   // -1 for zero
    bool is_zero() const { return c.empty(); }
    Scalar coeff(int d) const { return d >= 0 && d < (int)c.size() ? c[d] : Scalar(); }

    ZPoly operator+(const ZPoly& o) const;
    ZPoly operator-(const ZPoly& o) const;
    ZPoly operator*(const ZPoly& o) const;
    ZPoly scaled(const Scalar& s) const;
    friend bool operator==(const ZPoly& a, const ZPoly& b) { return a.c == b.c; }
    std::string str() const;
};

struct PolyMat {
    int n = 0, m = 0;
    std::vector<ZPoly> a;

    PolyMat() = default;
    PolyMat(int rows, int cols) : n(rows), m(cols), a((size_t)rows * cols) {}
    explicit PolyMat(const Mat& c);               // degree-0 embedding

    ZPoly& at(int i, int j) { return a[(size_t)i * m + j]; }
    const ZPoly& at(int i, int j) const { return a[(size_t)i * m + j]; }

    int zdeg() const;                             // max entry degree, -1 if zero
    bool is_zero() const { return zdeg() < 0; }
    Mat coeff(int d) const;                       // matrix of z^d coefficients
    PolyMat operator+(const PolyMat& o) const;
    PolyMat operator*(const PolyMat& o) const;
    PolyMat scaled(const Scalar& s) const;
    friend bool operator==(const PolyMat& a, const PolyMat& b);
};

} // namespace ncdist
