#include "ncdist/zpoly.hpp"

#include <stdexcept>

namespace ncdist {

ZPoly ZPoly::zmono(int d, const Scalar& s) {
    ZPoly p;
    if (s.is_zero()) return p;
    p.c.assign(d + 1, Scalar());
    p.c[d] = s;
    return p;
}

void ZPoly::trim() {
    while (!c.empty() && c.back().is_zero()) c.pop_back();
}

ZPoly ZPoly::operator+(const ZPoly& o) const {
    ZPoly r;
    r.c.resize(std::max(c.size(), o.c.size()));
    for (size_t k = 0; k < r.c.size(); ++k) r.c[k] = coeff((int)k) + o.coeff((int)k);
    r.trim();
    return r;
}

ZPoly ZPoly::operator-(const ZPoly& o) const {
    ZPoly r;
    r.c.resize(std::max(c.size(), o.c.size()));
    for (size_t k = 0; k < r.c.size(); ++k) r.c[k] = coeff((int)k) - o.coeff((int)k);
    r.trim();
    return r;
}

ZPoly ZPoly::operator*(const ZPoly& o) const {
    ZPoly r;
    if (is_zero() || o.is_zero()) return r;
    r.c.assign(c.size() + o.c.size() - 1, Scalar());
    for (size_t i = 0; i < c.size(); ++i) {
        if (c[i].is_zero()) continue;
        for (size_t j = 0; j < o.c.size(); ++j) r.c[i + j] += c[i] * o.c[j];
    }
    r.trim();
    return r;
}

ZPoly ZPoly::scaled(const Scalar& s) const {
    ZPoly r;
    if (s.is_zero()) return r;
    r.c.reserve(c.size());
    for (auto& k : c) r.c.push_back(k * s);
    r.trim();
    return r;
}

std::string ZPoly::str() const {
    if (is_zero()) return "0";
    std::string out;
    for (size_t d = 0; d < c.size(); ++d) {
        if (c[d].is_zero()) continue;
        if (!out.empty()) out += " + ";
        std::string cs = scalar_str(c[d]);
        if (d == 0)
            out += cs;
        else if (c[d].is_one())
            out += d == 1 ? "z" : "z^" + std::to_string(d);
        else
            out += "(" + cs + ")*" + (d == 1 ? "z" : "z^" + std::to_string(d));
    }
    return out;
}

PolyMat::PolyMat(const Mat& c) : PolyMat(c.n, c.m) {
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j)
            if (!c.at(i, j).is_zero()) at(i, j) = ZPoly(c.at(i, j));
}

int PolyMat::zdeg() const {
    int d = -1;
    for (auto& p : a) d = std::max(d, p.degree());
    return d;
}

Mat PolyMat::coeff(int d) const {
    Mat r(n, m);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) r.at(i, j) = at(i, j).coeff(d);
    return r;
}

PolyMat PolyMat::operator+(const PolyMat& o) const {
    if (n != o.n || m != o.m) throw std::invalid_argument("PolyMat: shape mismatch in +");
    PolyMat r(n, m);
    for (size_t k = 0; k < a.size(); ++k) r.a[k] = a[k] + o.a[k];
    return r;
}

PolyMat PolyMat::operator*(const PolyMat& o) const {
    if (m != o.n) throw std::invalid_argument("PolyMat: shape mismatch in *");
    PolyMat r(n, o.m);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < m; ++k) {
            if (at(i, k).is_zero()) continue;
            for (int j = 0; j < o.m; ++j)
                if (!o.at(k, j).is_zero()) r.at(i, j) = r.at(i, j) + at(i, k) * o.at(k, j);
        }
    return r;
}

PolyMat PolyMat::scaled(const Scalar& s) const {
    PolyMat r(n, m);
    for (size_t k = 0; k < a.size(); ++k) r.a[k] = a[k].scaled(s);
    return r;
}

bool operator==(const PolyMat& a, const PolyMat& b) {
    return a.n == b.n && a.m == b.m && a.a == b.a;
}

} // namespace ncdist
