#pragma once
// Exact Gaussian-rational scalars.  All engine arithmetic is exact; floating
// point appears only in the random-matrix harness and in final reporting.

#include <gmpxx.h>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace ncdist {

struct Scalar {
    mpq_class re, im;

    Scalar() : re(0), im(0) {}
    Scalar(long n) : re(n), im(0) {}
    Scalar(const mpq_class& r) : re(r), im(0) {}
    Scalar(mpq_class r, mpq_class i) : re(std::move(r)), im(std::move(i)) {}

    static Scalar rational(long num, long den) {
        mpq_class q(num, den);
        q.canonicalize();
        return Scalar(q);
    }
    static Scalar I() { return Scalar(mpq_class(0), mpq_class(1)); }

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_real() const { return im == 0; }
    bool is_one() const { return im == 0 && re == 1; }

    Scalar operator-() const { return Scalar(-re, -im); }
    Scalar conj() const { return Scalar(re, -im); }

    Scalar& operator+=(const Scalar& o) { re += o.re; im += o.im; return *this; }
    Scalar& operator-=(const Scalar& o) { re -= o.re; im -= o.im; return *this; }
    Scalar& operator*=(const Scalar& o) {
        if (im == 0 && o.im == 0) { re *= o.re; return *this; }
        mpq_class r = re * o.re - im * o.im;
        im = re * o.im + im * o.re;
        re = r;
        return *this;
    }
    friend Scalar operator+(Scalar a, const Scalar& b) { a += b; return a; }
    friend Scalar operator-(Scalar a, const Scalar& b) { a -= b; return a; }
    friend Scalar operator*(Scalar a, const Scalar& b) { a *= b; return a; }

    // |a|^2 = a * conj(a); rational and nonnegative.
    mpq_class norm2() const { return re * re + im * im; }

    Scalar inv() const {
        mpq_class n = norm2();
        if (n == 0) throw std::domain_error("Scalar: division by zero");
        return Scalar(re / n, -im / n);
    }
    Scalar& operator/=(const Scalar& o) { return *this *= o.inv(); }
    friend Scalar operator/(Scalar a, const Scalar& b) { a /= b; return a; }

    friend bool operator==(const Scalar& a, const Scalar& b) { return a.re == b.re && a.im == b.im; }
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

    double re_d() const { return re.get_d(); }
    double im_d() const { return im.get_d(); }
};

// "p/q" | "p" ; complex values as "a/b+c/d*i", "-i", "3*i", etc. (the format
// str() emits).  Throws std::invalid_argument on garbage.
Scalar scalar_from_string(const std::string& s);
std::string scalar_str(const Scalar& s);   // round-trips through scalar_from_string
std::string rat_str(const mpq_class& q);

} // namespace ncdist
