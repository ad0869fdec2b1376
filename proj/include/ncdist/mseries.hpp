#pragma once
// Truncated matrix power series in z.  A series carries a lead marker: all
// coefficients below z^lead are identically zero by construction, which lets
// eta_apply know that powers of the argument gain z-orders.

#include "ncdist/dist.hpp"
#include "ncdist/matq.hpp"
#include "ncdist/zpoly.hpp"

#include <string>
#include <vector>

namespace ncdist {

struct ScalarSeries {
    int K = 0;
    std::vector<Scalar> c;   // size K+1

    ScalarSeries() : c(1) {}
    explicit ScalarSeries(int order) : K(order), c(order + 1) {}
    static ScalarSeries one(int K);
    static ScalarSeries z(int K);
    Scalar coeff(int k) const { return k >= 0 && k <= K ? c[k] : Scalar(); }

    ScalarSeries operator+(const ScalarSeries& o) const;
    ScalarSeries operator-(const ScalarSeries& o) const;
    ScalarSeries operator*(const ScalarSeries& o) const;
    ScalarSeries scaled(const Scalar& s) const;
    ScalarSeries inverse() const;                 // needs c[0] != 0
    ScalarSeries pow(int e) const;
    friend bool operator==(const ScalarSeries& a, const ScalarSeries& b) {
        return a.K == b.K && a.c == b.c;
    }
    // order of the first nonzero coefficient; K+1 when none up to the cutoff
    int valuation() const;
    std::string str() const;
};

struct MatSeries {
    int N = 0, K = 0;
    int lead = 0;            // coefficients below z^lead are known zero
    std::vector<Mat> c;      // size K+1

    MatSeries() = default;
    MatSeries(int dim, int order);                // zero series
    static MatSeries id(int dim, int order);
    static MatSeries from_const(const Mat& m, int order);
    static MatSeries from_poly(const PolyMat& p, int order);

    Mat coeff(int k) const;
    bool is_zero() const;

    MatSeries operator+(const MatSeries& o) const;   // K = min of the two
    MatSeries operator-(const MatSeries& o) const;
    MatSeries operator*(const MatSeries& o) const;
    MatSeries scaled(const Scalar& s) const;
    MatSeries shifted(int p) const;                  // multiply by z^p
    MatSeries truncated(int order) const;
    MatSeries inverse() const;                       // c[0] must be invertible
    friend bool operator==(const MatSeries& a, const MatSeries& b);
};

// sum_{k>=1} beta_k(d) S^(k-1).  Requires S.lead >= 1 or a nilpotent constant
// coefficient; throws std::domain_error otherwise.
MatSeries eta_apply(const Dist& d, const MatSeries& S);

ScalarSeries sandwich(const std::vector<Scalar>& u, const MatSeries& S,
                      const std::vector<Scalar>& v);

std::string mseries_json(const MatSeries& s);
MatSeries mseries_from_json(const std::string& text);
std::string sseries_json(const ScalarSeries& s);

} // namespace ncdist
