#pragma once
// Single-variable spectral data.  MomentSeq/BoolCumSeq index by subscript:
// seq[k] is the k-th moment / Boolean cumulant, seq[0] = 1 for moments.
// eta coefficients: eta(z) = sum_{n>=1} beta_n z^{n-1}.

#include "ncdist/scalar.hpp"

#include <string>
#include <vector>

namespace ncdist {

using MomentSeq = std::vector<Scalar>;
using BoolCumSeq = std::vector<Scalar>;

// beta_n = m_n - sum_{k<n} beta_k m_{n-k}; inverse runs the same triangle up.
BoolCumSeq moments_to_boolean(const MomentSeq& m);
MomentSeq boolean_to_moments(const BoolCumSeq& b);

struct Dist {
    enum Kind { Semicircle, Bernoulli, Arcsine, PointMass, Moments } kind = Semicircle;
    Scalar param;            // variance (Semicircle) or the atom (PointMass)
    MomentSeq given;         // Moments kind; zero-extended past the list

    static Dist semicircle(const Scalar& variance);
    static Dist bernoulli_symmetric();
    static Dist arcsine();
    static Dist point_mass(const Scalar& c);
    static Dist moments(MomentSeq m);

    Scalar moment(int k) const;          // m_k, m_0 = 1
    Scalar bcum(int k) const;            // beta_k, k >= 1
    std::vector<Scalar> eta_coeffs(int K) const;   // beta_{1..K+1} as z^0..z^K

    std::string json() const;

  private:
    mutable MomentSeq mom_cache;         // mom_cache[k] = m_k
    mutable BoolCumSeq bcum_cache;       // bcum_cache[k] = beta_k, [0] = 0
    void grow(int k) const;
};

Dist dist_from_json(const std::string& text);

} // namespace ncdist
