#pragma once
// Finite-dimensional matrix models for the bundled laws: a GUE block for
// semicircle, U + U* of a Haar unitary for arcsine, U diag(+-1) U* for the
// symmetric Bernoulli, c I for point masses.  Independent samples are
// asymptotically free, so trace moments of polynomials in them converge to
// the series the exact engine computes.

#include "ncdist/dist.hpp"
#include "ncdist/ncpoly.hpp"

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace ncdist {

Eigen::MatrixXcd gue_sample(int N, std::mt19937_64& gen);
Eigen::MatrixXcd haar_unitary(int N, std::mt19937_64& gen);

// deterministic in (d, name, N, seed); the stream is derived from the name so
// adding variables does not shift the others.  Moments-kind laws have no
// bundled model and throw std::invalid_argument.
Eigen::MatrixXcd sample_matrix(const Dist& d, const std::string& name, int N,
                               std::uint64_t seed);

Eigen::MatrixXcd evaluate_poly(const NCPoly& p, const std::map<VarId, Eigen::MatrixXcd>& at);

// normalized traces tr(p^k)/N, k = 1..kmax; p must be hermitian within tol
std::vector<double> trace_moments(const Eigen::MatrixXcd& p, int kmax, double tol = 1e-8);

} // namespace ncdist
