#include "ncdist/rmt.hpp"

#include <cmath>
#include <stdexcept>

namespace ncdist {

namespace {

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// engine-independent uniform and Box-Muller so streams do not depend on the
// standard library's distribution internals
double unit_uniform(std::mt19937_64& gen) {
    return double(gen() >> 11) * 0x1.0p-53 + 0x1.0p-54;   // (0, 1)
}

double std_normal(std::mt19937_64& gen) {
    double u1 = unit_uniform(gen), u2 = unit_uniform(gen);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

} // namespace

Eigen::MatrixXcd gue_sample(int N, std::mt19937_64& gen) {
    Eigen::MatrixXcd h(N, N);
    double off = 1.0 / std::sqrt(2.0 * N), dia = 1.0 / std::sqrt((double)N);
    for (int i = 0; i < N; ++i) {
        h(i, i) = std_normal(gen) * dia;
        for (int j = i + 1; j < N; ++j) {
            std::complex<double> z(std_normal(gen), std_normal(gen));
            h(i, j) = z * off;
            h(j, i) = std::conj(h(i, j));
        }
    }
    return h;
}

Eigen::MatrixXcd haar_unitary(int N, std::mt19937_64& gen) {
    Eigen::MatrixXcd g(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) g(i, j) = {std_normal(gen), std_normal(gen)};
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ();
    // fix the phase convention so the result is Haar rather than QR-biased
    for (int j = 0; j < N; ++j) {
        std::complex<double> r = qr.matrixQR()(j, j);
        double a = std::abs(r);
        q.col(j) *= a > 0 ? r / a : 1.0;
    }
    return q;
}

Eigen::MatrixXcd sample_matrix(const Dist& d, const std::string& name, int N,
                               std::uint64_t seed) {
    std::mt19937_64 gen(splitmix64(seed ^ fnv1a(name)));
    switch (d.kind) {
        case Dist::Semicircle: {
            double v = d.param.re_d();
            if (v < 0 || d.param.im_d() != 0)
                throw std::invalid_argument("sample_matrix: variance must be >= 0");
            return gue_sample(N, gen) * std::sqrt(v);
        }
        case Dist::Arcsine: {
            Eigen::MatrixXcd u = haar_unitary(N, gen);
            return u + u.adjoint().eval();
        }
        case Dist::Bernoulli: {
            Eigen::MatrixXcd u = haar_unitary(N, gen);
            Eigen::VectorXd sgn(N);
            for (int i = 0; i < N; ++i) sgn(i) = i < N / 2 ? 1.0 : -1.0;
            return u * sgn.asDiagonal() * u.adjoint();
        }
        case Dist::PointMass: {
            std::complex<double> c(d.param.re_d(), d.param.im_d());
            return Eigen::MatrixXcd::Identity(N, N) * c;
        }
        case Dist::Moments:
            throw std::invalid_argument("sample_matrix: no matrix model for raw moment data");
    }
    throw std::logic_error("sample_matrix: unreachable");
}

Eigen::MatrixXcd evaluate_poly(const NCPoly& p, const std::map<VarId, Eigen::MatrixXcd>& at) {
    if (at.empty()) throw std::invalid_argument("evaluate_poly: no letters");
    int N = (int)at.begin()->second.rows();
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(N, N);
    for (const auto& [w, c] : p.t) {
        Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(N, N);
        for (VarId x : w) {
            auto it = at.find(x);
            if (it == at.end())
                throw std::invalid_argument("evaluate_poly: unbound letter " + var_name(x));
            term = (term * it->second).eval();
        }
        acc += term * std::complex<double>(c.re_d(), c.im_d());
    }
    return acc;
}

std::vector<double> trace_moments(const Eigen::MatrixXcd& p, int kmax, double tol) {
    int N = (int)p.rows();
    double scale = std::max(1.0, p.cwiseAbs().maxCoeff());
    if ((p - p.adjoint().eval()).cwiseAbs().maxCoeff() > tol * scale)
        throw std::domain_error("trace_moments: matrix is not hermitian");
    // powers up to ceil(kmax/2); tr(p^{a+b}) is then a Frobenius pairing
    int h = (kmax + 1) / 2;
    std::vector<Eigen::MatrixXcd> pw;
    pw.push_back(p);
    for (int j = 2; j <= h; ++j) pw.push_back((pw.back() * p).eval());
    std::vector<double> m(kmax);
    for (int k = 1; k <= kmax; ++k) {
        int a = std::min(k, h), b = k - a;
        std::complex<double> t;
        if (b == 0) t = pw[a - 1].trace();
        else t = pw[a - 1].conjugate().cwiseProduct(pw[b - 1]).sum();
        m[k - 1] = t.real() / N;
    }
    return m;
}

} // namespace ncdist
