#include "ncdist/dist.hpp"

#include "json.hpp"

#include <stdexcept>

namespace ncdist {

BoolCumSeq moments_to_boolean(const MomentSeq& m) {
    if (m.empty() || m[0] != Scalar(1))
        throw std::invalid_argument("moments_to_boolean: m[0] must be 1");
    BoolCumSeq b(m.size());
    for (size_t n = 1; n < m.size(); ++n) {
        Scalar acc = m[n];
        for (size_t k = 1; k < n; ++k) acc -= b[k] * m[n - k];
        b[n] = acc;
    }
    return b;
}

MomentSeq boolean_to_moments(const BoolCumSeq& b) {
    MomentSeq m(b.size());
    if (m.empty()) return m;
    m[0] = Scalar(1);
    for (size_t n = 1; n < b.size(); ++n) {
        Scalar acc;
        for (size_t k = 1; k <= n; ++k) acc += b[k] * m[n - k];
        m[n] = acc;
    }
    return m;
}

Dist Dist::semicircle(const Scalar& variance) {
    Dist d;
    d.kind = Semicircle;
    d.param = variance;
    return d;
}

Dist Dist::bernoulli_symmetric() {
    Dist d;
    d.kind = Bernoulli;
    return d;
}

Dist Dist::arcsine() {
    Dist d;
    d.kind = Arcsine;
    return d;
}

Dist Dist::point_mass(const Scalar& c) {
    Dist d;
    d.kind = PointMass;
    d.param = c;
    return d;
}

Dist Dist::moments(MomentSeq m) {
    if (m.empty() || m[0] != Scalar(1))
        throw std::invalid_argument("Dist::moments: m[0] must be 1");
    Dist d;
    d.kind = Moments;
    d.given = std::move(m);
    return d;
}

namespace {

mpz_class binom(unsigned long n, unsigned long k) {
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

mpz_class catalan(unsigned long n) { return binom(2 * n, n) / mpz_class(n + 1); }

} // namespace

void Dist::grow(int k) const {
    if ((int)mom_cache.size() > k) return;
    int hi = std::max(k, 8);
    mom_cache.assign(hi + 1, Scalar());
    mom_cache[0] = Scalar(1);
    for (int n = 1; n <= hi; ++n) {
        switch (kind) {
            case Semicircle:
                if (n % 2 == 0) {
                    Scalar vp(1);
                    for (int j = 0; j < n / 2; ++j) vp *= param;
                    mom_cache[n] = vp * Scalar(mpq_class(catalan(n / 2)));
                }
                break;
            case Bernoulli:
                if (n % 2 == 0) mom_cache[n] = Scalar(1);
                break;
            case Arcsine:
                if (n % 2 == 0) mom_cache[n] = Scalar(mpq_class(binom(n, n / 2)));
                break;
            case PointMass: {
                mom_cache[n] = mom_cache[n - 1] * param;
                break;
            }
            case Moments:
                if (n < (int)given.size()) mom_cache[n] = given[n];
                break;
        }
    }
    bcum_cache = moments_to_boolean(mom_cache);
}

Scalar Dist::moment(int k) const {
    if (k < 0) throw std::invalid_argument("Dist::moment: negative order");
    grow(k);
    return mom_cache[k];
}

Scalar Dist::bcum(int k) const {
    if (k < 1) throw std::invalid_argument("Dist::bcum: order must be >= 1");
    grow(k);
    return bcum_cache[k];
}

std::vector<Scalar> Dist::eta_coeffs(int K) const {
    std::vector<Scalar> c(K + 1);
    for (int n = 0; n <= K; ++n) c[n] = bcum(n + 1);
    return c;
}

std::string Dist::json() const {
    nlohmann::json j;
    switch (kind) {
        case Semicircle:
            j["kind"] = "semicircle";
            j["variance"] = scalar_str(param);
            break;
        case Bernoulli: j["kind"] = "bernoulli"; break;
        case Arcsine: j["kind"] = "arcsine"; break;
        case PointMass:
            j["kind"] = "point";
            j["c"] = scalar_str(param);
            break;
        case Moments: {
            j["kind"] = "moments";
            nlohmann::json arr = nlohmann::json::array();
            for (auto& s : given) arr.push_back(scalar_str(s));
            j["m"] = arr;
            break;
        }
    }
    return j.dump();
}

Dist dist_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "semicircle") {
        Scalar v = j.contains("variance") ? scalar_from_string(j["variance"].get<std::string>())
                                          : Scalar(1);
        return Dist::semicircle(v);
    }
    if (kind == "bernoulli") return Dist::bernoulli_symmetric();
    if (kind == "arcsine") return Dist::arcsine();
    if (kind == "point") return Dist::point_mass(scalar_from_string(j.at("c").get<std::string>()));
    if (kind == "moments") {
        MomentSeq m;
        for (auto& e : j.at("m")) m.push_back(scalar_from_string(e.get<std::string>()));
        return Dist::moments(std::move(m));
    }
    throw std::invalid_argument("dist_from_json: unknown kind '" + kind + "'");
}

} // namespace ncdist
