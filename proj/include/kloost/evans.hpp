#pragma once

// Evans-type identities: moments of Kloosterman sheaves against Fourier
// coefficients of modular forms.

#include <fstream>
#include <set>

#include <json.hpp>

#include "numeric.hpp"
#include "residue.hpp"
#include "weylchar.hpp"

namespace kloost {

enum class EvansId { kl2_k5, kl2_k6, kl2_k8, sym4kl3, sym3kl4, sym4kl4, sym3kl5, kl3_21, kl3_22 };

struct EvansIdentity {
    EvansId id;
    const char* name;
    int nplus1;
    std::vector<int> lambda;
    int h;                          // a = -chi(p) (m + c) / p^h
    std::vector<int> c;             // correction c(p) = sum c[i] p^i
    std::int64_t chi_modulus;       // 0: no twist, else chi(p) = (p / modulus)
    int k_f;                        // weight of the form
    int level;
    std::set<std::int64_t> bad;

    // n |mu| + 1
    int weight() const {
        HighestWeight hw(lambda);
        return (nplus1 - 1) * partition_size(hw.padded(nplus1).mu()) + 1;
    }
    BigInt correction(std::int64_t p) const {
        BigInt s = 0;
        for (std::size_t i = 0; i < c.size(); ++i)
            if (c[i]) s += c[i] * bigpow(p, static_cast<unsigned>(i));
        return s;
    }
    int chi(std::int64_t p) const { return chi_modulus ? jacobi(p, chi_modulus) : 1; }
};

inline const std::vector<EvansIdentity>& evans_registry() {
    static const std::vector<EvansIdentity> reg = {
        {EvansId::kl2_k5, "kl2_k5", 2, {5}, 2, {1}, 0, 3, 15, {3, 5}},
        {EvansId::kl2_k6, "kl2_k6", 2, {6}, 2, {1}, 0, 4, 6, {2, 3}},
        // c = 1 alone breaks the Ramanujan bound (p = 107); 1 + p^4 matches the level 6 newform
        {EvansId::kl2_k8, "kl2_k8", 2, {8}, 2, {1, 0, 0, 0, 1}, 0, 6, 6, {2, 3}},
        {EvansId::sym4kl3, "sym4kl3", 3, {4}, 3, {1, 0, 1, 0, 1}, 0, 4, 14, {2, 7}},
        {EvansId::sym3kl4, "sym3kl4", 4, {3}, 4, {1, 0, 1, 1}, 15, 3, 15, {3, 5}},
        {EvansId::sym4kl4, "sym4kl4", 4, {4}, 4, {1, 0, 1, 1, 1, 0, 2}, 0, 6, 10, {2, 5}},
        {EvansId::sym3kl5, "sym3kl5", 5, {3}, 5, {1, 0, 1, 1, 1, 0, 1}, 0, 4, 33, {3, 11}},
        {EvansId::kl3_21, "kl3_21", 3, {2, 1}, 4, {0, 1, 1, 1}, 0, 2, 14, {2, 3, 7}},
        {EvansId::kl3_22, "kl3_22", 3, {2, 2}, 5, {0, 0, 1, 1, 2, 0, 2}, 0, 4, 6, {2, 3}},
    };
    return reg;
}

inline const EvansIdentity& evans_identity(EvansId id) {
    for (const auto& e : evans_registry())
        if (e.id == id) return e;
    throw Error(Errc::InvalidArgument, "unknown identity");
}

inline const EvansIdentity& evans_identity(const std::string& name) {
    for (const auto& e : evans_registry())
        if (name == e.name) return e;
    throw Error(Errc::InvalidArgument, "unknown identity: " + name);
}

inline void require_good(const EvansIdentity& e, std::int64_t p) {
    require_prime(p);
    if (e.bad.count(p)) throw Error(Errc::BadPrime, std::string("bad prime for ") + e.name);
}

inline BigInt evans_moment(const EvansIdentity& e, std::int64_t p, const MomentOptions& opt = {}) {
    return moment(e.nplus1, HighestWeight(e.lambda), p, opt).moment;
}

// a-value from an already computed moment
inline BigRat a_value_from_moment(const EvansIdentity& e, std::int64_t p, const BigInt& m) {
    BigRat a(-(m + e.correction(p)) * e.chi(p), bigpow(p, e.h));
    a.canonicalize();
    return a;
}

inline BigRat a_value(const EvansIdentity& e, std::int64_t p, const MomentOptions& opt = {}) {
    require_good(e, p);
    BigRat a = a_value_from_moment(e, p, evans_moment(e, p, opt));
    if (!e.chi_modulus && a.get_den() != 1) throw Error(Errc::NonIntegral, std::string("a-value not integral for ") + e.name);
    return a;
}

inline bool ramanujan_ok(const EvansIdentity& e, std::int64_t p, const BigRat& a) {
    // a^2 <= 4 p^{k_f - 1}
    return a * a <= BigRat(4 * bigpow(p, e.k_f - 1));
}

struct LocalFactor {
    BigInt one = 1;
    BigInt t; // middle-cohomology trace
    BigInt d; // p^w
};

inline LocalFactor local_factor_from_moment(const EvansIdentity& e, std::int64_t p, const BigInt& m) {
    LocalFactor f;
    f.t = -(m + e.correction(p));
    f.d = bigpow(p, e.weight());
    return f;
}

inline LocalFactor local_factor(const EvansIdentity& e, std::int64_t p, const MomentOptions& opt = {}) {
    require_good(e, p);
    return local_factor_from_moment(e, p, evans_moment(e, p, opt));
}

// roots of T^2 - t T + d have |root| = sqrt(d) when t^2 <= 4d; returns max relative deviation
inline double purity_defect(const LocalFactor& f, std::int64_t p, int weight) {
    const long prec = 256;
    Real t = Real::of(f.t, prec), d = Real::of(f.d, prec);
    Real disc = t * t - d * Real::of(BigInt(4), prec);
    Real target = Real::of(BigInt(p), prec).pow(Real::of(BigRat(weight, 2), prec));
    double dev;
    if (disc <= Real::of(BigInt(0), prec)) {
        // complex pair: |root|^2 = d
        dev = ((d.sqrt() - target).abs() / target).to_double();
    } else {
        Real s = disc.sqrt();
        Real two = Real::of(BigInt(2), prec);
        Real r1 = ((t + s) / two).abs(), r2 = ((t - s) / two).abs();
        dev = std::max(((r1 - target).abs() / target).to_double(), ((r2 - target).abs() / target).to_double());
    }
    return dev;
}

struct EtaProduct {
    std::vector<std::pair<int, int>> factors; // (multiplier, exponent)
    int weight_twice() const {
        int s = 0;
        for (auto [m, e] : factors) s += e;
        return s;
    }
};

namespace detail {

// prod_{n>=1} (1 - q^n) up to q^N via pentagonal numbers
inline std::vector<BigInt> euler_product(int N) {
    std::vector<BigInt> c(N + 1);
    for (int k = 0;; ++k) {
        bool any = false;
        for (int s : {1, -1}) {
            if (k == 0 && s == -1) continue;
            long kk = s * k;
            long e = kk * (3 * kk - 1) / 2;
            if (e > N) continue;
            any = true;
            c[e] += (k % 2) ? -1 : 1;
        }
        if (!any && k > 0) break;
    }
    return c;
}

inline std::vector<BigInt> series_mul(const std::vector<BigInt>& a, const std::vector<BigInt>& b, int N) {
    std::vector<BigInt> c(N + 1);
    for (int i = 0; i <= N; ++i) {
        if (a[i] == 0) continue;
        for (int j = 0; i + j <= N; ++j)
            if (b[j] != 0) c[i + j] += a[i] * b[j];
    }
    return c;
}

// inverse of a series with constant term 1
inline std::vector<BigInt> series_inv(const std::vector<BigInt>& a, int N) {
    std::vector<BigInt> b(N + 1);
    b[0] = 1;
    for (int k = 1; k <= N; ++k) {
        BigInt acc = 0;
        for (int j = 1; j <= k; ++j)
            if (a[j] != 0) acc -= a[j] * b[k - j];
        b[k] = acc;
    }
    return b;
}

} // namespace detail

// a(1..N) of prod eta(m tau)^e
inline std::vector<BigInt> eta_product(const EtaProduct& ep, int N) {
    long shift24 = 0;
    for (auto [m, e] : ep.factors) shift24 += static_cast<long>(m) * e;
    if (shift24 % 24 != 0) throw Error(Errc::NonIntegralPower, "sum m*e not divisible by 24");
    long shift = shift24 / 24;
    if (shift < 0 || N < 1) throw Error(Errc::InvalidArgument, "negative q-shift or empty range");
    int M = N; // q-exponents 0..N before shifting
    auto E = detail::euler_product(M);
    std::vector<BigInt> prod(M + 1);
    prod[0] = 1;
    for (auto [m, e] : ep.factors) {
        std::vector<BigInt> f(M + 1);
        for (int i = 0; i * m <= M; ++i) f[i * m] = E[i];
        if (e < 0) f = detail::series_inv(f, M);
        for (int k = 0; k < std::abs(e); ++k) prod = detail::series_mul(prod, f, M);
    }
    std::vector<BigInt> a(N);
    for (int j = 1; j <= N; ++j) {
        long idx = j - shift;
        a[j - 1] = (idx >= 0 && idx <= M) ? prod[idx] : BigInt(0);
    }
    return a;
}

// multiplicativity and the p^2 recursion; coeffs[i] = a(i+1)
inline bool hecke_check(const std::vector<BigInt>& coeffs, int k_f, const std::vector<std::int64_t>& primes) {
    auto a = [&](std::int64_t n) { return coeffs[n - 1]; };
    std::int64_t N = static_cast<std::int64_t>(coeffs.size());
    for (std::int64_t p : primes) {
        if (p * p > N) throw Error(Errc::InsufficientLength, "coefficient list shorter than p^2");
        if (a(p * p) != a(p) * a(p) - bigpow(p, k_f - 1)) return false;
        for (std::int64_t m = 1; p * m <= N; ++m) {
            if (m % p == 0) continue;
            if (a(p * m) != a(p) * a(m)) return false;
        }
    }
    return true;
}

// m_3^{(2,2)}(p) - p^3 m_2^6(p) = -2p^6 - 2p^4 - p^2
struct CrossIdentityResult {
    BigInt lhs, rhs;
    bool holds() const { return lhs == rhs; }
};

inline CrossIdentityResult cross_identity_values(std::int64_t p, const MomentOptions& opt = {}) {
    require_prime(p);
    if (p == 2 || p == 3) throw Error(Errc::BadPrime, "cross identity needs p >= 5");
    BigInt m22 = moment(3, HighestWeight{2, 2}, p, opt).moment;
    BigInt m6 = moment(2, HighestWeight{6}, p, opt).moment;
    CrossIdentityResult r;
    r.lhs = m22 - bigpow(p, 3) * m6;
    r.rhs = -2 * bigpow(p, 6) - 2 * bigpow(p, 4) - bigpow(p, 2);
    return r;
}

inline bool cross_identity(std::int64_t p, const MomentOptions& opt = {}) { return cross_identity_values(p, opt).holds(); }

// {identity: {prime: a}} golden tables
using FixtureTable = std::map<std::string, std::map<std::int64_t, BigInt>>;

inline FixtureTable load_fixtures(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::InvalidArgument, "cannot open fixtures: " + path);
    auto j = nlohmann::json::parse(in);
    FixtureTable out;
    for (const auto& e : evans_registry()) {
        if (!j.contains(e.name)) continue;
        for (auto it = j[e.name].begin(); it != j[e.name].end(); ++it)
            out[e.name][std::stoll(it.key())] = BigInt(it.value().get<long>());
    }
    return out;
}

} // namespace kloost
