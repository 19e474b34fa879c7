#pragma once

// Shared error type and small integer helpers.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace kloost {

using BigInt = mpz_class;
using BigRat = mpq_class;

enum class Errc {
    NonPrime,
    NotCoprime,
    NotRational,
    ZeroPoint,
    MissingTower,
    TooManyRows,
    NonIntegral,
    DeskScaleExceeded,
    CharDividesOrder,
    NonIntegerSwan,
    NegativeDimension,
    OutOfScopePair,
    ClosureOverflow,
    NonRationalResult,
    InconsistentParity,
    BadPrime,
    NonIntegralPower,
    InsufficientLength,
    InvalidArgument,
    CacheError,
};

inline const char* errc_name(Errc c) {
    switch (c) {
    case Errc::NonPrime: return "NonPrime";
    case Errc::NotCoprime: return "NotCoprime";
    case Errc::NotRational: return "NotRational";
    case Errc::ZeroPoint: return "ZeroPoint";
    case Errc::MissingTower: return "MissingTower";
    case Errc::TooManyRows: return "TooManyRows";
    case Errc::NonIntegral: return "NonIntegral";
    case Errc::DeskScaleExceeded: return "DeskScaleExceeded";
    case Errc::CharDividesOrder: return "CharDividesOrder";
    case Errc::NonIntegerSwan: return "NonIntegerSwan";
    case Errc::NegativeDimension: return "NegativeDimension";
    case Errc::OutOfScopePair: return "OutOfScopePair";
    case Errc::ClosureOverflow: return "ClosureOverflow";
    case Errc::NonRationalResult: return "NonRationalResult";
    case Errc::InconsistentParity: return "InconsistentParity";
    case Errc::BadPrime: return "BadPrime";
    case Errc::NonIntegralPower: return "NonIntegralPower";
    case Errc::InsufficientLength: return "InsufficientLength";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::CacheError: return "CacheError";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

// deterministic trial division, fine for desk-scale moduli
inline bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    if (n < 4) return true;
    if (n % 2 == 0) return false;
    for (std::int64_t d = 3; d * d <= n; d += 2)
        if (n % d == 0) return false;
    return true;
}

inline void require_prime(std::int64_t p) {
    if (!is_prime(p)) throw Error(Errc::NonPrime, std::to_string(p) + " is not prime");
}

inline std::int64_t ipow(std::int64_t b, unsigned e) {
    std::int64_t r = 1;
    while (e--) r *= b;
    return r;
}

inline BigInt bigpow(std::int64_t b, unsigned long e) {
    BigInt r;
    BigInt base = static_cast<long>(b);
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline std::int64_t mod(std::int64_t a, std::int64_t m) {
    a %= m;
    return a < 0 ? a + m : a;
}

inline std::int64_t powmod(std::int64_t b, std::uint64_t e, std::int64_t m) {
    unsigned __int128 r = 1 % m, x = mod(b, m);
    while (e) {
        if (e & 1) r = r * x % m;
        x = x * x % m;
        e >>= 1;
    }
    return static_cast<std::int64_t>(r);
}

inline std::int64_t gcd64(std::int64_t a, std::int64_t b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b) {
        std::int64_t t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline std::vector<std::int64_t> prime_factors(std::int64_t n) {
    std::vector<std::int64_t> out;
    for (std::int64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

inline std::int64_t euler_phi(std::int64_t n) {
    std::int64_t r = n;
    for (auto f : prime_factors(n)) r = r / f * (f - 1);
    return r;
}

inline BigInt binomial(unsigned long n, unsigned long k) {
    BigInt r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

inline std::vector<std::int64_t> primes_in(std::int64_t lo, std::int64_t hi) {
    std::vector<std::int64_t> out;
    for (std::int64_t p = std::max<std::int64_t>(lo, 2); p <= hi; ++p)
        if (is_prime(p)) out.push_back(p);
    return out;
}

// Legendre/Jacobi symbol (a/n) for odd positive n
inline int jacobi(std::int64_t a, std::int64_t n) {
    BigInt A = a, N = n;
    return mpz_jacobi(A.get_mpz_t(), N.get_mpz_t());
}

} // namespace kloost
