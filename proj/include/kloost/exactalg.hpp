#pragma once

// Prime fields, extension fields F_{p^r} and cyclotomic numbers Q(zeta_m).

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "common.hpp"

namespace kloost {

// ---------------------------------------------------------------- F_p

struct FpElem {
    std::int64_t value = 0;
    std::int64_t p = 2;

    FpElem() = default;
    FpElem(std::int64_t v, std::int64_t p_) : value(mod(v, p_)), p(p_) {}

    FpElem operator+(const FpElem& o) const { return {value + o.value, p}; }
    FpElem operator-(const FpElem& o) const { return {value - o.value, p}; }
    FpElem operator*(const FpElem& o) const { return {value * o.value % p, p}; }
    FpElem inv() const {
        if (value == 0) throw Error(Errc::ZeroPoint, "inverse of 0 in F_p");
        return {powmod(value, p - 2, p), p};
    }
    bool operator==(const FpElem& o) const { return value == o.value && p == o.p; }
};

// ---------------------------------------------------------------- F_p[X] helpers

namespace fpoly {

using Poly = std::vector<std::int64_t>; // low degree first

inline void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline Poly mul(const Poly& a, const Poly& b, std::int64_t p) {
    if (a.empty() || b.empty()) return {};
    Poly c(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + a[i] * b[j]) % p;
    trim(c);
    return c;
}

inline Poly rem(Poly a, const Poly& m, std::int64_t p) {
    trim(a);
    std::int64_t inv_lead = powmod(m.back(), p - 2, p);
    while (a.size() >= m.size()) {
        std::int64_t c = a.back() * inv_lead % p;
        std::size_t shift = a.size() - m.size();
        for (std::size_t i = 0; i < m.size(); ++i) a[shift + i] = mod(a[shift + i] - c * m[i], p);
        trim(a);
    }
    return a;
}

inline Poly gcd(Poly a, Poly b, std::int64_t p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        Poly r = rem(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

inline Poly powmod_poly(Poly base, std::int64_t e, const Poly& m, std::int64_t p) {
    Poly r{1};
    base = rem(base, m, p);
    while (e) {
        if (e & 1) r = rem(mul(r, base, p), m, p);
        base = rem(mul(base, base, p), m, p);
        e >>= 1;
    }
    return r;
}

// gcd(X^{p^i} - X, f) = 1 for 1 <= i < r, and X^{p^r} = X mod f
inline bool is_irreducible(const Poly& f, std::int64_t p) {
    int r = static_cast<int>(f.size()) - 1;
    if (r < 1) return false;
    if (r == 1) return true;
    Poly x{0, 1};
    Poly xp = x;
    for (int i = 1; i <= r; ++i) {
        xp = powmod_poly(xp, p, f, p);
        Poly d = xp;
        d.resize(std::max<std::size_t>(d.size(), 2), 0);
        d[1] = mod(d[1] - 1, p);
        trim(d);
        if (i < r) {
            Poly g = gcd(f, d, p);
            if (g.size() != 1) return false;
        } else if (!d.empty()) {
            return false;
        }
    }
    return true;
}

} // namespace fpoly

// ---------------------------------------------------------------- F_{p^r}

struct ExtFieldData {
    std::int64_t p;
    int r;
    std::int64_t q;
    fpoly::Poly modulus; // monic, size r+1
};

class ExtElem;

class ExtField {
public:
    ExtField() = default;
    explicit ExtField(std::shared_ptr<const ExtFieldData> d) : d_(std::move(d)) {}

    std::int64_t p() const { return d_->p; }
    int r() const { return d_->r; }
    std::int64_t q() const { return d_->q; }
    const fpoly::Poly& modulus() const { return d_->modulus; }
    bool operator==(const ExtField& o) const {
        return d_ == o.d_ || (p() == o.p() && modulus() == o.modulus());
    }

    ExtElem zero() const;
    ExtElem one() const;
    ExtElem from_code(std::int64_t code) const;
    ExtElem gen_x() const;

    // smallest code (highest coefficient compared first) of order q-1
    std::int64_t generator_code() const;

private:
    std::shared_ptr<const ExtFieldData> d_;
};

class ExtElem {
public:
    ExtElem() = default;
    ExtElem(ExtField f, std::vector<std::int64_t> c) : f_(std::move(f)), c_(std::move(c)) {
        c_.resize(f_.r(), 0);
        for (auto& v : c_) v = mod(v, f_.p());
    }

    const ExtField& field() const { return f_; }
    const std::vector<std::int64_t>& coeffs() const { return c_; }

    std::int64_t code() const {
        std::int64_t s = 0;
        for (int i = f_.r() - 1; i >= 0; --i) s = s * f_.p() + c_[i];
        return s;
    }
    bool is_zero() const {
        return std::all_of(c_.begin(), c_.end(), [](std::int64_t v) { return v == 0; });
    }

    ExtElem operator+(const ExtElem& o) const {
        std::vector<std::int64_t> c(c_.size());
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = (c_[i] + o.c_[i]) % f_.p();
        return {f_, std::move(c)};
    }
    ExtElem operator-(const ExtElem& o) const {
        std::vector<std::int64_t> c(c_.size());
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = c_[i] - o.c_[i];
        return {f_, std::move(c)};
    }
    ExtElem operator-() const { return f_.zero() - *this; }
    ExtElem operator*(const ExtElem& o) const {
        std::int64_t p = f_.p();
        int r = f_.r();
        std::vector<std::int64_t> prod(2 * r - 1, 0);
        for (int i = 0; i < r; ++i) {
            if (!c_[i]) continue;
            for (int j = 0; j < r; ++j) prod[i + j] = (prod[i + j] + c_[i] * o.c_[j]) % p;
        }
        const auto& m = f_.modulus();
        for (int d = 2 * r - 2; d >= r; --d) {
            std::int64_t c = prod[d];
            if (!c) continue;
            for (int i = 0; i <= r; ++i) prod[d - r + i] = mod(prod[d - r + i] - c * m[i], p);
        }
        prod.resize(r);
        return {f_, std::move(prod)};
    }
    ExtElem pow(std::int64_t e) const {
        ExtElem r = f_.one(), b = *this;
        while (e) {
            if (e & 1) r = r * b;
            b = b * b;
            e >>= 1;
        }
        return r;
    }
    ExtElem inv() const {
        if (is_zero()) throw Error(Errc::ZeroPoint, "inverse of 0 in F_q");
        return pow(f_.q() - 2);
    }
    ExtElem frobenius() const { return pow(f_.p()); }

    bool operator==(const ExtElem& o) const { return c_ == o.c_; }
    bool operator!=(const ExtElem& o) const { return c_ != o.c_; }

private:
    ExtField f_;
    std::vector<std::int64_t> c_;
};

inline ExtElem ExtField::zero() const { return {*this, std::vector<std::int64_t>(r(), 0)}; }
inline ExtElem ExtField::one() const {
    std::vector<std::int64_t> c(r(), 0);
    c[0] = 1;
    return {*this, c};
}
inline ExtElem ExtField::gen_x() const {
    if (r() == 1) return {*this, {0}};
    std::vector<std::int64_t> c(r(), 0);
    c[1] = 1;
    return {*this, c};
}
inline ExtElem ExtField::from_code(std::int64_t code) const {
    std::vector<std::int64_t> c(r());
    for (int i = 0; i < r(); ++i) {
        c[i] = code % p();
        code /= p();
    }
    return {*this, c};
}

inline std::int64_t ExtField::generator_code() const {
    auto fac = prime_factors(q() - 1);
    for (std::int64_t code = 1; code < q(); ++code) {
        ExtElem x = from_code(code);
        bool ok = true;
        for (auto f : fac)
            if (x.pow((q() - 1) / f) == one()) {
                ok = false;
                break;
            }
        if (ok) return code;
    }
    throw Error(Errc::InvalidArgument, "no generator found");
}

inline ExtField ext_field(std::int64_t p, int r) {
    require_prime(p);
    if (r < 1) throw Error(Errc::InvalidArgument, "extension degree must be >= 1");
    static std::mutex mu;
    static std::map<std::pair<std::int64_t, int>, std::shared_ptr<const ExtFieldData>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(p, r);
    if (auto it = cache.find(key); it != cache.end()) return ExtField(it->second);

    std::int64_t q = ipow(p, r);
    fpoly::Poly modulus;
    if (r == 1) {
        modulus = {0, 1};
    } else {
        for (std::int64_t code = 0; code < q; ++code) {
            fpoly::Poly f(r + 1);
            std::int64_t c = code;
            for (int i = 0; i < r; ++i) {
                f[i] = c % p;
                c /= p;
            }
            f[r] = 1;
            if (fpoly::is_irreducible(f, p)) {
                modulus = f;
                break;
            }
        }
    }
    auto d = std::make_shared<const ExtFieldData>(ExtFieldData{p, r, q, modulus});
    cache.emplace(key, d);
    return ExtField(d);
}

inline FpElem trace(const ExtElem& x) {
    const auto& f = x.field();
    ExtElem s = x, y = x;
    for (int i = 1; i < f.r(); ++i) {
        y = y.frobenius();
        s = s + y;
    }
    for (int i = 1; i < f.r(); ++i)
        if (s.coeffs()[i] != 0) throw Error(Errc::InvalidArgument, "trace left F_p");
    return {s.coeffs()[0], f.p()};
}

// Tr(X^k) for k < r; trace is then a dot product
inline std::vector<std::int64_t> trace_basis(const ExtField& f) {
    std::vector<std::int64_t> t(f.r());
    ExtElem x = f.one();
    for (int k = 0; k < f.r(); ++k) {
        t[k] = trace(x).value;
        x = x * f.gen_x();
    }
    return t;
}

// smallest-code root in `big` of the modulus of `small`; defines F_small -> F_big
class FieldEmbedding {
public:
    FieldEmbedding(const ExtField& small, const ExtField& big) : small_(small), big_(big) {
        if (small.p() != big.p() || big.r() % small.r() != 0)
            throw Error(Errc::InvalidArgument, "no embedding between these fields");
        const auto& m = small.modulus();
        if (small.r() == 1) {
            beta_ = big.zero();
        } else {
            bool found = false;
            for (std::int64_t code = 0; code < big.q() && !found; ++code) {
                ExtElem b = big.from_code(code);
                ExtElem acc = big.zero(), pw = big.one();
                for (std::size_t i = 0; i < m.size(); ++i) {
                    acc = acc + pw * big.from_code(m[i]);
                    pw = pw * b;
                }
                if (acc.is_zero()) {
                    beta_ = b;
                    found = true;
                }
            }
            if (!found) throw Error(Errc::InvalidArgument, "embedding root not found");
        }
    }
    ExtElem operator()(const ExtElem& x) const {
        if (small_.r() == 1) return big_.from_code(x.coeffs()[0]);
        ExtElem acc = big_.zero(), pw = big_.one();
        for (int i = 0; i < small_.r(); ++i) {
            acc = acc + pw * big_.from_code(x.coeffs()[i]);
            pw = pw * beta_;
        }
        return acc;
    }

private:
    ExtField small_, big_;
    ExtElem beta_;
};

// ---------------------------------------------------------------- Z[X] products

namespace zpoly {

inline std::size_t max_bits(const std::vector<BigInt>& a) {
    std::size_t b = 0;
    for (const auto& x : a)
        if (x != 0) b = std::max(b, mpz_sizeinbase(x.get_mpz_t(), 2));
    return b;
}

// limb-aligned Kronecker substitution
inline BigInt pack(const std::vector<BigInt>& a, std::size_t limbs_per) {
    std::vector<mp_limb_t> pos(a.size() * limbs_per, 0), neg(a.size() * limbs_per, 0);
    bool any_neg = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        int s = sgn(a[i]);
        if (s == 0) continue;
        auto& dst = s > 0 ? pos : neg;
        if (s < 0) any_neg = true;
        std::size_t n = mpz_size(a[i].get_mpz_t());
        for (std::size_t j = 0; j < n; ++j) dst[i * limbs_per + j] = mpz_getlimbn(a[i].get_mpz_t(), j);
    }
    BigInt P, N;
    mpz_import(P.get_mpz_t(), pos.size(), -1, sizeof(mp_limb_t), 0, 0, pos.data());
    if (any_neg) {
        mpz_import(N.get_mpz_t(), neg.size(), -1, sizeof(mp_limb_t), 0, 0, neg.data());
        P -= N;
    }
    return P;
}

inline std::vector<BigInt> unpack(BigInt v, std::size_t count, std::size_t limbs_per) {
    std::size_t total = count * limbs_per;
    if (sgn(v) < 0) {
        BigInt shift;
        mpz_setbit(shift.get_mpz_t(), total * GMP_NUMB_BITS);
        v += shift;
    }
    std::vector<mp_limb_t> limbs(total + 1, 0);
    std::size_t written = 0;
    mpz_export(limbs.data(), &written, -1, sizeof(mp_limb_t), 0, 0, v.get_mpz_t());
    std::vector<BigInt> out(count);
    BigInt half, full;
    mpz_setbit(full.get_mpz_t(), limbs_per * GMP_NUMB_BITS);
    mpz_setbit(half.get_mpz_t(), limbs_per * GMP_NUMB_BITS - 1);
    int carry = 0;
    for (std::size_t i = 0; i < count; ++i) {
        BigInt u;
        mpz_import(u.get_mpz_t(), limbs_per, -1, sizeof(mp_limb_t), 0, 0, limbs.data() + i * limbs_per);
        u += carry;
        if (u >= half) {
            u -= full;
            carry = 1;
        } else {
            carry = 0;
        }
        out[i] = std::move(u);
    }
    return out;
}

inline std::vector<BigInt> mul(const std::vector<BigInt>& a, const std::vector<BigInt>& b) {
    if (a.empty() || b.empty()) return {};
    std::size_t n = a.size() + b.size() - 1;
    std::size_t small = std::min(a.size(), b.size());
    if (small < 12) {
        std::vector<BigInt> c(n);
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a[i] == 0) continue;
            for (std::size_t j = 0; j < b.size(); ++j)
                mpz_addmul(c[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
        }
        return c;
    }
    std::size_t ba = max_bits(a), bb = max_bits(b);
    if (ba == 0 || bb == 0) return std::vector<BigInt>(n);
    std::size_t lg = 1;
    while ((std::size_t(1) << lg) < small) ++lg;
    std::size_t bits = ba + bb + lg + 2;
    std::size_t limbs_per = (bits + GMP_NUMB_BITS - 1) / GMP_NUMB_BITS;
    BigInt A = pack(a, limbs_per), B = pack(b, limbs_per);
    BigInt C = A * B;
    return unpack(std::move(C), n, limbs_per);
}

} // namespace zpoly

// ---------------------------------------------------------------- Q(zeta_m)

namespace detail {

// Phi_m with integer coefficients, low degree first
inline const std::vector<std::int64_t>& cyclotomic_poly(int m) {
    static std::mutex mu;
    static std::map<int, std::vector<std::int64_t>> cache;
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(m); it != cache.end()) return it->second;
    // Phi_m = prod_{d | m} (X^d - 1)^{mu(m/d)}; compute by division of X^m - 1
    std::vector<std::int64_t> num(m + 1, 0);
    num[0] = -1;
    num[m] = 1;
    for (int d = 1; d < m; ++d) {
        if (m % d) continue;
        // divide by Phi_d (monic, computed recursively without the lock held twice)
        std::vector<std::int64_t> den;
        if (auto it = cache.find(d); it != cache.end()) {
            den = it->second;
        } else {
            throw Error(Errc::InvalidArgument, "cyclotomic cache order");
        }
        std::vector<std::int64_t> quo(num.size() - den.size() + 1, 0);
        for (int i = static_cast<int>(num.size()) - 1; i >= static_cast<int>(den.size()) - 1; --i) {
            std::int64_t c = num[i];
            quo[i - den.size() + 1] = c;
            for (std::size_t j = 0; j < den.size(); ++j) num[i - den.size() + 1 + j] -= c * den[j];
        }
        num = quo;
    }
    return cache.emplace(m, num).first->second;
}

inline const std::vector<std::int64_t>& phi_poly(int m) {
    thread_local std::map<int, const std::vector<std::int64_t>*> seen;
    if (auto it = seen.find(m); it != seen.end()) return *it->second;
    // fill divisors first so the division loop finds them
    for (int d = 1; d < m; ++d)
        if (m % d == 0) cyclotomic_poly(d);
    const auto& r = cyclotomic_poly(m);
    seen.emplace(m, &r);
    return r;
}

} // namespace detail

class CycElem {
public:
    CycElem() : CycElem(1) {}
    explicit CycElem(int m) : m_(m), phi_(static_cast<int>(euler_phi(m))), num_(phi_), den_(1) {}

    // reduce an arbitrary exponent vector (coefficient of zeta^i at index i)
    static CycElem from_full(int m, std::vector<BigInt> full, BigInt den = 1) {
        CycElem x(m);
        x.assign_reduced(std::move(full));
        x.den_ = std::move(den);
        x.normalize();
        return x;
    }
    static CycElem from_int(int m, const BigInt& v) {
        CycElem x(m);
        x.num_[0] = v;
        return x;
    }
    static CycElem from_rational(int m, const BigRat& v) {
        CycElem x(m);
        x.num_[0] = v.get_num();
        x.den_ = v.get_den();
        return x;
    }
    static CycElem zeta_pow(int m, std::int64_t j) {
        std::vector<BigInt> full(m);
        full[mod(j, m)] = 1;
        return from_full(m, std::move(full));
    }
    // coefficients already in the reduced basis
    static CycElem from_basis(int m, std::vector<BigInt> num, BigInt den = 1) {
        CycElem x(m);
        if (static_cast<int>(num.size()) != x.phi_) throw Error(Errc::InvalidArgument, "basis length mismatch");
        x.num_ = std::move(num);
        x.den_ = std::move(den);
        x.normalize();
        return x;
    }

    int m() const { return m_; }
    int phi() const { return phi_; }
    const std::vector<BigInt>& num() const { return num_; }
    const BigInt& den() const { return den_; }
    BigRat coeff(int i) const { return BigRat(num_[i], den_); }

    bool is_integral() const { return den_ == 1; }
    bool is_zero() const {
        return std::all_of(num_.begin(), num_.end(), [](const BigInt& v) { return v == 0; });
    }
    bool is_rational() const {
        for (int i = 1; i < phi_; ++i)
            if (num_[i] != 0) return false;
        return true;
    }

    CycElem operator+(const CycElem& o) const { return combine(o, 1); }
    CycElem operator-(const CycElem& o) const { return combine(o, -1); }
    CycElem operator-() const {
        CycElem r = *this;
        for (auto& v : r.num_) v = -v;
        return r;
    }
    CycElem& operator+=(const CycElem& o) { return *this = *this + o; }
    CycElem& operator-=(const CycElem& o) { return *this = *this - o; }
    CycElem& operator*=(const CycElem& o) { return *this = *this * o; }

    CycElem operator*(const CycElem& o) const {
        check_same(o);
        std::vector<BigInt> prod = zpoly::mul(num_, o.num_);
        CycElem r(m_);
        r.assign_reduced(std::move(prod));
        r.den_ = den_ * o.den_;
        if (r.den_ != 1) r.normalize();
        return r;
    }
    CycElem scaled(const BigInt& c) const {
        CycElem r = *this;
        for (auto& v : r.num_) v *= c;
        if (r.den_ != 1) r.normalize();
        return r;
    }
    CycElem scaled(const BigRat& c) const {
        CycElem r = *this;
        for (auto& v : r.num_) v *= c.get_num();
        r.den_ *= c.get_den();
        r.normalize();
        return r;
    }

    bool operator==(const CycElem& o) const { return m_ == o.m_ && den_ == o.den_ && num_ == o.num_; }
    bool operator!=(const CycElem& o) const { return !(*this == o); }

    // zeta -> zeta^t
    CycElem galois(std::int64_t t) const {
        if (gcd64(t, m_) != 1) throw Error(Errc::NotCoprime, "t not coprime to m");
        std::vector<BigInt> full(m_);
        for (int i = 0; i < phi_; ++i)
            if (num_[i] != 0) full[mod(static_cast<std::int64_t>(i) * t, m_)] = num_[i];
        return from_full(m_, std::move(full), den_);
    }
    CycElem conj() const { return galois(m_ - 1); }

private:
    void check_same(const CycElem& o) const {
        if (m_ != o.m_) throw Error(Errc::InvalidArgument, "conductor mismatch");
    }

    CycElem combine(const CycElem& o, int sign) const {
        check_same(o);
        CycElem r(m_);
        if (den_ == o.den_) {
            for (int i = 0; i < phi_; ++i) {
                if (sign > 0)
                    r.num_[i] = num_[i] + o.num_[i];
                else
                    r.num_[i] = num_[i] - o.num_[i];
            }
            r.den_ = den_;
        } else {
            for (int i = 0; i < phi_; ++i) {
                if (sign > 0)
                    r.num_[i] = num_[i] * o.den_ + o.num_[i] * den_;
                else
                    r.num_[i] = num_[i] * o.den_ - o.num_[i] * den_;
            }
            r.den_ = den_ * o.den_;
        }
        if (r.den_ != 1) r.normalize();
        return r;
    }

    void assign_reduced(std::vector<BigInt> full) {
        if (m_ == 1) {
            BigInt s = 0;
            for (auto& v : full) s += v;
            num_[0] = s;
            return;
        }
        // fold mod X^m - 1
        if (static_cast<int>(full.size()) > m_) {
            for (std::size_t i = m_; i < full.size(); ++i) full[i % m_] += full[i];
            full.resize(m_);
        }
        const auto& phi = detail::phi_poly(m_);
        int deg = phi_;
        for (int i = static_cast<int>(full.size()) - 1; i >= deg; --i) {
            if (full[i] == 0) continue;
            BigInt c = full[i];
            for (int j = 0; j <= deg; ++j)
                if (phi[j] != 0) full[i - deg + j] -= c * phi[j];
        }
        full.resize(deg);
        num_ = std::move(full);
    }

    void normalize() {
        if (den_ < 0) {
            den_ = -den_;
            for (auto& v : num_) v = -v;
        }
        if (den_ == 1) return;
        BigInt g = den_;
        for (const auto& v : num_) {
            if (g == 1) break;
            if (v != 0) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
        }
        if (g != 1) {
            for (auto& v : num_) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
            mpz_divexact(den_.get_mpz_t(), den_.get_mpz_t(), g.get_mpz_t());
        }
    }

    int m_;
    int phi_;
    std::vector<BigInt> num_;
    BigInt den_;
};

inline CycElem cyc_conj(const CycElem& x, std::int64_t t) { return x.galois(t); }

inline BigRat cyc_to_rational(const CycElem& x) {
    if (!x.is_rational()) throw Error(Errc::NotRational, "non-constant coefficient present");
    BigRat r(x.num()[0], x.den());
    r.canonicalize();
    return r;
}

inline CycElem cyc_pow(CycElem b, unsigned e) {
    CycElem r = CycElem::from_int(b.m(), 1);
    while (e) {
        if (e & 1) r *= b;
        e >>= 1;
        if (e) b *= b;
    }
    return r;
}

} // namespace kloost
