#pragma once

// Moments via Kl tables reduced modulo word-size primes l = 1 mod p,
// recombined by CRT. Used when F_{p^2} tables are too large for the
// exact counting backend.

#include "weylchar.hpp"

namespace kloost {

namespace residue {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

struct Zl {
    u64 v = 0;
    u64 l = 1;
    Zl operator+(const Zl& o) const {
        u64 s = v + o.v;
        return {s >= l ? s - l : s, l};
    }
    Zl operator-(const Zl& o) const { return {v >= o.v ? v - o.v : v + l - o.v, l}; }
    Zl operator*(const Zl& o) const { return {static_cast<u64>(static_cast<u128>(v) * o.v % l), l}; }
};

inline u64 mulmod(u64 a, u64 b, u64 l) { return static_cast<u64>(static_cast<u128>(a) * b % l); }
inline u64 powmod_u(u64 b, u64 e, u64 l) {
    u64 r = 1 % l;
    while (e) {
        if (e & 1) r = mulmod(r, b, l);
        b = mulmod(b, b, l);
        e >>= 1;
    }
    return r;
}

inline bool probable_prime(u64 n) {
    BigInt z = static_cast<unsigned long>(n);
    return mpz_probab_prime_p(z.get_mpz_t(), 30) > 0;
}

// primes l < 2^62 with l = 1 mod step, largest first
inline std::vector<u64> primes_1_mod(u64 step, std::size_t count) {
    std::vector<u64> out;
    u64 k = ((u64(1) << 62) - 2) / step;
    for (; k > 0 && out.size() < count; --k) {
        u64 l = k * step + 1;
        if (probable_prime(l)) out.push_back(l);
    }
    return out;
}

// an element of exact multiplicative order `ord` (ord prime or a power of two)
inline u64 root_of_order(u64 ord, u64 l) {
    for (u64 x = 2;; ++x) {
        u64 w = powmod_u(x, (l - 1) / ord, l);
        if (w == 1) continue;
        if (ord % 2 == 0) {
            if (powmod_u(w, ord / 2, l) == 1) continue;
        }
        return w;
    }
}

inline void ntt(std::vector<u64>& a, bool invert, u64 l, u64 root, u64 root_order) {
    std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        u64 w = powmod_u(root, root_order / len, l);
        if (invert) w = powmod_u(w, l - 2, l);
        std::vector<u64> tw(len / 2);
        tw[0] = 1;
        for (std::size_t k = 1; k < len / 2; ++k) tw[k] = mulmod(tw[k - 1], w, l);
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                u64 u = a[i + k], v = mulmod(a[i + k + len / 2], tw[k], l);
                a[i + k] = u + v >= l ? u + v - l : u + v;
                a[i + k + len / 2] = u >= v ? u - v : u + l - v;
            }
        }
    }
    if (invert) {
        u64 inv_n = powmod_u(n % l, l - 2, l);
        for (auto& x : a) x = mulmod(x, inv_n, l);
    }
}

struct Prime {
    u64 l;
    u64 w;          // primitive p-th root, image of zeta_p
    u64 ntt_root;   // primitive root of order ntt_len
    u64 ntt_len;
};

// Kl_{n+1}(g^i; q) mod l for all i
inline std::vector<u64> kl_residues(int nplus1, const FieldIndex& fi, std::int64_t p, const Prime& P,
                                    std::int64_t char_mult = 1) {
    std::size_t N = static_cast<std::size_t>(fi.q() - 1);
    u64 l = P.l;
    std::vector<u64> wpow(p);
    wpow[0] = 1;
    for (std::int64_t i = 1; i < p; ++i) wpow[i] = mulmod(wpow[i - 1], P.w, l);
    std::vector<u64> psi(N);
    for (std::size_t j = 0; j < N; ++j) psi[j] = wpow[mod(char_mult * fi.index_trace[j], p)];
    std::vector<u64> cur = psi;
    if (N * N <= (std::size_t(1) << 22)) {
        for (int level = 1; level < nplus1; ++level) {
            std::vector<u64> nxt(N, 0);
            for (std::size_t i = 0; i < N; ++i) {
                u128 acc = 0;
                for (std::size_t j = 0; j < N; ++j) {
                    std::size_t src = i >= j ? i - j : i + N - j;
                    acc += static_cast<u128>(psi[j]) * cur[src];
                    if ((j & 7) == 7) acc %= l;
                }
                nxt[i] = static_cast<u64>(acc % l);
            }
            cur.swap(nxt);
        }
        return cur;
    }
    std::size_t L = 1;
    while (L < 2 * N) L <<= 1;
    if (L > P.ntt_len) throw Error(Errc::InvalidArgument, "NTT length exceeds prime support");
    std::vector<u64> fpsi(L, 0);
    std::copy(psi.begin(), psi.end(), fpsi.begin());
    ntt(fpsi, false, l, P.ntt_root, P.ntt_len);
    for (int level = 1; level < nplus1; ++level) {
        std::vector<u64> f(L, 0);
        std::copy(cur.begin(), cur.end(), f.begin());
        ntt(f, false, l, P.ntt_root, P.ntt_len);
        for (std::size_t i = 0; i < L; ++i) f[i] = mulmod(f[i], fpsi[i], l);
        ntt(f, true, l, P.ntt_root, P.ntt_len);
        for (std::size_t i = 0; i < N; ++i) {
            u64 s = f[i] + f[i + N];
            cur[i] = s >= l ? s - l : s;
        }
    }
    return cur;
}

// moment over F_p modulo one prime l
inline u64 moment_mod(int nplus1, const Partition& mu, std::int64_t p, const Prime& P, std::int64_t char_mult = 1) {
    int n = nplus1 - 1;
    int half = nplus1 / 2;
    u64 l = P.l;
    auto fi1 = FieldIndex::build(p, 1);
    auto k1 = kl_residues(nplus1, *fi1, p, P, char_mult);
    std::vector<u64> k2;
    std::shared_ptr<const FieldIndex> fi2;
    if (half >= 2) {
        fi2 = FieldIndex::build(p, 2);
        k2 = kl_residues(nplus1, *fi2, p, P, char_mult);
    }
    Zl zero{0, l}, one{1, l};
    auto sgn = [&](u64 v) { return n % 2 ? Zl{v ? l - v : 0, l} : Zl{v, l}; };
    // elementary values at a, before duality completion
    auto low_e = [&](std::int64_t a) {
        std::vector<Zl> e(half + 1, zero);
        e[0] = one;
        Zl P1 = sgn(k1[fi1->code_index[a]]);
        e[1] = P1;
        if (half >= 2) {
            Zl P2 = sgn(k2[fi2->code_index[a]]);
            Zl inv2{(l + 1) / 2, l};
            e[2] = (P1 * P1 - P2) * inv2;
        }
        return e;
    };
    std::int64_t sign_flip = (nplus1 % 2 == 0) ? 1 : -1; // conj Kl(a) = Kl((-1)^{n+1} a)
    Zl total = zero;
    for (std::int64_t a = 1; a < p; ++a) {
        auto e = low_e(a);
        auto ec = low_e(mod(sign_flip * a, p));
        std::vector<Zl> full(nplus1 + 1, zero);
        for (int j = 0; j <= half; ++j) full[j] = e[j];
        for (int j = half + 1; j <= n; ++j) {
            int i = nplus1 - j;
            full[j] = ec[i] * Zl{powmod_u(static_cast<u64>(p), n * (n + 1) / 2 - n * i, l), l};
        }
        full[nplus1] = Zl{powmod_u(static_cast<u64>(p), n * (n + 1) / 2, l), l};
        total = total + schur_h<Zl>(full, mu, zero, one);
    }
    return total.v;
}

inline std::vector<Prime> choose_primes(std::int64_t p, std::size_t count, u64 ntt_len) {
    u64 step = static_cast<u64>(p) * ntt_len;
    std::vector<Prime> out;
    for (u64 l : primes_1_mod(step, count)) {
        Prime P{l, root_of_order(static_cast<u64>(p), l), root_of_order(ntt_len, l), ntt_len};
        out.push_back(P);
    }
    return out;
}

} // namespace residue

// |m| <= (p-1) dim(V_mu) p^{n|mu|/2}; CRT over enough primes plus one check prime
inline BigInt moment_residue(int nplus1, const HighestWeight& hw_in, std::int64_t p, std::int64_t char_mult = 1) {
    require_prime(p);
    HighestWeight hw = hw_in.padded(nplus1);
    Partition mu = hw.mu();
    if (nplus1 / 2 > 2) throw Error(Errc::MissingTower, "n+1 > 5 is outside the supported towers");
    int n = nplus1 - 1;
    int deg = partition_size(mu);
    BigInt bound = BigInt(static_cast<long>(p - 1)) * schur_dimension(nplus1, mu) * bigpow(p, (n * deg + 1) / 2);
    BigInt need = 2 * bound + 1;
    std::uint64_t ntt_len = 1;
    std::int64_t q2 = p * p;
    while (ntt_len < static_cast<std::uint64_t>(2 * q2)) ntt_len <<= 1;
    std::size_t k = 1;
    {
        BigInt prod = 1;
        BigInt lmin = BigInt(1) << 61;
        while (prod <= need) {
            prod *= lmin;
            ++k;
        }
    }
    auto primes = residue::choose_primes(p, k + 1, ntt_len);
    BigInt value = 0, modulus = 1;
    for (std::size_t i = 0; i < primes.size(); ++i) {
        std::uint64_t r = residue::moment_mod(nplus1, mu, p, primes[i], char_mult);
        BigInt L = static_cast<unsigned long>(primes[i].l);
        if (i + 1 == primes.size()) {
            BigInt check = value % L;
            if (check < 0) check += L;
            if (check != BigInt(static_cast<unsigned long>(r)))
                throw Error(Errc::NonIntegral, "residue engine check prime disagrees");
            break;
        }
        // value' = value + modulus * t with value' = r mod L
        BigInt diff = (BigInt(static_cast<unsigned long>(r)) - value) % L;
        if (diff < 0) diff += L;
        BigInt inv;
        BigInt mm = modulus % L;
        mpz_invert(inv.get_mpz_t(), mm.get_mpz_t(), L.get_mpz_t());
        BigInt t = diff * inv % L;
        value += modulus * t;
        modulus *= L;
        // symmetric representative
        if (value > modulus / 2) value -= modulus;
        if (value < -(modulus / 2)) value += modulus;
    }
    if (modulus <= need) throw Error(Errc::InvalidArgument, "CRT modulus too small");
    return value;
}

// exact over F_{p^r}, or the residue engine for r = 1 when tables get large
inline MomentReport moment(int nplus1, const HighestWeight& lambda, std::int64_t p, const MomentOptions& opt = {},
                           int r = 1) {
    require_prime(p);
    check_desk_scale(lambda, opt.force);
    HighestWeight hw = lambda.padded(nplus1);
    MomentReport rep;
    rep.nplus1 = nplus1;
    rep.lambda = hw.lambda;
    rep.p = p;
    rep.r = r;
    Engine e = opt.engine;
    if (e == Engine::auto_select) {
        std::int64_t qmax = ipow(p, r * (nplus1 / 2 >= 2 ? 2 : 1));
        double cost = static_cast<double>(qmax) * static_cast<double>(qmax) * static_cast<double>(p) * (nplus1 - 1);
        e = (r == 1 && cost > 3e8) ? Engine::residue : Engine::exact;
    }
    if (e == Engine::residue) {
        if (r != 1) throw Error(Errc::InvalidArgument, "residue engine works over F_p only");
        rep.moment = moment_residue(nplus1, hw, p, opt.char_mult);
    } else {
        rep.moment = moment_exact(nplus1, hw, p, r, opt);
    }
    return rep;
}

// m(p^r) for r = 1..R
inline std::vector<BigInt> moment_tower(int nplus1, const HighestWeight& lambda, std::int64_t p, int R,
                                        const MomentOptions& opt = {}) {
    if (!opt.force && R * (nplus1 / 2) > 4)
        throw Error(Errc::DeskScaleExceeded, "R * floor((n+1)/2) > 4");
    std::vector<BigInt> out;
    MomentOptions o = opt;
    o.engine = Engine::exact;
    for (int r = 1; r <= R; ++r) out.push_back(moment(nplus1, lambda, p, o, r).moment);
    return out;
}

} // namespace kloost
