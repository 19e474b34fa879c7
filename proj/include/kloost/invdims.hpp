#pragma once

// Local invariants of Sym^k Kl_{n+1}: invariants at 0 (Fu-Wan series),
// multi-index counts at infinity, Swan conductors, dimensions of the
// middle cohomology and Hodge numbers.

#include <functional>
#include <map>
#include <optional>

#include "exactalg.hpp"
#include "monodromy.hpp"
#include "ratfunc.hpp"
#include "residue.hpp"
#include "weylchar.hpp"

namespace kloost {

// prod_{n+1}^{n+k} (1 - x^i) / prod_2^k (1 - x^i)
inline RatFunc mk_series(int nplus1, int k) {
    if (k < 1 || nplus1 < 2) throw Error(Errc::InvalidArgument, "need k >= 1 and n+1 >= 2");
    QPoly num{1}, den{1};
    for (int i = nplus1; i <= nplus1 - 1 + k; ++i) num = num * QPoly::one_minus_x_pow(i);
    for (int i = 2; i <= k; ++i) den = den * QPoly::one_minus_x_pow(i);
    return RatFunc(num, den);
}

// m_k(u) for u = 0..floor(nk/2)
inline std::vector<BigInt> mk_coeffs(int nplus1, int k) {
    int top = (nplus1 - 1) * k / 2;
    auto s = mk_series(nplus1, k).series(top + 1);
    std::vector<BigInt> out;
    for (const auto& v : s) {
        if (v.get_den() != 1) throw Error(Errc::NonIntegral, "Fu-Wan coefficient not integral");
        out.push_back(v.get_num());
    }
    return out;
}

inline BigInt mk_total(int nplus1, int k) {
    BigInt s = 0;
    for (const auto& v : mk_coeffs(nplus1, k)) s += v;
    return s;
}

// sum_u m_k(u) p^u
inline BigInt inv0_trace(int nplus1, int k, std::int64_t p) {
    auto m = mk_coeffs(nplus1, k);
    BigInt s = 0;
    for (std::size_t u = 0; u < m.size(); ++u) s += m[u] * bigpow(p, static_cast<unsigned>(u));
    return s;
}

// characteristic for the multi-index conditions; p = 0 means generic
struct Characteristic {
    std::int64_t p = 0;
    int root_exponent = 1; // use zeta^t in place of zeta
    static Characteristic generic() { return {}; }
    static Characteristic prime(std::int64_t p, int t = 1) { return {p, t}; }
    bool is_generic() const { return p == 0; }
};

using MultiIndex = std::vector<int>;

struct MultiIndexSet {
    int nplus1 = 2;
    int k = 0;
    Characteristic ch;
    std::vector<MultiIndex> indices;             // C_I = 0
    std::vector<std::vector<MultiIndex>> orbits; // sigma-orbits of indices

    std::int64_t d() const { return static_cast<std::int64_t>(indices.size()); }
    std::int64_t a() const { return static_cast<std::int64_t>(orbits.size()); }
};

inline MultiIndex rotate(const MultiIndex& I) {
    // (sigma I)_{i+1} = I_i, (sigma I)_0 = I_n
    MultiIndex r(I.size());
    for (std::size_t i = 0; i < I.size(); ++i) r[(i + 1) % I.size()] = I[i];
    return r;
}

inline void for_each_composition(int parts, int k, const std::function<void(const MultiIndex&)>& f) {
    MultiIndex I(parts, 0);
    std::function<void(int, int)> rec = [&](int pos, int left) {
        if (pos == parts - 1) {
            I[pos] = left;
            f(I);
            return;
        }
        for (int v = left; v >= 0; --v) {
            I[pos] = v;
            rec(pos + 1, left - v);
        }
    };
    rec(0, k);
}

namespace detail {

// zeta_{n+1} in F_{p^m}: g^{(p^m - 1)/(n+1)} for the smallest generator g, raised to t
inline std::vector<std::vector<std::int64_t>> root_powers(int nplus1, std::int64_t p, int t) {
    if (nplus1 % p == 0) throw Error(Errc::CharDividesOrder, "p divides n+1");
    if (gcd64(t, nplus1) != 1) throw Error(Errc::NotCoprime, "root exponent not coprime to n+1");
    int m = 1;
    std::int64_t pm = p;
    while ((pm - 1) % nplus1 != 0) {
        ++m;
        pm *= p;
    }
    ExtField F = ext_field(p, m);
    ExtElem g = F.from_code(F.generator_code());
    ExtElem z = g.pow((pm - 1) / nplus1).pow(t);
    std::vector<std::vector<std::int64_t>> out;
    ExtElem x = F.one();
    for (int i = 0; i < nplus1; ++i) {
        std::vector<std::int64_t> c(m);
        for (int j = 0; j < m; ++j) c[j] = ExtElem(x).code() / ipow(p, j) % p;
        out.push_back(std::move(c));
        x = x * z;
    }
    return out;
}

} // namespace detail

inline MultiIndexSet multi_index_set(int nplus1, int k, Characteristic ch = Characteristic::generic()) {
    if (nplus1 < 2 || k < 0) throw Error(Errc::InvalidArgument, "need n+1 >= 2 and k >= 0");
    MultiIndexSet S{nplus1, k, ch, {}, {}};
    std::function<bool(const MultiIndex&)> vanishes;
    std::vector<std::vector<std::int64_t>> pw;
    if (ch.is_generic()) {
        vanishes = [nplus1](const MultiIndex& I) {
            std::vector<BigInt> full(I.begin(), I.end());
            return CycElem::from_full(nplus1, std::move(full)).is_zero();
        };
    } else {
        require_prime(ch.p);
        pw = detail::root_powers(nplus1, ch.p, ch.root_exponent);
        vanishes = [&pw, p = ch.p](const MultiIndex& I) {
            std::size_t m = pw[0].size();
            for (std::size_t j = 0; j < m; ++j) {
                std::int64_t acc = 0;
                for (std::size_t i = 0; i < I.size(); ++i) acc = (acc + I[i] % p * pw[i][j]) % p;
                if (acc) return false;
            }
            return true;
        };
    }
    for_each_composition(nplus1, k, [&](const MultiIndex& I) {
        if (vanishes(I)) S.indices.push_back(I);
    });
    std::map<MultiIndex, bool> done;
    for (const auto& I : S.indices) {
        if (done.count(I)) continue;
        std::vector<MultiIndex> orb;
        MultiIndex J = I;
        do {
            done[J] = true;
            orb.push_back(J);
            J = rotate(J);
        } while (J != I);
        S.orbits.push_back(std::move(orb));
    }
    return S;
}

// sign acquired when the monodromy generator moves v^I to v^{sigma I}
enum class SignRule {
    monodromy, // g v_i = v_{i+1}, g v_n = (-1)^n v_0, so the sign is (-1)^{n I_n}
    m_index,   // (-1)^{m_I} with m_I = sum i I_i
};

namespace detail {

inline std::int64_t rank_q(std::vector<std::vector<BigRat>> M) {
    std::int64_t rank = 0;
    std::size_t cols = M.empty() ? 0 : M[0].size();
    for (std::size_t c = 0; c < cols && rank < static_cast<std::int64_t>(M.size()); ++c) {
        std::size_t piv = rank;
        while (piv < M.size() && M[piv][c] == 0) ++piv;
        if (piv == M.size()) continue;
        std::swap(M[piv], M[rank]);
        for (std::size_t r = 0; r < M.size(); ++r) {
            if (r == static_cast<std::size_t>(rank) || M[r][c] == 0) continue;
            BigRat f = M[r][c] / M[rank][c];
            for (std::size_t j = c; j < cols; ++j) M[r][j] -= f * M[rank][j];
        }
        ++rank;
    }
    return rank;
}

} // namespace detail

// rank over Q of { sum_j g^j v^I : I in A_k^0 }
inline std::int64_t b_count(int k, int nplus1, Characteristic ch = Characteristic::generic(),
                            SignRule rule = SignRule::monodromy) {
    auto S = multi_index_set(nplus1, k, ch);
    if (S.indices.empty()) return 0;
    std::map<MultiIndex, std::size_t> col;
    for (const auto& I : S.indices) col.emplace(I, col.size());
    int n = nplus1 - 1;
    std::vector<std::vector<BigRat>> M;
    for (const auto& I : S.indices) {
        std::vector<BigRat> row(col.size());
        MultiIndex J = I;
        int sign = 1;
        for (int j = 0; j <= n; ++j) {
            if (rule == SignRule::monodromy) {
                row[col.at(J)] += sign;
                if ((n * J[n]) & 1) sign = -sign;
            } else {
                std::int64_t mI = 0;
                for (int i = 0; i <= n; ++i) mI += static_cast<std::int64_t>(i) * J[i];
                row[col.at(J)] += (mI & 1) ? -1 : 1;
            }
            J = rotate(J);
        }
        M.push_back(std::move(row));
    }
    return detail::rank_q(std::move(M));
}

// (binom(n+k, n) - d) / (n+1)
inline BigRat swan_from_count(int nplus1, int k, std::int64_t d) {
    BigRat s(binomial(nplus1 - 1 + k, nplus1 - 1) - d, nplus1);
    s.canonicalize();
    if (s.get_den() != 1) throw Error(Errc::NonIntegerSwan, "Swan conductor is not an integer");
    return s;
}

inline BigRat swan_infinity(int nplus1, int k, std::int64_t p) {
    require_prime(p);
    if (nplus1 % p == 0) throw Error(Errc::CharDividesOrder, "p divides n+1");
    return swan_from_count(nplus1, k, multi_index_set(nplus1, k, Characteristic::prime(p)).d());
}

struct DimBreakdown {
    BigRat swan;
    BigInt inv0;
    std::int64_t inv_inf = 0;
    int delta = 0;
    BigInt dim;
};

namespace detail {

inline DimBreakdown assemble(int nplus1, int k, const Characteristic& ch, SignRule rule) {
    int n = nplus1 - 1;
    auto S = multi_index_set(nplus1, k, ch);
    DimBreakdown out;
    out.swan = swan_from_count(nplus1, k, S.d());
    out.inv0 = mk_total(nplus1, k);
    if (n % 2 == 0)
        out.inv_inf = S.a();
    else if ((static_cast<std::int64_t>(n) * k) % 2 == 1)
        out.inv_inf = 0;
    else
        out.inv_inf = b_count(k, nplus1, ch, rule);
    // global invariants; they also show up as H^2_c, so h^1_c = Swan + delta and delta enters twice
    out.delta = (!ch.is_generic() && ch.p == 2 && k % 2 == 0) ? 1 : 0;
    out.dim = out.swan.get_num() - out.inv0 - out.inv_inf + 2 * out.delta;
    if (out.dim < 0) throw Error(Errc::NegativeDimension, "negative middle cohomology dimension");
    return out;
}

} // namespace detail

// dimension of the middle cohomology at p; p = 3 with n+1 = 3 goes through the G108 filtration
inline DimBreakdown dim_mid_breakdown(int nplus1, int k, std::int64_t p, SignRule rule = SignRule::monodromy) {
    require_prime(p);
    if (nplus1 % p == 0) {
        if (nplus1 != 3 || p != 3) throw Error(Errc::CharDividesOrder, "p divides n+1 outside the p = 3 path");
        DimBreakdown out;
        out.swan = p3_swan(k);
        if (out.swan.get_den() != 1) throw Error(Errc::NonIntegerSwan, "p = 3 Swan conductor is not an integer");
        out.inv0 = mk_total(3, k);
        out.inv_inf = p3_inv_dim(k).get_si();
        out.dim = out.swan.get_num() - out.inv0 - out.inv_inf;
        if (out.dim < 0) throw Error(Errc::NegativeDimension, "negative middle cohomology dimension");
        return out;
    }
    return detail::assemble(nplus1, k, Characteristic::prime(p), rule);
}

inline BigInt dim_mid(int nplus1, int k, std::int64_t p, SignRule rule = SignRule::monodromy) {
    return dim_mid_breakdown(nplus1, k, p, rule).dim;
}

inline BigInt dim_motive(int nplus1, int k, SignRule rule = SignRule::monodromy) {
    return detail::assemble(nplus1, k, Characteristic::generic(), rule).dim;
}

// p is good when p does not divide n+1 and the counts agree with the generic ones
inline bool is_good_prime(int nplus1, int k, std::int64_t p) {
    if (!is_prime(p) || nplus1 % p == 0) return false;
    return multi_index_set(nplus1, k, Characteristic::prime(p)).d() == multi_index_set(nplus1, k).d();
}

using HodgeMap = std::map<int, BigInt>;

namespace detail {

// Gaussian binomial [N choose K]_t
inline QPoly gaussian_binomial(int N, int K) {
    QPoly num{1}, den{1};
    for (int i = 0; i < K; ++i) {
        num = num * QPoly::one_minus_x_pow(N - i);
        den = den * QPoly::one_minus_x_pow(i + 1);
    }
    QPoly q, r;
    num.divmod(den, q, r);
    return q;
}

inline HodgeMap reflect(const std::map<int, BigInt>& half, int w) {
    HodgeMap out;
    for (const auto& [p, h] : half) {
        if (h == 0) continue;
        if (h < 0) throw Error(Errc::NegativeDimension, "negative Hodge number");
        out[p] = h;
        out[w - p] = h;
    }
    return out;
}

} // namespace detail

// h^{p, w-p} with w = n|lambda| + 1
inline HodgeMap hodge_numbers(int nplus1, const HighestWeight& hw_in) {
    HighestWeight hw = hw_in.padded(nplus1);
    int n = nplus1 - 1;
    int k = hw.size();
    bool sym = true;
    for (std::size_t i = 1; i < hw.lambda.size(); ++i)
        if (hw.lambda[i] != 0) sym = false;

    if (!sym) {
        if (nplus1 == 3 && hw.lambda == std::vector<int>{2, 1}) return {{4, 1}, {5, 1}};
        if (nplus1 == 3 && hw.lambda == std::vector<int>{2, 2}) return {{5, 1}, {8, 1}};
        throw Error(Errc::OutOfScopePair, "no Hodge data for this highest weight");
    }
    if (nplus1 == 4 && k == 4) return {{4, 1}, {9, 1}};
    int w = n * k + 1;
    if (gcd64(k, nplus1) == 1) {
        // [t^p] (1-t)/(1-t^{n+1}) [n+k choose k]_t - m_k(p)
        QPoly g = detail::gaussian_binomial(n + k, k);
        RatFunc f(QPoly::one_minus_x_pow(1) * g, QPoly::one_minus_x_pow(nplus1));
        auto s = f.series(w / 2 + 1);
        auto m = mk_series(nplus1, k).series(w / 2 + 1);
        std::map<int, BigInt> half;
        for (int p = 0; p <= w / 2; ++p) {
            BigRat v = s[p] - m[p];
            if (v.get_den() != 1) throw Error(Errc::NonIntegral, "Hodge number not integral");
            half[p] = v.get_num();
        }
        return detail::reflect(half, w);
    }
    if (n == 2 && k % 3 == 0) {
        std::map<int, BigInt> half;
        for (int p = 0; p <= k; ++p) {
            int r = p % 6;
            int h = (r == 3 || r == 5) ? p / 6 + 1 : p / 6 - (p == k ? 1 : 0);
            half[p] = h;
        }
        return detail::reflect(half, w);
    }
    throw Error(Errc::OutOfScopePair, "(n+1, k) outside the supported Hodge cases");
}

inline BigInt hodge_total(const HodgeMap& h) {
    BigInt s = 0;
    for (const auto& [p, v] : h) s += v;
    return s;
}

// Z(T) = exp(sum_r m(p^r) T^r / r), coefficients of T^0..T^R
inline std::vector<BigRat> zeta_series(int nplus1, const HighestWeight& lambda, std::int64_t p, int R,
                                       const MomentOptions& opt = {}) {
    if (R < 0) throw Error(Errc::InvalidArgument, "R must be non-negative");
    std::vector<BigInt> m = R ? moment_tower(nplus1, lambda, p, R, opt) : std::vector<BigInt>{};
    return exp_log_series(m, R);
}

} // namespace kloost
