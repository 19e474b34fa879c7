#pragma once

// Jacobi-Trudi evaluation of Schur polynomials from elementary symmetric values.
// Works over any commutative ring type with +, -, *.

#include <vector>

#include "common.hpp"

namespace kloost {

using Partition = std::vector<int>;

inline Partition conjugate(const Partition& mu) {
    Partition out;
    if (mu.empty()) return out;
    for (int j = 1; j <= mu.front(); ++j) {
        int c = 0;
        for (int part : mu)
            if (part >= j) ++c;
        out.push_back(c);
    }
    return out;
}

inline Partition trim_partition(Partition mu) {
    while (!mu.empty() && mu.back() == 0) mu.pop_back();
    return mu;
}

inline int partition_size(const Partition& mu) {
    int s = 0;
    for (int v : mu) s += v;
    return s;
}

// division-free determinant: expansion along rows, memoized over column subsets
template <class T>
T ring_det(const std::vector<std::vector<T>>& M, const T& zero, const T& one,
           const std::vector<std::vector<bool>>& is_zero) {
    const int n = static_cast<int>(M.size());
    if (n == 0) return one;
    std::vector<T> dp(std::size_t(1) << n, zero);
    std::vector<bool> set(std::size_t(1) << n, false);
    dp[0] = one;
    set[0] = true;
    for (std::size_t S = 0; S < dp.size(); ++S) {
        if (!set[S]) continue;
        int row = __builtin_popcountll(S);
        if (row == n) continue;
        // sign = (-1)^{number of used columns to the right of c}
        for (int c = 0; c < n; ++c) {
            if (S & (std::size_t(1) << c)) continue;
            if (is_zero[row][c]) continue;
            int right = __builtin_popcountll(S >> (c + 1));
            T term = dp[S] * M[row][c];
            std::size_t S2 = S | (std::size_t(1) << c);
            if (!set[S2]) {
                dp[S2] = (right & 1) ? zero - term : term;
                set[S2] = true;
            } else if (right & 1) {
                dp[S2] = dp[S2] - term;
            } else {
                dp[S2] = dp[S2] + term;
            }
        }
    }
    return dp.back();
}

// h_0..h_max from e_0..e_{n+1} (e[0] = 1)
template <class T>
std::vector<T> complete_from_elementary(const std::vector<T>& e, int max_deg, const T& zero, const T& one) {
    std::vector<T> h(max_deg + 1, zero);
    h[0] = one;
    int top = static_cast<int>(e.size()) - 1;
    for (int m = 1; m <= max_deg; ++m) {
        T acc = zero;
        for (int i = 1; i <= std::min(m, top); ++i) {
            T t = e[i] * h[m - i];
            if (i & 1)
                acc = acc + t;
            else
                acc = acc - t;
        }
        h[m] = acc;
    }
    return h;
}

// s_mu = det(h_{mu_i - i + j})
template <class T>
T schur_h(const std::vector<T>& e, const Partition& mu_in, const T& zero, const T& one) {
    Partition mu = trim_partition(mu_in);
    int nvars = static_cast<int>(e.size()) - 1;
    if (static_cast<int>(mu.size()) > nvars) throw Error(Errc::TooManyRows, "partition has more rows than eigenvalues");
    if (mu.empty()) return one;
    int l = static_cast<int>(mu.size());
    int maxd = mu.front() + l;
    auto h = complete_from_elementary(e, maxd, zero, one);
    std::vector<std::vector<T>> M(l, std::vector<T>(l, zero));
    std::vector<std::vector<bool>> z(l, std::vector<bool>(l, true));
    for (int i = 0; i < l; ++i)
        for (int j = 0; j < l; ++j) {
            int d = mu[i] - i + j;
            if (d < 0) continue;
            M[i][j] = h[d];
            z[i][j] = false;
        }
    return ring_det(M, zero, one, z);
}

// s_mu = det(e_{mu'_i - i + j})
template <class T>
T schur_e(const std::vector<T>& e, const Partition& mu_in, const T& zero, const T& one) {
    Partition mu = trim_partition(mu_in);
    int nvars = static_cast<int>(e.size()) - 1;
    if (static_cast<int>(mu.size()) > nvars) throw Error(Errc::TooManyRows, "partition has more rows than eigenvalues");
    Partition mc = conjugate(mu);
    if (mc.empty()) return one;
    int l = static_cast<int>(mc.size());
    std::vector<std::vector<T>> M(l, std::vector<T>(l, zero));
    std::vector<std::vector<bool>> z(l, std::vector<bool>(l, true));
    for (int i = 0; i < l; ++i)
        for (int j = 0; j < l; ++j) {
            int d = mc[i] - i + j;
            if (d < 0 || d > nvars) continue;
            M[i][j] = e[d];
            z[i][j] = false;
        }
    return ring_det(M, zero, one, z);
}

// dimension of the SL_{n+1} representation: s_mu(1,...,1)
inline BigInt schur_dimension(int nplus1, const Partition& mu) {
    std::vector<BigInt> e(nplus1 + 1);
    for (int j = 0; j <= nplus1; ++j) e[j] = binomial(nplus1, j);
    return schur_h<BigInt>(e, mu, BigInt(0), BigInt(1));
}

} // namespace kloost
