#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

// dim of degree-k harmonic polynomials in n variables, computed as
// dim P_k - rank(Laplacian: P_k -> P_{k-2}) with exact rational elimination.

namespace oracle {

using Rational = boost::multiprecision::cpp_rational;
using Exponents = std::vector<int>;

inline void monomials(int n, int k, Exponents& cur, int axis, std::vector<Exponents>& out) {
    if (axis == n - 1) {
        cur[axis] = k;
        out.push_back(cur);
        return;
    }
    for (int e = k; e >= 0; --e) {
        cur[axis] = e;
        monomials(n, k - e, cur, axis + 1, out);
    }
}

inline std::vector<Exponents> monomials(int n, int k) {
    std::vector<Exponents> out;
    if (k < 0) return out;
    Exponents cur(n, 0);
    monomials(n, k, cur, 0, out);
    return out;
}

inline int rank(std::vector<std::vector<Rational>> a) {
    const std::size_t rows = a.size();
    const std::size_t cols = rows ? a[0].size() : 0;
    int r = 0;
    for (std::size_t c = 0; c < cols && r < static_cast<int>(rows); ++c) {
        std::size_t p = r;
        while (p < rows && a[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(a[p], a[r]);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == static_cast<std::size_t>(r) || a[i][c] == 0) continue;
            const Rational f = a[i][c] / a[r][c];
            for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
        }
        ++r;
    }
    return r;
}

inline std::int64_t harmonic_dim_bruteforce(int n, int k) {
    const auto source = monomials(n, k);
    const auto target = monomials(n, k - 2);
    if (target.empty()) return static_cast<std::int64_t>(source.size());
    std::map<Exponents, std::size_t> row;
    for (std::size_t i = 0; i < target.size(); ++i) row[target[i]] = i;
    std::vector<std::vector<Rational>> lap(target.size(), std::vector<Rational>(source.size(), 0));
    for (std::size_t c = 0; c < source.size(); ++c) {
        for (int axis = 0; axis < n; ++axis) {
            const int e = source[c][axis];
            if (e < 2) continue;
            Exponents d = source[c];
            d[axis] -= 2;
            lap[row.at(d)][c] += e * (e - 1);
        }
    }
    return static_cast<std::int64_t>(source.size()) - rank(lap);
}

}  // namespace oracle
