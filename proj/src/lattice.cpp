// Monomial equations over Q^*: magnitudes through an integer kernel,
// signs through linear algebra over GF(2).

#include "rht/endo.hpp"

#include <algorithm>

namespace rht {

std::vector<std::vector<Integer>> integer_kernel(const std::vector<std::vector<Integer>>& rows, std::size_t n) {
    std::vector<std::vector<Integer>> A = rows;  // m x n
    std::vector<std::vector<Integer>> U(n, std::vector<Integer>(n, 0));
    for (std::size_t i = 0; i < n; ++i) U[i][i] = 1;
    auto col_swap = [&](std::size_t a, std::size_t b) {
        for (auto& r : A) std::swap(r[a], r[b]);
        for (auto& r : U) std::swap(r[a], r[b]);
    };
    auto col_axpy = [&](std::size_t dst, const Integer& q, std::size_t src) {  // col dst -= q col src
        for (auto& r : A) r[dst] -= q * r[src];
        for (auto& r : U) r[dst] -= q * r[src];
    };
    std::size_t k = 0;
    for (std::size_t r = 0; r < A.size() && k < n; ++r) {
        for (;;) {
            // smallest nonzero entry of row r among columns >= k goes to k
            std::size_t best = n;
            for (std::size_t j = k; j < n; ++j)
                if (A[r][j] != 0 && (best == n || abs(A[r][j]) < abs(A[r][best]))) best = j;
            if (best == n) break;
            if (best != k) col_swap(k, best);
            bool done = true;
            for (std::size_t j = k + 1; j < n; ++j) {
                if (A[r][j] == 0) continue;
                Integer q;
                mpz_fdiv_q(q.get_mpz_t(), A[r][j].get_mpz_t(), A[r][k].get_mpz_t());
                col_axpy(j, q, k);
                if (A[r][j] != 0) done = false;
            }
            if (done) {
                ++k;
                break;
            }
        }
    }
    // columns k.. of U span the kernel (unimodular transform => saturated)
    std::vector<std::vector<Integer>> K(n);
    for (std::size_t j = k; j < n; ++j) {
        bool allneg = true, any = false;
        for (std::size_t i = 0; i < n; ++i)
            if (U[i][j] != 0) any = true, allneg &= U[i][j] < 0;
        Integer s = (any && allneg) ? -1 : 1;
        for (std::size_t i = 0; i < n; ++i) K[i].push_back(s * U[i][j]);
    }
    return K;
}

namespace {

// x with A x = b over GF(2); returns false if inconsistent
bool solve_gf2(std::vector<std::vector<std::uint8_t>> A, std::vector<std::uint8_t> b, std::size_t n,
               std::vector<std::uint8_t>& particular, std::vector<std::vector<std::uint8_t>>& kernel) {
    std::vector<std::size_t> pivcol;
    std::size_t row = 0;
    for (std::size_t c = 0; c < n && row < A.size(); ++c) {
        std::size_t p = row;
        while (p < A.size() && !A[p][c]) ++p;
        if (p == A.size()) continue;
        std::swap(A[p], A[row]);
        std::swap(b[p], b[row]);
        for (std::size_t r = 0; r < A.size(); ++r)
            if (r != row && A[r][c]) {
                for (std::size_t j = 0; j < n; ++j) A[r][j] ^= A[row][j];
                b[r] ^= b[row];
            }
        pivcol.push_back(c);
        ++row;
    }
    for (std::size_t r = row; r < A.size(); ++r)
        if (b[r]) return false;
    particular.assign(n, 0);
    for (std::size_t r = 0; r < pivcol.size(); ++r) particular[pivcol[r]] = b[r];
    std::vector<bool> is_piv(n, false);
    for (auto c : pivcol) is_piv[c] = true;
    for (std::size_t f = 0; f < n; ++f) {
        if (is_piv[f]) continue;
        std::vector<std::uint8_t> v(n, 0);
        v[f] = 1;
        for (std::size_t r = 0; r < pivcol.size(); ++r)
            if (A[r][f]) v[pivcol[r]] = 1;
        kernel.push_back(std::move(v));
    }
    return true;
}

}  // namespace

MonomialSolution solve_monomial_system(const MonomialEquationSystem& sys) {
    MonomialSolution sol;
    sol.vars = sys.vars;
    for (auto& eq : sys.equations) {
        for (auto& f : eq.lhs.factors) sol.vars.push_back(f.first);
        for (auto& f : eq.rhs.factors) sol.vars.push_back(f.first);
    }
    std::sort(sol.vars.begin(), sol.vars.end());
    sol.vars.erase(std::unique(sol.vars.begin(), sol.vars.end()), sol.vars.end());
    std::size_t n = sol.vars.size();
    auto col = [&](SymbolId v) {
        return static_cast<std::size_t>(std::lower_bound(sol.vars.begin(), sol.vars.end(), v) - sol.vars.begin());
    };

    std::vector<std::vector<Integer>> R;
    std::vector<std::vector<std::uint8_t>> S;
    std::vector<std::uint8_t> b;
    for (auto& eq : sys.equations) {
        std::vector<Integer> row(n, 0);
        for (auto& [v, e] : eq.lhs.factors) row[col(v)] += e;
        for (auto& [v, e] : eq.rhs.factors) row[col(v)] -= e;
        std::vector<std::uint8_t> srow(n);
        for (std::size_t j = 0; j < n; ++j) srow[j] = mpz_odd_p(row[j].get_mpz_t()) ? 1 : 0;
        R.push_back(std::move(row));
        S.push_back(std::move(srow));
        b.push_back(eq.sign < 0 ? 1 : 0);
    }
    sol.kernel = integer_kernel(R, n);
    sol.consistent = solve_gf2(S, b, n, sol.sign_particular, sol.sign_kernel);
    return sol;
}

std::vector<std::vector<int>> MonomialSolution::sign_points(std::size_t cap) const {
    std::vector<std::vector<int>> out;
    if (!consistent) return out;
    std::size_t k = sign_kernel.size();
    if (k >= 63) k = 62;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k) && out.size() < cap; ++mask) {
        std::vector<std::uint8_t> s = sign_particular;
        for (std::size_t j = 0; j < k; ++j)
            if (mask >> j & 1)
                for (std::size_t i = 0; i < s.size(); ++i) s[i] ^= sign_kernel[j][i];
        std::vector<int> p;
        for (auto x : s) p.push_back(x ? -1 : 1);
        out.push_back(std::move(p));
    }
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

}  // namespace rht
