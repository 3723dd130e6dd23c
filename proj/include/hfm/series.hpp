#pragma once
// Exact generating-series machinery for h-full counting: the alpha_{r,h}
// polynomial identity, the l_h / g_h coefficient streams, T_h partial sums,
// and the convolution route to |N_h(x)|.  All arithmetic here is exact
// integer arithmetic; overflow aborts rather than wrapping.

#include <map>
#include <stdexcept>
#include <vector>

#include "core.hpp"
#include "util.hpp"

namespace hfm {

// Integer coefficients alpha_{r,h} of the identity
//   (1 + v^h/(1-v)) (1-v^h)(1-v^{h+1})...(1-v^{2h-1})
//     = 1 - v^{2h+2} + sum_{r=2h+3}^{(3h^2+h-2)/2} alpha_{r,h} v^r .
// Empty for h = 2, where the left side collapses to 1 - v^6.
struct AlphaPolynomial {
    int h = 2;
    std::map<int, i64> alpha;  // r -> alpha_{r,h}, nonzero entries only

    int r_min() const { return 2 * h + 3; }
    int r_max() const { return (3 * h * h + h - 2) / 2; }
    i64 coeff(int r) const {
        auto it = alpha.find(r);
        return it == alpha.end() ? 0 : it->second;
    }
    // Local Euler-factor polynomial 1 - v^{2h+2} + sum alpha_r v^r as a
    // coefficient vector (index = exponent).
    std::vector<i64> local_polynomial() const {
        std::vector<i64> p(static_cast<std::size_t>(r_max()) + 1, 0);
        p[0] = 1;
        p[2 * h + 2] = -1;
        for (auto& [r, a] : alpha) p[r] = a;
        return p;
    }
};

inline std::vector<i64> poly_mul(const std::vector<i64>& a, const std::vector<i64>& b) {
    std::vector<i64> c(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            c[i + j] = checked_add_i64(c[i + j], checked_mul_i64(a[i], b[j]));
    }
    return c;
}

// Expands the left side exactly (the 1/(1-v) factor cancels against 1-v^h)
// and matches it against the stated right-side shape.  Any mismatch is an
// internal-consistency failure.
inline AlphaPolynomial alpha_coeffs(int h) {
    require_h(h);
    if (h > 12) throw std::invalid_argument("alpha_coeffs: practical bound is h <= 12");

    // (1 - v + v^h) * (1 + v + ... + v^{h-1}) * prod_{j=h+1}^{2h-1} (1 - v^j)
    std::vector<i64> lhs(static_cast<std::size_t>(h) + 1, 0);
    lhs[0] = 1;
    lhs[1] = -1;
    lhs[static_cast<std::size_t>(h)] += 1;
    std::vector<i64> geo(static_cast<std::size_t>(h), 1);
    lhs = poly_mul(lhs, geo);
    for (int j = h + 1; j <= 2 * h - 1; ++j) {
        std::vector<i64> factor(static_cast<std::size_t>(j) + 1, 0);
        factor[0] = 1;
        factor[static_cast<std::size_t>(j)] = -1;
        lhs = poly_mul(lhs, factor);
    }

    AlphaPolynomial out;
    out.h = h;
    const int rmax = out.r_max();
    if (static_cast<int>(lhs.size()) - 1 > rmax)
        for (std::size_t r = rmax + 1; r < lhs.size(); ++r)
            if (lhs[r] != 0) throw internal_error("alpha identity: degree exceeds (3h^2+h-2)/2");
    if (lhs[0] != 1) throw internal_error("alpha identity: constant term != 1");
    for (int r = 1; r <= 2 * h + 1 && r < static_cast<int>(lhs.size()); ++r)
        if (lhs[r] != 0) throw internal_error("alpha identity: nonzero coefficient below 2h+2");
    if (2 * h + 2 >= static_cast<int>(lhs.size()) || lhs[2 * h + 2] != -1)
        throw internal_error("alpha identity: coefficient at 2h+2 is not -1");
    const i64 bound = checked_mul_i64(h, i64{1} << h);
    for (int r = 2 * h + 3; r <= rmax && r < static_cast<int>(lhs.size()); ++r) {
        if (lhs[r] == 0) continue;
        if (lhs[r] > bound || lhs[r] < -bound)
            throw internal_error("alpha identity: |alpha_{r,h}| exceeds h*2^h");
        out.alpha[r] = lhs[r];
    }
    return out;
}

// Re-derives the coefficients and compares; a mismatch (for instance a
// corrupted table) is an internal-consistency failure.
inline void verify_alpha(const AlphaPolynomial& ap) {
    AlphaPolynomial fresh = alpha_coeffs(ap.h);
    if (fresh.alpha != ap.alpha)
        throw internal_error("alpha coefficient table fails the identity recheck");
}

enum class SeriesKind { l_h, g_h };

// A coefficient stream over norm keys: sparse (norm, value) pairs on dense
// grids, a dense per-degree array on graded grids.
struct CoefficientStream {
    SeriesKind which = SeriesKind::l_h;
    Grid grid = Grid::dense;
    std::vector<std::pair<u64, i64>> dense_values;  // sorted by norm
    std::vector<i64> graded_values;                 // index = degree
};

// --- l_h -------------------------------------------------------------------
//
// l_h(n) counts tuples (a_0,...,a_{h-1}) of monoid elements with
// N(a_0)^h N(a_1)^{h+1} ... N(a_{h-1})^{2h-1} = n.  The recursion iterates
// from the largest stretch exponent (2h-1) downward, so the smallest
// component ranges come first.

namespace detail {
template <class Counts>
inline void lh_tuples_rec(const Counts& counts, u64 x, int h, int i, u64 prod, i64 weight,
                          std::vector<i64>& out) {
    if (i < 0) {
        out[prod] += weight;
        return;
    }
    const unsigned exp = static_cast<unsigned>(h + i);
    for (u64 n = 1;; ++n) {
        u128 p = prod;
        bool fits = true;
        for (unsigned k = 0; k < exp; ++k) {
            p *= n;
            if (p > x) { fits = false; break; }
        }
        if (!fits) break;
        i64 c = counts[static_cast<std::size_t>(n)];
        if (c != 0)
            lh_tuples_rec(counts, x, h, i - 1, static_cast<u64>(p), checked_mul_i64(weight, c),
                          out);
    }
}
}  // namespace detail

// Dense grids: per-norm l_h values for n <= x.
template <class Inst>
std::vector<i64> lh_counts_by_norm(const Inst& inst, int h, u64 x) {
    static_assert(Inst::grid() == Grid::dense);
    require_h(h);
    std::vector<i64> counts = inst.element_counts_by_norm(x);
    std::vector<i64> out(x + 1, 0);
    detail::lh_tuples_rec(counts, x, h, h - 1, 1, 1, out);
    return out;
}

// Graded grids: per-degree l_h values for degree <= n_max.
inline std::vector<i64> lh_counts_by_degree(const std::vector<u64>& element_counts, int h,
                                            unsigned n_max) {
    require_h(h);
    std::vector<i64> cur(n_max + 1, 0);
    cur[0] = 1;
    for (int i = h - 1; i >= 0; --i) {
        const unsigned exp = static_cast<unsigned>(h + i);
        std::vector<i64> next(n_max + 1, 0);
        for (unsigned d = 0; d * exp <= n_max; ++d) {
            u64 c = d < element_counts.size() ? element_counts[d] : 0;
            if (c == 0) continue;
            for (unsigned m = 0; m + d * exp <= n_max; ++m)
                if (cur[m] != 0)
                    next[m + d * exp] = checked_add_i64(
                        next[m + d * exp], checked_mul_i64(cur[m], static_cast<i64>(c)));
        }
        cur = std::move(next);
    }
    return cur;
}

// T_h(y) for every grid point y <= x: prefix sums of the l_h stream.
template <class Inst>
std::vector<i64> lh_partial_sums(const Inst& inst, int h, u64 x) {
    std::vector<i64> t = lh_counts_by_norm(inst, h, x);
    for (u64 n = 1; n + 1 <= x; ++n) t[n + 1] = checked_add_i64(t[n + 1], t[n]);
    return t;
}

// --- g_h -------------------------------------------------------------------
//
// g_h is multiplicative with local polynomial 1 - v^{2h+2} + sum alpha_r v^r
// in v = N(p)^{-s}; the division by zeta((2h+2)s) is already embodied there.

template <class Inst>
CoefficientStream gh_coeffs(const Inst& inst, int h, u64 x) {
    static_assert(Inst::grid() == Grid::dense);
    const AlphaPolynomial ap = alpha_coeffs(h);
    std::vector<std::pair<unsigned, i64>> exps;  // (exponent, coefficient), exponent >= 2h+2
    exps.emplace_back(static_cast<unsigned>(2 * h + 2), -1);
    for (auto& [r, a] : ap.alpha) exps.emplace_back(static_cast<unsigned>(r), a);

    std::vector<PrimeHandle> handles;
    u64 prime_bound = iroot(x, static_cast<unsigned>(2 * h + 2));
    inst.for_each_prime_handle(std::max<u64>(prime_bound, 2), [&](PrimeHandle ph) {
        if (ph.norm_key <= prime_bound) handles.push_back(ph);
    });

    std::map<u64, i64> acc;
    // depth-first over handles, exponent 0 or one of the support exponents
    struct Frame { std::size_t i; u64 norm; i64 coeff; };
    std::vector<Frame> stack{{0, 1, 1}};
    while (!stack.empty()) {
        Frame f = stack.back();
        stack.pop_back();
        acc[f.norm] = checked_add_i64(acc[f.norm], f.coeff);
        for (std::size_t j = f.i; j < handles.size(); ++j) {
            u64 t = handles[j].norm_key;
            for (auto& [e, c] : exps) {
                u128 p = f.norm;
                bool fits = true;
                for (unsigned k = 0; k < e; ++k) {
                    p *= t;
                    if (p > x) { fits = false; break; }
                }
                if (!fits) break;  // larger exponents only grow
                stack.push_back({j + 1, static_cast<u64>(p), checked_mul_i64(f.coeff, c)});
            }
            if (static_cast<u128>(f.norm) * checked_pow(t, static_cast<unsigned>(2 * h + 2)) > x)
                break;
        }
    }

    CoefficientStream out;
    out.which = SeriesKind::g_h;
    out.grid = Grid::dense;
    for (auto& [n, v] : acc)
        if (v != 0 || n == 1) out.dense_values.emplace_back(n, v);
    return out;
}

// Graded version as a dense per-degree array.
template <class Inst>
CoefficientStream gh_coeffs_by_degree(const Inst& inst, int h, unsigned n_max) {
    static_assert(Inst::grid() == Grid::graded);
    const AlphaPolynomial ap = alpha_coeffs(h);
    std::vector<std::pair<unsigned, i64>> exps;
    exps.emplace_back(static_cast<unsigned>(2 * h + 2), -1);
    for (auto& [r, a] : ap.alpha) exps.emplace_back(static_cast<unsigned>(r), a);

    std::vector<i64> series(n_max + 1, 0);
    series[0] = 1;
    inst.for_each_prime_handle(n_max / static_cast<unsigned>(2 * h + 2), [&](PrimeHandle ph) {
        unsigned d = static_cast<unsigned>(ph.norm_key);
        std::vector<i64> next(series);
        for (auto& [e, c] : exps) {
            if (static_cast<u64>(e) * d > n_max) break;
            unsigned shift = e * d;
            for (unsigned m = 0; m + shift <= n_max; ++m)
                if (series[m] != 0)
                    next[m + shift] = checked_add_i64(next[m + shift],
                                                      checked_mul_i64(series[m], c));
        }
        series = std::move(next);
    });

    CoefficientStream out;
    out.which = SeriesKind::g_h;
    out.grid = Grid::graded;
    out.graded_values = std::move(series);
    return out;
}

// --- convolution -----------------------------------------------------------

// Per-norm counts of h-full elements via sum_{mn = k} g_h(m) l_h(n).
template <class Inst>
std::vector<i64> hfull_counts_by_norm(const Inst& inst, int h, u64 x) {
    static_assert(Inst::grid() == Grid::dense);
    std::vector<i64> l = lh_counts_by_norm(inst, h, x);
    CoefficientStream g = gh_coeffs(inst, h, x);
    std::vector<i64> conv(x + 1, 0);
    std::vector<std::pair<u64, i64>> l_sparse;
    for (u64 n = 1; n <= x; ++n)
        if (l[n] != 0) l_sparse.emplace_back(n, l[n]);
    for (auto& [m, gm] : g.dense_values)
        for (auto& [n, ln] : l_sparse) {
            u128 k = static_cast<u128>(m) * n;
            if (k > x) break;
            conv[static_cast<u64>(k)] =
                checked_add_i64(conv[static_cast<u64>(k)], checked_mul_i64(gm, ln));
        }
    return conv;
}

template <class Inst>
std::vector<i64> hfull_counts_by_degree(const Inst& inst, int h, unsigned n_max) {
    static_assert(Inst::grid() == Grid::graded);
    std::vector<i64> l = lh_counts_by_degree(inst.element_counts(n_max), h, n_max);
    CoefficientStream g = gh_coeffs_by_degree(inst, h, n_max);
    std::vector<i64> conv(n_max + 1, 0);
    for (unsigned a = 0; a <= n_max; ++a) {
        if (g.graded_values[a] == 0) continue;
        for (unsigned b = 0; a + b <= n_max; ++b)
            if (l[b] != 0)
                conv[a + b] = checked_add_i64(conv[a + b],
                                              checked_mul_i64(g.graded_values[a], l[b]));
    }
    return conv;
}

// Exact |N_h(x)|, to be cross-checked against the census route.
template <class Inst>
i64 hfull_count_by_convolution(const Inst& inst, int h, u64 x) {
    if constexpr (Inst::grid() == Grid::dense) {
        std::vector<i64> conv = hfull_counts_by_norm(inst, h, x);
        i64 total = 0;
        for (u64 n = 1; n <= x; ++n) total = checked_add_i64(total, conv[n]);
        return total;
    } else {
        std::vector<i64> conv = hfull_counts_by_degree(inst, h, static_cast<unsigned>(x));
        i64 total = 0;
        for (i64 v : conv) total = checked_add_i64(total, v);
        return total;
    }
}

}  // namespace hfm
